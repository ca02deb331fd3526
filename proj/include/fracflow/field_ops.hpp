#pragma once

#include <complex>
#include <vector>

#include "fracflow/grid.hpp"
#include "fracflow/kernel.hpp"

namespace fracflow {

// Where the spatial derivative sits relative to the smoothing convolution:
// DerivativeInside smooths the derivative, DerivativeOutside differentiates
// the smoothed field. On the periodic torus the two commute.
enum class OperatorVariant { DerivativeInside, DerivativeOutside };

const char* to_string(OperatorVariant v);
OperatorVariant variant_from_string(const std::string& name);

// Spectral: Fourier multipliers (periodic, power-of-two grids only).
// Direct: truncated real-space quadrature at radius 8 sigma (periodic
// wrapping or truncated zero-extension) and 2nd-order finite differences.
enum class FieldBackend { Spectral, Direct };

const char* to_string(FieldBackend b);
FieldBackend backend_from_string(const std::string& name);

// Gaussian smoothing of f. Spectral backend multiplies each mode by the
// mollifier symbol; direct backend integrates the kernel stencil in real
// space. The classical-limit order is the identity.
ScalarField mollify(const ScalarField& f, FractionalOrder order,
                    NormalizationMode mode = NormalizationMode::UnitMass,
                    FieldBackend backend = FieldBackend::Spectral);

VectorField grad_beta(const ScalarField& f, FractionalOrder order, OperatorVariant variant,
                      NormalizationMode mode = NormalizationMode::UnitMass,
                      FieldBackend backend = FieldBackend::Spectral);

ScalarField div_beta(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                     NormalizationMode mode = NormalizationMode::UnitMass,
                     FieldBackend backend = FieldBackend::Spectral);

// Smoothed Laplacian: mollify(laplacian f); spectral symbol -|k|^2 G(|k|^2).
ScalarField laplacian_beta(const ScalarField& f, FractionalOrder order,
                           NormalizationMode mode = NormalizationMode::UnitMass,
                           FieldBackend backend = FieldBackend::Spectral);

// Smoothed curl. 2D fields yield the scalar vorticity, 3D the curl vector;
// 1D has no curl (UnsupportedDimension).
ScalarField curl2d_beta(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                        NormalizationMode mode = NormalizationMode::UnitMass,
                        FieldBackend backend = FieldBackend::Spectral);
VectorField curl3d_beta(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                        NormalizationMode mode = NormalizationMode::UnitMass,
                        FieldBackend backend = FieldBackend::Spectral);

// Velocity-gradient tensor, outer-product reading: comp(i,j) = d_i^beta v_j.
TensorField grad_tensor_beta(const VectorField& v, FractionalOrder order,
                             OperatorVariant variant,
                             NormalizationMode mode = NormalizationMode::UnitMass,
                             FieldBackend backend = FieldBackend::Spectral);

// Strain rate: symmetric part of the velocity-gradient tensor.
TensorField strain_rate(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                        NormalizationMode mode = NormalizationMode::UnitMass,
                        FieldBackend backend = FieldBackend::Spectral);

// Stress: -p I + 2 mu Lambda + lambda_bulk (div_beta v) I.
TensorField cauchy_stress(const VectorField& v, const ScalarField& p, double mu,
                          double lambda_bulk, FractionalOrder order,
                          NormalizationMode mode = NormalizationMode::UnitMass,
                          FieldBackend backend = FieldBackend::Spectral);

// Diagnostic residual of the transport balance: drho_dt + v . grad_beta(rho).
ScalarField continuity_residual(const ScalarField& rho, const ScalarField& drho_dt,
                                const VectorField& v, FractionalOrder order,
                                NormalizationMode mode = NormalizationMode::UnitMass,
                                FieldBackend backend = FieldBackend::Spectral);

// Classical (unsmoothed) counterparts; reference operators for limit checks
// and the outer divergence of the stress in the momentum balance.
VectorField gradient(const ScalarField& f, FieldBackend backend = FieldBackend::Spectral);
ScalarField divergence(const VectorField& v, FieldBackend backend = FieldBackend::Spectral);
ScalarField laplacian(const ScalarField& f, FieldBackend backend = FieldBackend::Spectral);
ScalarField curl2d(const VectorField& v, FieldBackend backend = FieldBackend::Spectral);
VectorField curl3d(const VectorField& v, FieldBackend backend = FieldBackend::Spectral);

// Pointwise product, optionally Galerkin-truncated by the 2/3 rule (modes
// with any |j| > N/3 zeroed) to absorb the quadratic aliasing.
ScalarField multiply(const ScalarField& a, const ScalarField& b, bool dealias);

// Zero all modes with any axis index |j| > N/3 in an r2c spectral buffer.
void dealias_23(const GridSpec& grid, std::vector<std::complex<double>>& spec);

}  // namespace fracflow
