#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "fracflow/analytic.hpp"
#include "fracflow/field_ops.hpp"
#include "fracflow/report.hpp"

namespace fracflow {

enum class NSInitial { TaylorGreen, RandomDivFree, Sampled };

const char* to_string(NSInitial i);
NSInitial ns_initial_from_string(const std::string& name);

// 2D incompressible flow on the periodic torus:
//   rho dv/dt = -(smoothed grad) p + mu * smoothed Laplacian(v)
//               + rho b - rho (v . grad_beta) v,    div_beta v = 0.
// Pseudo-spectral: RK4 on convection and forcing, exact integrating factor
// on the viscous symbol, Leray projection after each substage.
struct NSConfig {
  GridSpec grid{2, 64, two_pi, Boundary::Periodic};
  FractionalOrder beta{0.5};
  NormalizationMode mode = NormalizationMode::UnitMass;
  double mu = 0.01;
  double rho = 1.0;
  double lambda_bulk = 0.0;  // inert for incompressible runs; kept for stress output
  NSInitial initial = NSInitial::TaylorGreen;
  std::uint64_t seed = 1;
  double spectrum_slope = -2.0;
  std::optional<VectorField> initial_field;  // used when initial == Sampled
  AnalyticField force_x, force_y;            // body force b; zero when empty
  double dt = 0.0;                           // 0 selects the default step rule
  long steps = 100;
  bool dealias = true;
  // Non-default comparison switch: apply the smoothing twice in the viscous
  // term (divergence and strain both fractional) instead of once.
  bool double_mollify_viscous = false;
  OperatorVariant variant = OperatorVariant::DerivativeOutside;

  bool has_force() const { return !force_x.zero() || !force_y.zero(); }
  void validate() const;  // throws config_error
  // Configured dt, or min(2/max viscous symbol, 0.5 h / max|v0|).
  double effective_dt(const VectorField& v0) const;
};

struct NSState {
  VectorField velocity;
  ScalarField pressure;
  double time = 0.0;
};

// v = (sin x cos y, -cos x sin y): divergence-free, single wavenumber shell.
VectorField taylor_green(const GridSpec& grid);

// Seeded white noise shaped to an isotropic |k|^(slope) spectrum, projected
// divergence-free, zero mean, normalized to max |v| = 1.
VectorField random_div_free(const GridSpec& grid, std::uint64_t seed, double slope);

// Splits v into a divergence-free part and the smoothed gradient of a
// pressure potential: per mode v_sol = v - k (k.v)/|k|^2, and
// p = -i (k.v)/(|k|^2 G). Modes where G < 1e-14 contribute zero pressure;
// their count is returned through guarded_modes when non-null.
std::pair<VectorField, ScalarField> leray_project(const VectorField& v, FractionalOrder order,
                                                  NormalizationMode mode,
                                                  int* guarded_modes = nullptr);

// (v . grad_beta) v, products formed in physical space, optionally 2/3-rule
// dealiased.
VectorField convection(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                       NormalizationMode mode, bool dealias = true);

NSState make_initial_state(const NSConfig& cfg);
NSState step_ns(const NSState& state, const NSConfig& cfg);

struct NSDiagnostics {
  TensorField strain;
  TensorField stress;
  double lambda_term_norm = 0.0;
  double max_div_residual = 0.0;
  double energy = 0.0;
  double enstrophy = 0.0;
};

NSDiagnostics ns_diagnostics(const NSState& state, const NSConfig& cfg);

double kinetic_energy(const VectorField& v);
double enstrophy2d(const VectorField& v);

struct NSSnapshotHook {
  int every = 0;
  std::function<void(long step, double time, const NSState& state)> write;
};

RunReport run_ns(const NSConfig& cfg, const NSSnapshotHook& hook = {});

}  // namespace fracflow
