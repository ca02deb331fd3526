#pragma once

#include <functional>
#include <optional>

#include "fracflow/analytic.hpp"
#include "fracflow/field_ops.hpp"
#include "fracflow/report.hpp"

namespace fracflow {

enum class HeatIntegrator { Exponential, RK4, ForwardEuler };

const char* to_string(HeatIntegrator i);
HeatIntegrator heat_integrator_from_string(const std::string& name);

// Transient conduction with volumetric generation,
//   dT/dt = (kappa/(rho c)) * smoothed Laplacian(T) + g/(rho c),
// on periodic grids (spectral, all integrators) or truncated 1D/2D grids
// (direct backend, explicit integrators only).
struct HeatConfig {
  GridSpec grid;
  FractionalOrder beta{0.5};
  NormalizationMode mode = NormalizationMode::UnitMass;
  double kappa = 1.0;
  double rho = 1.0;
  double c_heat = 1.0;
  AnalyticField source;                      // ignored when source_field is set
  std::optional<ScalarField> source_field;
  AnalyticField initial;                     // ignored when initial_field is set
  std::optional<ScalarField> initial_field;
  double dt = 0.01;
  long steps = 100;
  HeatIntegrator integrator = HeatIntegrator::Exponential;

  double diffusivity() const { return kappa / (rho * c_heat); }
  FieldBackend backend() const {
    return grid.boundary == Boundary::Periodic ? FieldBackend::Spectral : FieldBackend::Direct;
  }
  ScalarField sample_source() const;
  ScalarField sample_initial() const;
  void validate() const;  // throws config_error
};

// Flux law q = -kappa * grad_beta(T).
VectorField heat_flux(const ScalarField& T, FractionalOrder order, NormalizationMode mode,
                      double kappa, FieldBackend backend = FieldBackend::Spectral);

// Explicit-step bound 2 / max_k nu_k with nu_k = (kappa/rho c) |k|^2 G(|k|^2).
// The continuum maximizer s e^(-a s) peaks at s = 1/a; the resolved maximum
// is that peak when 1/a lies inside the band, else the cutoff mode.
double stability_limit(const HeatConfig& cfg);

// One time step. The exponential integrator is exact per mode; RK4 and
// forward Euler integrate the same semi-discrete system, Euler guarded by
// the stability limit.
ScalarField step_heat(const ScalarField& state, const HeatConfig& cfg);

// Direct steady solve T_hat = g_hat / (kappa |k|^2 G); requires a zero-mean
// source (the k=0 balance is otherwise unsatisfiable).
ScalarField steady_heat(const HeatConfig& cfg);

struct HeatSnapshotHook {
  int every = 0;  // write every this-many steps; 0 disables
  std::function<void(long step, double time, const ScalarField& T)> write;
};

RunReport run_heat(const HeatConfig& cfg, const HeatSnapshotHook& hook = {});

}  // namespace fracflow
