#include "fracflow/ns.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "fracflow/fft.hpp"

namespace fracflow {

const char* to_string(NSInitial i) {
  switch (i) {
    case NSInitial::TaylorGreen: return "taylor-green";
    case NSInitial::RandomDivFree: return "random";
    case NSInitial::Sampled: return "sampled";
  }
  return "?";
}

NSInitial ns_initial_from_string(const std::string& name) {
  if (name == "taylor-green") return NSInitial::TaylorGreen;
  if (name == "random") return NSInitial::RandomDivFree;
  if (name == "sampled") return NSInitial::Sampled;
  throw config_error("unknown initial flow '" + name +
                     "' (expected taylor-green, random or sampled)");
}

void NSConfig::validate() const {
  if (grid.ndim != 2) throw config_error("the flow solver is two-dimensional (grid ndim = 2)");
  if (grid.boundary != Boundary::Periodic)
    throw config_error("the flow solver runs on periodic grids only");
  if (!is_pow2(grid.n))
    throw config_error("the flow solver is spectral and needs a power-of-two grid");
  if (mu < 0.0 || !std::isfinite(mu))
    throw config_error("shear viscosity mu must be nonnegative and finite");
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw config_error("density rho must be positive and finite");
  if (!std::isfinite(lambda_bulk)) throw config_error("lambda must be finite");
  if (dt < 0.0 || !std::isfinite(dt)) throw config_error("dt must be nonnegative (0 = default)");
  if (steps < 0) throw config_error("step count must be nonnegative");
  if (initial == NSInitial::Sampled && !initial_field)
    throw config_error("initial = sampled needs a velocity field input");
}

VectorField taylor_green(const GridSpec& grid) {
  if (grid.ndim != 2) throw std::invalid_argument("the Taylor-Green vortex is two-dimensional");
  VectorField v(grid);
  const int n = grid.n;
  for (int i = 0; i < n; ++i) {
    const double x = grid.coord(i);
    for (int j = 0; j < n; ++j) {
      const double y = grid.coord(j);
      const std::size_t idx = v.comp(0).flat(i, j);
      v.comp(0)[idx] = std::sin(x) * std::cos(y);
      v.comp(1)[idx] = -std::cos(x) * std::sin(y);
    }
  }
  return v;
}

namespace {

using cvec = std::vector<std::complex<double>>;

struct Spec2 {
  cvec x, y;
};

Spec2 to_spec(const VectorField& v) {
  Spec2 s;
  fft::forward(v.grid(), v.comp(0).values(), s.x);
  fft::forward(v.grid(), v.comp(1).values(), s.y);
  return s;
}

// Consumes the spectral buffers (c2r transforms destroy their input).
VectorField to_phys(const GridSpec& grid, Spec2 s) {
  VectorField v(grid);
  fft::inverse(grid, s.x, v.comp(0).values());
  fft::inverse(grid, s.y, v.comp(1).values());
  return v;
}

// In-place removal of the gradient part: u -= k (k.u)/|k|^2.
void project_spec(const GridSpec& grid, Spec2& u) {
  fft::for_each_mode(grid, [&](const fft::ModeInfo& m) {
    if (m.ksq == 0.0) return;
    const std::complex<double> dot =
        (m.k[0] * u.x[m.index] + m.k[1] * u.y[m.index]) / m.ksq;
    u.x[m.index] -= m.k[0] * dot;
    u.y[m.index] -= m.k[1] * dot;
  });
}

// Pressure potential of the gradient part of u: p_hat = -i (k.u)/(|k|^2 G),
// zero on unpaired Nyquist bins, on coefficients at round-off level, and
// where the smoothing symbol is below the 1e-14 guard (counted).
ScalarField pressure_potential(const GridSpec& grid, const Spec2& u, FractionalOrder order,
                               NormalizationMode mode, int* guarded) {
  const double mass = mode_mass(order, grid.ndim, mode);
  const double a = order.gauss_coeff();
  double umax = 0.0;
  for (const auto& c : u.x) umax = std::max(umax, std::abs(c));
  for (const auto& c : u.y) umax = std::max(umax, std::abs(c));
  cvec p(fft::spectral_size(grid), {0.0, 0.0});
  fft::for_each_mode(grid, [&](const fft::ModeInfo& m) {
    if (m.ksq == 0.0 || m.any_nyquist) return;
    const double S = mass * std::exp(-a * m.ksq);
    const std::complex<double> dot = m.k[0] * u.x[m.index] + m.k[1] * u.y[m.index];
    // Transform round-off divided by a tiny symbol would surface as pressure
    // noise, so coefficients below round-off relative to the field are
    // dropped outright; significant content over a sub-guard symbol is
    // counted instead of amplified.
    if (std::abs(dot) <= 1e-13 * std::sqrt(m.ksq) * umax) return;
    if (S < 1e-14) {
      if (guarded) ++*guarded;
      return;
    }
    p[m.index] = std::complex<double>(0.0, -1.0) * dot / (m.ksq * S);
  });
  ScalarField out(grid);
  fft::inverse(grid, p, out.values());
  return out;
}

void check_finite_flow(const VectorField& v, const char* when) {
  if (!all_finite(v))
    throw numeric_error(std::string("NaN detected in the velocity field ") + when +
                        "; aborting the run");
}

// Viscous decay symbol l(k) = (mu/rho) |k|^2 G (single smoothing), or G^2
// under the double-smoothing comparison switch.
std::vector<double> viscous_symbols(const NSConfig& cfg) {
  const double mass = mode_mass(cfg.beta, cfg.grid.ndim, cfg.mode);
  const double a = cfg.beta.gauss_coeff();
  std::vector<double> l(fft::spectral_size(cfg.grid));
  fft::for_each_mode(cfg.grid, [&](const fft::ModeInfo& m) {
    double S = mass * std::exp(-a * m.ksq);
    if (cfg.double_mollify_viscous) S *= S;
    l[m.index] = cfg.mu / cfg.rho * m.ksq * S;
  });
  return l;
}

VectorField sample_force(const NSConfig& cfg) {
  VectorField b(cfg.grid);
  if (!cfg.force_x.zero()) b.comp(0) = cfg.force_x.sample(cfg.grid);
  if (!cfg.force_y.zero()) b.comp(1) = cfg.force_y.sample(cfg.grid);
  return b;
}

struct StepInfo {
  int guarded = 0;
  double max_speed = 0.0;
};

// One integrating-factor RK4 step; the nonlinear+forcing part
// N(v) = P[b - (v.grad_beta)v] is evaluated in physical space, projected,
// and combined with the exact per-mode viscous decay.
NSState step_ns_impl(const NSState& state, const NSConfig& cfg, StepInfo* info) {
  const GridSpec& grid = cfg.grid;
  if (!(state.velocity.grid() == grid))
    throw std::invalid_argument("flow state is not on the configured grid");
  check_finite_flow(state.velocity, "before the step");
  const double dt = cfg.dt;
  if (!(dt > 0.0)) throw std::invalid_argument("step_ns needs a positive dt in the config");

  if (info) info->max_speed = max_abs(state.velocity);

  const std::vector<double> l = viscous_symbols(cfg);
  const std::size_t M = l.size();
  std::vector<double> E(M), E2(M);
  for (std::size_t i = 0; i < M; ++i) {
    E[i] = std::exp(-l[i] * dt);
    E2[i] = std::exp(-l[i] * dt * 0.5);
  }

  const VectorField force = sample_force(cfg);
  const bool has_force = cfg.has_force();

  const auto N = [&](const Spec2& u) {
    VectorField v = to_phys(grid, u);  // u is copied in by value at call sites
    const VectorField conv = convection(v, cfg.beta, cfg.variant, cfg.mode, cfg.dealias);
    VectorField F(grid);
    for (int d = 0; d < 2; ++d) {
      const auto& c = conv.comp(d).values();
      const auto& b = force.comp(d).values();
      auto& f = F.comp(d).values();
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = (has_force ? b[i] : 0.0) - c[i];
    }
    Spec2 Fh = to_spec(F);
    project_spec(grid, Fh);
    return Fh;
  };

  const auto scaled = [&](const Spec2& u, const std::vector<double>& fac) {
    Spec2 r = u;
    for (std::size_t i = 0; i < M; ++i) {
      r.x[i] *= fac[i];
      r.y[i] *= fac[i];
    }
    return r;
  };
  const auto axpy = [&](Spec2 u, double alpha, const Spec2& w) {
    for (std::size_t i = 0; i < M; ++i) {
      u.x[i] += alpha * w.x[i];
      u.y[i] += alpha * w.y[i];
    }
    return u;
  };

  const Spec2 u0 = to_spec(state.velocity);
  const Spec2 k1 = N(u0);
  const Spec2 k2 = N(scaled(axpy(u0, 0.5 * dt, k1), E2));
  const Spec2 k3 = N(axpy(scaled(u0, E2), 0.5 * dt, k2));
  const Spec2 k4 = N(axpy(scaled(u0, E), dt, scaled(k3, E2)));

  Spec2 u1 = scaled(u0, E);
  {
    const Spec2 t1 = scaled(k1, E);
    const Spec2 k23 = axpy(k2, 1.0, k3);
    const Spec2 t23 = scaled(k23, E2);
    for (std::size_t i = 0; i < M; ++i) {
      u1.x[i] += dt / 6.0 * (t1.x[i] + 2.0 * t23.x[i] + k4.x[i]);
      u1.y[i] += dt / 6.0 * (t1.y[i] + 2.0 * t23.y[i] + k4.y[i]);
    }
  }

  NSState next;
  next.time = state.time + dt;
  next.velocity = to_phys(grid, std::move(u1));
  check_finite_flow(next.velocity, "after the step");

  // Pressure consistent with the new velocity: the potential whose smoothed
  // gradient balances the non-solenoidal part of rho (b - convection).
  {
    const VectorField conv = convection(next.velocity, cfg.beta, cfg.variant, cfg.mode,
                                        cfg.dealias);
    VectorField rhs(grid);
    for (int d = 0; d < 2; ++d) {
      const auto& c = conv.comp(d).values();
      const auto& b = force.comp(d).values();
      auto& r = rhs.comp(d).values();
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = (has_force ? b[i] : 0.0) - c[i];
    }
    const Spec2 rh = to_spec(rhs);
    int guard = 0;
    next.pressure = pressure_potential(grid, rh, cfg.beta, cfg.mode, &guard);
    for (double& p : next.pressure.values()) p *= cfg.rho;
    if (info) info->guarded += guard;
  }
  return next;
}

}  // namespace

VectorField random_div_free(const GridSpec& grid, std::uint64_t seed, double slope) {
  if (grid.ndim != 2)
    throw std::invalid_argument("random divergence-free initial data is two-dimensional");

  // Seeded white noise per component; explicit bit shifting keeps the values
  // identical across standard library implementations.
  VectorField v(grid);
  for (int d = 0; d < 2; ++d) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(d) + 1);
    for (double& x : v.comp(d).values())
      x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  }

  // Shape per-mode energy to |k|^slope, kill the mean, project, truncate.
  Spec2 s = to_spec(v);
  fft::for_each_mode(grid, [&](const fft::ModeInfo& m) {
    const double fac = m.ksq > 0.0 ? std::pow(m.ksq, 0.25 * slope) : 0.0;
    s.x[m.index] *= fac;
    s.y[m.index] *= fac;
  });
  project_spec(grid, s);
  dealias_23(grid, s.x);
  dealias_23(grid, s.y);
  v = to_phys(grid, std::move(s));

  const double vmax = max_abs(v);
  if (vmax > 0.0)
    for (int d = 0; d < 2; ++d)
      for (double& x : v.comp(d).values()) x /= vmax;
  return v;
}

std::pair<VectorField, ScalarField> leray_project(const VectorField& v, FractionalOrder order,
                                                  NormalizationMode mode, int* guarded_modes) {
  if (v.grid().ndim < 2)
    throw std::invalid_argument("the projection needs at least two dimensions");
  if (v.grid().ndim != 2)
    throw std::invalid_argument("the projection is implemented for two dimensions");
  Spec2 s = to_spec(v);
  int guard = 0;
  ScalarField p = pressure_potential(v.grid(), s, order, mode, &guard);
  project_spec(v.grid(), s);
  if (guarded_modes) *guarded_modes = guard;
  return {to_phys(v.grid(), std::move(s)), std::move(p)};
}

VectorField convection(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                       NormalizationMode mode, bool dealias) {
  const TensorField theta = grad_tensor_beta(v, order, variant, mode, FieldBackend::Spectral);
  VectorField out(v.grid());
  for (int i = 0; i < v.grid().ndim; ++i) {
    ScalarField acc(v.grid());
    for (int j = 0; j < v.grid().ndim; ++j) {
      const ScalarField term = multiply(v.comp(j), theta.comp(j, i), dealias);
      for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += term[m];
    }
    out.comp(i) = std::move(acc);
  }
  return out;
}

double NSConfig::effective_dt(const VectorField& v0) const {
  if (dt > 0.0) return dt;
  double cand = std::numeric_limits<double>::infinity();
  if (mu > 0.0) {
    const std::vector<double> l = viscous_symbols(*this);
    double lmax = 0.0;
    for (double x : l) lmax = std::max(lmax, x);
    if (lmax > 0.0) cand = 2.0 / lmax;
  }
  const double vmax = max_abs(v0);
  if (vmax > 0.0) cand = std::min(cand, 0.5 * grid.spacing() / vmax);
  if (!std::isfinite(cand))
    throw config_error("cannot derive a default dt (mu = 0 and the initial flow is at rest); "
                       "set dt explicitly");
  return cand;
}

NSState make_initial_state(const NSConfig& cfg) {
  cfg.validate();
  VectorField v0(cfg.grid);
  switch (cfg.initial) {
    case NSInitial::TaylorGreen: v0 = taylor_green(cfg.grid); break;
    case NSInitial::RandomDivFree:
      v0 = random_div_free(cfg.grid, cfg.seed, cfg.spectrum_slope);
      break;
    case NSInitial::Sampled:
      if (!(cfg.initial_field->grid() == cfg.grid))
        throw config_error("sampled initial velocity grid does not match the run grid");
      v0 = *cfg.initial_field;
      break;
  }
  check_finite_flow(v0, "in the initial data");

  NSState state;
  state.velocity = leray_project(v0, cfg.beta, cfg.mode).first;
  if (cfg.dealias) {
    Spec2 s = to_spec(state.velocity);
    dealias_23(cfg.grid, s.x);
    dealias_23(cfg.grid, s.y);
    state.velocity = to_phys(cfg.grid, std::move(s));
  }

  const double residual = max_abs(
      div_beta(state.velocity, cfg.beta, cfg.variant, cfg.mode, FieldBackend::Spectral));
  if (!(residual < 1e-10))
    throw numeric_error("initial velocity failed the divergence-free bound: residual " +
                        std::to_string(residual));

  // Pressure of the initial state, from the same balance the stepper uses.
  const VectorField conv = convection(state.velocity, cfg.beta, cfg.variant, cfg.mode,
                                      cfg.dealias);
  const VectorField force = sample_force(cfg);
  VectorField rhs(cfg.grid);
  for (int d = 0; d < 2; ++d)
    for (std::size_t i = 0; i < rhs.comp(d).size(); ++i)
      rhs.comp(d)[i] = force.comp(d)[i] - conv.comp(d)[i];
  const Spec2 rh = to_spec(rhs);
  state.pressure = pressure_potential(cfg.grid, rh, cfg.beta, cfg.mode, nullptr);
  for (double& p : state.pressure.values()) p *= cfg.rho;
  state.time = 0.0;
  return state;
}

NSState step_ns(const NSState& state, const NSConfig& cfg) {
  return step_ns_impl(state, cfg, nullptr);
}

double kinetic_energy(const VectorField& v) {
  const double n = l2_norm(v);
  return 0.5 * n * n;
}

double enstrophy2d(const VectorField& v) {
  const ScalarField w = curl2d(v, FieldBackend::Spectral);
  const double n = l2_norm(w);
  return 0.5 * n * n;
}

NSDiagnostics ns_diagnostics(const NSState& state, const NSConfig& cfg) {
  NSDiagnostics d;
  d.strain = strain_rate(state.velocity, cfg.beta, cfg.variant, cfg.mode);
  d.stress = cauchy_stress(state.velocity, state.pressure, cfg.mu, cfg.lambda_bulk, cfg.beta,
                           cfg.mode);
  const ScalarField div =
      div_beta(state.velocity, cfg.beta, cfg.variant, cfg.mode, FieldBackend::Spectral);
  d.max_div_residual = max_abs(div);
  d.lambda_term_norm = std::abs(cfg.lambda_bulk) * l2_norm(div);
  d.energy = kinetic_energy(state.velocity);
  d.enstrophy = enstrophy2d(state.velocity);
  return d;
}

RunReport run_ns(const NSConfig& cfg_in, const NSSnapshotHook& hook) {
  NSConfig cfg = cfg_in;
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  NSState state = make_initial_state(cfg);
  cfg.dt = cfg.effective_dt(state.velocity);

  RunReport report;
  {
    ReportValue::Object grid{{"boundary", "periodic"},
                             {"length", cfg.grid.length},
                             {"n", cfg.grid.n},
                             {"ndim", cfg.grid.ndim}};
    ReportValue::Object config{{"beta", cfg.beta.beta()},
                               {"dealias", cfg.dealias},
                               {"double_mollify_viscous", cfg.double_mollify_viscous},
                               {"dt", cfg.dt},
                               {"grid", std::move(grid)},
                               {"initial", to_string(cfg.initial)},
                               {"lambda", cfg.lambda_bulk},
                               {"mode", to_string(cfg.mode)},
                               {"mu", cfg.mu},
                               {"rho", cfg.rho},
                               {"seed", static_cast<long long>(cfg.seed)},
                               {"solver", "ns"},
                               {"spectrum_slope", cfg.spectrum_slope},
                               {"steps", cfg.steps},
                               {"variant", to_string(cfg.variant)}};
    report.set("config", ReportValue(std::move(config)));
  }

  std::vector<double> times, energy, enstrophy, divres;
  double max_div_overall = 0.0;
  int guarded_total = 0;
  bool cfl_warned = false;

  const auto record = [&]() {
    times.push_back(state.time);
    energy.push_back(kinetic_energy(state.velocity));
    enstrophy.push_back(enstrophy2d(state.velocity));
    const double r = max_abs(
        div_beta(state.velocity, cfg.beta, cfg.variant, cfg.mode, FieldBackend::Spectral));
    divres.push_back(r);
    max_div_overall = std::max(max_div_overall, r);
  };
  const auto snapshot = [&](long step) {
    if (hook.every > 0 && hook.write && (step % hook.every == 0 || step == cfg.steps))
      hook.write(step, state.time, state);
  };

  record();
  snapshot(0);
  for (long s = 1; s <= cfg.steps; ++s) {
    StepInfo info;
    state = step_ns_impl(state, cfg, &info);
    guarded_total += info.guarded;
    if (!cfl_warned && info.max_speed * cfg.dt / cfg.grid.spacing() > 0.5) {
      report.add_warning("CFL exceeded at step " + std::to_string(s) + ": max|v| dt/h = " +
                         std::to_string(info.max_speed * cfg.dt / cfg.grid.spacing()));
      cfl_warned = true;
    }
    record();
    snapshot(s);
  }
  if (guarded_total > 0)
    report.add_warning("pressure guard triggered on " + std::to_string(guarded_total) +
                       " mode updates (smoothing symbol below 1e-14)");

  report.set("series", ReportValue(ReportValue::Object{{"energy", ReportValue(energy)},
                                                       {"enstrophy", ReportValue(enstrophy)},
                                                       {"max_div_residual", ReportValue(divres)},
                                                       {"time", ReportValue(times)}}));
  report.set("final", ReportValue(ReportValue::Object{{"energy", energy.back()},
                                                      {"enstrophy", enstrophy.back()},
                                                      {"max_div_residual", divres.back()},
                                                      {"time", times.back()}}));
  report.set("max_div_residual_overall", max_div_overall);
  report.set("guarded_modes_total", guarded_total);

  bool positive = energy.size() >= 2;
  for (double e : energy)
    if (!(e > 0.0)) positive = false;
  if (positive) {
    std::vector<double> loge(energy.size());
    for (std::size_t i = 0; i < energy.size(); ++i) loge[i] = std::log(energy[i]);
    const SlopeFit fit = fit_slope(times, loge);
    report.set("fitted_energy_decay_rate", -fit.slope);
    report.set("fitted_energy_decay_rate_ci95", fit.ci95);
  }

  report.set("exit_status", 0);
  report.set_timing("run_seconds",
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return report;
}

}  // namespace fracflow
