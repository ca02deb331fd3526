#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "fracflow/analytic.hpp"
#include "fracflow/common.hpp"
#include "fracflow/heat.hpp"
#include "fracflow/kernel.hpp"

using namespace fracflow;

namespace {

constexpr double kEulerLimitHalfBeta = 1.3591409142295226;  // e/2
constexpr double kRateTwoMode = 1.4715177646857693;         // 4/e

HeatConfig base_config(const std::string& initial, int n = 64) {
  HeatConfig cfg;
  cfg.grid = GridSpec(1, n, two_pi);
  cfg.beta = FractionalOrder(0.5);
  cfg.initial = AnalyticField::parse(initial);
  cfg.source = AnalyticField();  // unforced
  cfg.dt = 0.01;
  cfg.steps = 100;
  return cfg;
}

double json_number(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const std::size_t at = text.find(needle);
  REQUIRE(at != std::string::npos);
  return std::strtod(text.c_str() + at + needle.size(), nullptr);
}

}  // namespace

TEST_CASE("stability limit follows the resolved symbol maximum") {
  // beta = 1/2: nu(s) = s e^(-s/4) peaks at the resolved mode s = 4, so the
  // Euler bound is 2 / (4/e) = e/2.
  HeatConfig cfg = base_config("sin(x)");
  CHECK(stability_limit(cfg) == doctest::Approx(kEulerLimitHalfBeta).epsilon(1e-12));
  cfg.kappa = 2.0;
  CHECK(stability_limit(cfg) == doctest::Approx(0.5 * kEulerLimitHalfBeta).epsilon(1e-12));
  cfg.kappa = 1.0;
  cfg.rho = 2.0;
  CHECK(stability_limit(cfg) == doctest::Approx(2.0 * kEulerLimitHalfBeta).epsilon(1e-12));

  // Near the classical limit the symbol peak (s = 1/a ~ 4000) is unresolved
  // on N = 64, so the cutoff mode s = 1024 rules.
  HeatConfig sharp = base_config("sin(x)");
  sharp.beta = FractionalOrder(0.999);
  CHECK(stability_limit(sharp) == doctest::Approx(0.002523601152488935).epsilon(1e-12));
}

TEST_CASE("exponential integrator is exact per mode") {
  HeatConfig cfg = base_config("sin(2x)");
  const double rate = 4.0 * std::exp(-1.0);  // |k|^2 G(|k|^2) at k = 2
  CHECK(rate == doctest::Approx(kRateTwoMode).epsilon(1e-15));

  ScalarField T = cfg.sample_initial();
  for (long s = 1; s <= 100; ++s) {
    T = step_heat(T, cfg);
    const double amp = std::exp(-rate * s * cfg.dt);
    double err = 0.0;
    for (int i = 0; i < cfg.grid.n; ++i)
      err = std::max(err, std::abs(T[i] - amp * std::sin(2.0 * cfg.grid.coord(i))));
    CHECK(err < 1e-12);
  }
  CHECK(max_abs(T) == doctest::Approx(std::exp(-kRateTwoMode)).epsilon(1e-12));
  CHECK(std::exp(-kRateTwoMode) == doctest::Approx(0.22957677710029928).epsilon(1e-15));
}

TEST_CASE("fitted decay rate lands on the mode rate") {
  HeatConfig cfg = base_config("sin(2x)");
  const RunReport report = run_heat(cfg);
  const std::string json = report.to_json();
  const double rate = json_number(json, "fitted_decay_rate");
  CHECK(std::abs(rate - kRateTwoMode) / kRateTwoMode < 0.005);
  CHECK(json_number(json, "exit_status") == 0);
}

TEST_CASE("unforced conduction is dissipative and mean-preserving") {
  HeatConfig cfg = base_config("sin(x) + 0.5*cos(3x) + 2");
  cfg.steps = 200;
  std::vector<double> norms;
  ScalarField T = cfg.sample_initial();
  const double mean0 = mean(T);
  const double max0 = max_abs(T);
  // The constant offset never decays, so track the fluctuation norm.
  for (long s = 0; s < cfg.steps; ++s) {
    ScalarField fluct = T;
    for (auto& v : fluct.values()) v -= mean(T);
    norms.push_back(l2_norm(fluct));
    T = step_heat(T, cfg);
  }
  for (std::size_t i = 1; i < norms.size(); ++i) CHECK(norms[i] < norms[i - 1]);
  CHECK(std::abs(mean(T) - mean0) < 1e-12);
  CHECK(max_abs(T) <= max0 * (1.0 + 1e-10));
}

TEST_CASE("classical limit approaches the unsmoothed rate") {
  HeatConfig cfg = base_config("sin(2x)");
  cfg.beta = FractionalOrder(0.999);
  cfg.steps = 10;
  ScalarField T = cfg.sample_initial();
  for (long s = 0; s < cfg.steps; ++s) T = step_heat(T, cfg);
  const double rate = -std::log(max_abs(T)) / (cfg.steps * cfg.dt);
  CHECK(std::abs(rate - 4.0) / 4.0 < 0.005);  // classical kappa |k|^2 = 4
}

TEST_CASE("rk4 tracks the exponential integrator as dt shrinks") {
  auto gap_at = [](double dt, long steps) {
    HeatConfig ex = base_config("sin(2x)");
    ex.dt = dt;
    ex.steps = steps;
    HeatConfig rk = ex;
    rk.integrator = HeatIntegrator::RK4;
    ScalarField a = ex.sample_initial(), b = rk.sample_initial();
    for (long s = 0; s < steps; ++s) {
      a = step_heat(a, ex);
      b = step_heat(b, rk);
    }
    return max_abs_diff(a, b);
  };
  // O(dt^4) local defect: visible at dt = limit/10, four orders smaller by
  // dt = limit/40.
  CHECK(gap_at(kEulerLimitHalfBeta / 10.0, 8) < 5e-5);
  CHECK(gap_at(kEulerLimitHalfBeta / 40.0, 30) < 1e-6);
}

TEST_CASE("forward euler respects its stability bound") {
  HeatConfig cfg = base_config("sin(x) + 0.25*cos(5x)");
  cfg.integrator = HeatIntegrator::ForwardEuler;
  cfg.dt = 1.01 * stability_limit(cfg);
  ScalarField T = cfg.sample_initial();
  CHECK_THROWS_AS(step_heat(T, cfg), numeric_error);

  cfg.dt = 0.9 * stability_limit(cfg);
  cfg.steps = 50;
  const RunReport report = run_heat(cfg);
  const std::string json = report.to_json();
  CHECK(json_number(json, "exit_status") == 0);
  // Final fluctuation is strictly smaller than the initial one.
  const std::size_t series = json.find("\"energy_norm\": [");
  REQUIRE(series != std::string::npos);
  const double first = std::strtod(json.c_str() + series + 16, nullptr);
  const double last = json_number(json, "energy_norm");  // "final" sorts first
  CHECK(last < first);
}

TEST_CASE("steady solve inverts the smoothed conduction operator") {
  HeatConfig cfg = base_config("0");
  cfg.kappa = 2.0;
  // Source built so the steady answer is exactly sin(x): g = kappa G(1) sin.
  const double coeff =
      cfg.kappa * mollifier_symbol(KernelDescriptor::gaussian(cfg.beta, 1), 1.0);
  char text[64];
  std::snprintf(text, sizeof text, "%.17g*sin(x)", coeff);
  cfg.source = AnalyticField::parse(text);
  const ScalarField T = steady_heat(cfg);
  double err = 0.0;
  for (int i = 0; i < cfg.grid.n; ++i)
    err = std::max(err, std::abs(T[i] - std::sin(cfg.grid.coord(i))));
  CHECK(err < 1e-10);

  HeatConfig biased = base_config("0");
  biased.source = AnalyticField::parse("sin(x) + 0.5");
  CHECK_THROWS_AS(steady_heat(biased), numeric_error);

  HeatConfig cut = base_config("0");
  cut.grid = GridSpec(1, 64, two_pi, Boundary::Truncated);
  cut.integrator = HeatIntegrator::RK4;
  cut.source = AnalyticField::parse("sin(x)");
  CHECK_THROWS_AS(steady_heat(cut), config_error);
}

TEST_CASE("snapshot hook fires on the cadence and the last step") {
  HeatConfig cfg = base_config("sin(x)");
  cfg.steps = 25;
  std::vector<long> seen;
  HeatSnapshotHook hook;
  hook.every = 10;
  hook.write = [&](long step, double, const ScalarField&) { seen.push_back(step); };
  run_heat(cfg, hook);
  CHECK(seen == std::vector<long>{0, 10, 20, 25});

  // steps = 0 still reports: a one-entry series echoing the initial state.
  cfg.steps = 0;
  const RunReport report = run_heat(cfg);
  CHECK(json_number(report.to_json(), "steps") == 0);
}

TEST_CASE("heat flux is the negative smoothed gradient") {
  const GridSpec g(1, 64, two_pi);
  const ScalarField T = AnalyticField::parse("sin(x)").sample(g);
  const VectorField q = heat_flux(T, FractionalOrder(0.5), NormalizationMode::UnitMass, 2.0);
  const double want = -2.0 * std::exp(-0.25);
  double err = 0.0;
  for (int i = 0; i < g.n; ++i)
    err = std::max(err, std::abs(q.comp(0)[i] - want * std::cos(g.coord(i))));
  CHECK(err < 1e-13);
  CHECK_THROWS_AS(heat_flux(T, FractionalOrder(0.5), NormalizationMode::UnitMass, 0.0),
                  std::invalid_argument);
}

TEST_CASE("truncated grids integrate with explicit steppers") {
  HeatConfig cfg = base_config("sin(x)");
  cfg.grid = GridSpec(1, 64, two_pi, Boundary::Truncated);
  cfg.integrator = HeatIntegrator::RK4;
  cfg.dt = 0.005;
  cfg.steps = 20;
  cfg.validate();
  ScalarField T = cfg.sample_initial();
  const double norm0 = l2_norm(T);
  for (long s = 0; s < cfg.steps; ++s) T = step_heat(T, cfg);
  CHECK(all_finite(T));
  CHECK(l2_norm(T) < norm0);

  cfg.integrator = HeatIntegrator::Exponential;
  CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("configuration validation rejects unphysical inputs") {
  HeatConfig cfg = base_config("sin(x)");
  cfg.kappa = 0.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = base_config("sin(x)");
  cfg.rho = -1.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = base_config("sin(x)");
  cfg.c_heat = 0.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = base_config("sin(x)");
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = base_config("sin(x)");
  cfg.steps = -1;
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = base_config("sin(x)");
  cfg.source_field = ScalarField(GridSpec(1, 32, two_pi));
  CHECK_THROWS_AS(cfg.sample_source(), config_error);
  cfg = base_config("sin(x)");
  cfg.initial_field = ScalarField(GridSpec(2, 64, two_pi));
  CHECK_THROWS_AS(cfg.sample_initial(), config_error);

  CHECK_THROWS_AS(heat_integrator_from_string("leapfrog"), config_error);
  CHECK(std::string(to_string(HeatIntegrator::RK4)) == "rk4");
}
