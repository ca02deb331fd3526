// Acceptance gate: nine end-to-end checks, one [PASS]/[FAIL] line each.
// The process exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fracflow/analytic.hpp"
#include "fracflow/field_ops.hpp"
#include "fracflow/heat.hpp"
#include "fracflow/kernel.hpp"
#include "fracflow/line_ops.hpp"
#include "fracflow/ns.hpp"
#include "fracflow/report.hpp"

using namespace fracflow;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double json_number(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return std::numeric_limits<double>::quiet_NaN();
  return std::strtod(text.c_str() + pos + needle.size(), nullptr);
}

// ---------------------------------------------------------------------------
// 1. Classical-limit recovery: grad_beta(sin) approaches the classical
//    gradient as beta -> 1, with relative L2 error ~ (1-beta)/4.

Outcome classical_limit() {
  const GridSpec grid(1, 256, two_pi);
  const ScalarField f = AnalyticField::parse("sin(x)").sample(grid);
  const ScalarField exact = gradient(f).comp(0);

  std::vector<double> errors;
  for (double b : {0.9, 0.99, 0.999}) {
    const ScalarField g =
        grad_beta(f, FractionalOrder(b), OperatorVariant::DerivativeOutside).comp(0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      num += (g[i] - exact[i]) * (g[i] - exact[i]);
      den += exact[i] * exact[i];
    }
    errors.push_back(std::sqrt(num / den));
  }
  const bool monotone = errors[0] > errors[1] && errors[1] > errors[2];
  return {monotone && errors[2] < 1e-3,
          fmt("rel L2 err %.3e -> %.3e -> %.3e, envelope (1-b)/4 = %.3e", errors[0],
              errors[1], errors[2], (1.0 - 0.999) / 4.0)};
}

// ---------------------------------------------------------------------------
// 2. Composition identity: classical divergence of grad_beta equals the
//    smoothed Laplacian on random band-limited fields.

ScalarField random_band_limited(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> modes(-10, 10);
  ScalarField f(grid);
  for (int m = 0; m < 12; ++m) {
    const double amp = unit(rng);
    const double phase = pi * unit(rng);
    const int jx = modes(rng);
    const int jy = modes(rng);
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix)
        f[f.flat(ix, iy)] +=
            amp * std::cos(jx * grid.coord(ix) + jy * grid.coord(iy) + phase);
  }
  const double peak = max_abs(f);  // normalize as the flow initial data does
  for (std::size_t i = 0; i < f.size(); ++i) f[i] /= peak;
  return f;
}

Outcome composition_identity() {
  const GridSpec grid(2, 128, two_pi);
  const FractionalOrder beta(0.5);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ScalarField f = random_band_limited(grid, seed);
    const ScalarField lap = laplacian_beta(f, beta);
    const ScalarField div =
        divergence(grad_beta(f, beta, OperatorVariant::DerivativeOutside));
    worst = std::max(worst, max_abs_diff(lap, div));
  }
  return {worst < 1e-12, fmt("max residual %.3e over 20 seeds (bound 1e-12)", worst)};
}

// ---------------------------------------------------------------------------
// 3. Kernel normalization: UnitMass mollifiers integrate to one in every
//    dimension; the published-constant mass is recorded and differs from one.

Outcome kernel_normalization() {
  double worst = 0.0;
  double closest_paper_gap = std::numeric_limits<double>::infinity();
  for (int dim = 1; dim <= 3; ++dim) {
    for (double b : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const FractionalOrder order(b);
      const double m =
          mollifier_mass(KernelDescriptor::gaussian(order, dim), 8192);
      worst = std::max(worst, std::abs(m - 1.0));
      const double paper = mode_mass(order, dim, NormalizationMode::PaperYSM);
      closest_paper_gap = std::min(closest_paper_gap, std::abs(paper - 1.0));
    }
  }
  // Cross-check the analytic non-unit mass against quadrature once.
  const double pi2 = mollifier_mass(
      KernelDescriptor::gaussian(FractionalOrder(0.5), 2, NormalizationMode::PaperYSM),
      8192);
  const bool paper_checked = std::abs(pi2 - pi * pi) < 1e-8;
  return {worst < 1e-10 && closest_paper_gap > 0.01 && paper_checked,
          fmt("max |mass-1| = %.3e over 15 cases; published-mode mass differs from 1 "
              "by >= %.2f (2D, b=0.5: %.6f = pi^2)",
              worst, closest_paper_gap, pi2)};
}

// ---------------------------------------------------------------------------
// 4. Line-operator oracles: frozen closed-form endpoint values and measured
//    second-order convergence on curved inputs.

Outcome line_oracles() {
  const FractionalOrder half(0.5);
  const NormalizationMode mode = NormalizationMode::PaperCF;
  const AnalyticLine ident = AnalyticLine::parse("monomial:1");
  const AnalyticLine one = AnalyticLine::parse("constant:1");

  const double cf_oracle = line_oracle(ident, LineOp::CF, half, mode, 0.0, 1.0);
  const double ysm_oracle = line_oracle(one, LineOp::YSM, half, mode, 0.0, 1.0);
  bool ok = std::abs(cf_oracle - 0.9481808382428365) < 1e-13 &&
            std::abs(ysm_oracle - 0.7357588823428846) < 1e-13;

  const double dx_fine = std::ldexp(1.0, -10);
  const SampledLine cf_num =
      cf_derivative(sample_line(ident, 0.0, dx_fine, 1025), half, mode);
  const SampledLine ysm_num =
      ysm_derivative(sample_line(one, 0.0, dx_fine, 1025), half, mode);
  const double cf_err = std::abs(cf_num.values.back() - cf_oracle);
  const double ysm_err = std::abs(ysm_num.values.back() - ysm_oracle);
  ok = ok && cf_err < 1e-9 && ysm_err < 1e-9;

  auto order_of = [&](const AnalyticLine& f, LineOp kind) {
    const double exact = line_oracle(f, kind, half, mode, 0.0, 1.5);
    std::vector<double> lx, le;
    for (int k = 6; k <= 10; ++k) {
      const double dx = std::ldexp(1.0, -k);
      const int n = static_cast<int>(std::lround(1.5 / dx)) + 1;
      const SampledLine line = sample_line(f, 0.0, dx, n);
      const SampledLine d = kind == LineOp::CF ? cf_derivative(line, half, mode)
                                               : ysm_derivative(line, half, mode);
      lx.push_back(std::log(dx));
      le.push_back(std::log(std::abs(d.values.back() - exact)));
    }
    return fit_slope(lx, le).slope;
  };
  const double p_cf = order_of(AnalyticLine::parse("exp:1.0"), LineOp::CF);
  const double p_ysm = order_of(AnalyticLine::parse("monomial:2"), LineOp::YSM);
  ok = ok && p_cf > 1.8 && p_cf < 2.2 && p_ysm > 1.8 && p_ysm < 2.2;

  return {ok, fmt("oracles hit to %.1e / %.1e; measured orders %.3f / %.3f", cf_err,
                  ysm_err, p_cf, p_ysm)};
}

// ---------------------------------------------------------------------------
// 5. Heat decay oracle: cos(2x) decays at rate 4/e; the exponential
//    integrator tracks the closed form step by step.

HeatConfig heat_oracle_config() {
  HeatConfig cfg;
  cfg.grid = GridSpec(1, 64, two_pi);
  cfg.initial = AnalyticField::parse("cos(2*x)");
  cfg.dt = 0.01;
  cfg.steps = 100;
  return cfg;
}

Outcome heat_oracle(std::string* report_json) {
  HeatConfig cfg = heat_oracle_config();
  const ScalarField base = cfg.sample_initial();
  const double rate = 4.0 * std::exp(-1.0);

  double worst = 0.0;
  HeatSnapshotHook hook;
  hook.every = 1;
  hook.write = [&](long, double t, const ScalarField& T) {
    const double amp = std::exp(-rate * t);
    for (std::size_t i = 0; i < T.size(); ++i)
      worst = std::max(worst, std::abs(T[i] - amp * base[i]));
  };
  const RunReport report = run_heat(cfg, hook);
  const std::string json = report.to_json();
  if (report_json) *report_json = json;

  const double fitted = json_number(json, "fitted_decay_rate");
  const double rel = std::abs(fitted - rate) / rate;
  return {rel < 0.005 && worst < 1e-10,
          fmt("fitted rate %.10f vs 4/e = %.10f (rel %.2e); per-step error %.2e", fitted,
              rate, rel, worst)};
}

// ---------------------------------------------------------------------------
// 6. Taylor-Green decay oracle: energy decays at 4(mu/rho)G(2), stays
//    monotone, and the velocity stays divergence-free throughout.

NSConfig taylor_green_config() {
  NSConfig cfg;
  cfg.dt = 1e-3;
  cfg.steps = 1000;
  return cfg;  // defaults: 64^2 grid, beta 0.5, mu 0.01, rho 1, Taylor-Green
}

Outcome taylor_green_oracle(std::string* report_json) {
  const NSConfig cfg = taylor_green_config();
  std::vector<double> energies;
  NSSnapshotHook hook;
  hook.every = 1;
  hook.write = [&](long, double, const NSState& s) {
    energies.push_back(kinetic_energy(s.velocity));
  };
  const RunReport report = run_ns(cfg, hook);
  const std::string json = report.to_json();
  if (report_json) *report_json = json;

  bool monotone = energies.size() == 1001;
  for (std::size_t i = 1; i < energies.size(); ++i)
    monotone = monotone && energies[i] <= energies[i - 1];

  const double want = 4.0 * (cfg.mu / cfg.rho) * std::exp(-0.5);
  const double fitted = json_number(json, "fitted_energy_decay_rate");
  const double rel = std::abs(fitted - want) / want;
  const double div = json_number(json, "max_div_residual_overall");
  return {rel < 0.005 && div < 1e-10 && monotone,
          fmt("fitted energy rate %.10f vs %.10f (rel %.2e); max div %.2e; energy "
              "monotone over %zu samples: %s",
              fitted, want, rel, div, energies.size(), monotone ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 7. Backend cross-validation: spectral and direct-quadrature mollify agree.

Outcome backend_cross_validation() {
  const GridSpec grid(1, 128, two_pi);
  const ScalarField f = AnalyticField::parse("sin(x) + 0.5*cos(3*x)").sample(grid);
  double worst = 0.0;
  for (double b : {0.3, 0.5, 0.8}) {
    const FractionalOrder order(b);
    const ScalarField s = mollify(f, order);
    const ScalarField d =
        mollify(f, order, NormalizationMode::UnitMass, FieldBackend::Direct);
    worst = std::max(worst, max_abs_diff(s, d));
  }
  return {worst < 1e-6, fmt("max backend gap %.3e over beta in {0.3, 0.5, 0.8}", worst)};
}

// ---------------------------------------------------------------------------
// 8. Beta-monotonicity: the Taylor-Green decay rate increases with beta and
//    approaches the classical 4 mu/rho.

Outcome beta_monotonicity() {
  auto fitted_rate = [](double b) {
    NSConfig cfg;
    cfg.beta = FractionalOrder(b);
    cfg.dt = 1e-3;
    cfg.steps = 250;
    return json_number(run_ns(cfg).to_json(), "fitted_energy_decay_rate");
  };
  std::vector<double> rates;
  bool increasing = true;
  for (double b : {0.3, 0.5, 0.7, 0.9}) {
    rates.push_back(fitted_rate(b));
    if (rates.size() > 1) increasing = increasing && rates.back() > rates[rates.size() - 2];
  }
  const double classical = fitted_rate(0.999);
  const double rel = std::abs(classical - 0.04) / 0.04;
  return {increasing && rel < 0.01,
          fmt("rates %.6f / %.6f / %.6f / %.6f %s; rate(0.999) = %.6f within %.2e of "
              "4 mu/rho = 0.04",
              rates[0], rates[1], rates[2], rates[3],
              increasing ? "increasing" : "NOT increasing", classical, rel)};
}

// ---------------------------------------------------------------------------
// 9. Determinism: repeating the heat and flow oracle runs reproduces the
//    canonical reports byte for byte (all kernels are single-threaded).

Outcome determinism(std::string heat_json, std::string ns_json) {
  if (heat_json.empty()) heat_json = run_heat(heat_oracle_config()).to_json();
  if (ns_json.empty()) ns_json = run_ns(taylor_green_config()).to_json();
  const std::string heat_again = run_heat(heat_oracle_config()).to_json();
  const std::string ns_again = run_ns(taylor_green_config()).to_json();
  const bool heat_same = heat_again == heat_json;
  const bool ns_same = ns_again == ns_json;
  return {heat_same && ns_same,
          fmt("heat report %s (%zu bytes), flow report %s (%zu bytes)",
              heat_same ? "identical" : "DIFFERS", heat_json.size(),
              ns_same ? "identical" : "DIFFERS", ns_json.size())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    double budget_seconds;
    std::function<Outcome()> run;
  };

  std::string heat_json, ns_json;
  const std::vector<Criterion> criteria = {
      {"classical-limit recovery", 1.0, classical_limit},
      {"composition identity", 1.0, composition_identity},
      {"kernel normalization", 1.0, kernel_normalization},
      {"line-operator oracles", 5.0, line_oracles},
      {"heat decay oracle", 5.0, [&] { return heat_oracle(&heat_json); }},
      {"Taylor-Green decay oracle", 60.0, [&] { return taylor_green_oracle(&ns_json); }},
      {"backend cross-validation", 30.0, backend_cross_validation},
      {"beta-monotonicity sweep", 300.0, beta_monotonicity},
      {"determinism", 600.0, [&] { return determinism(heat_json, ns_json); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = outcome.pass && seconds < criteria[i].budget_seconds;
    if (!pass) ++failures;
    std::printf("[%s] criterion %zu: %s — %s [%.2f s / %.0f s]\n", pass ? "PASS" : "FAIL",
                i + 1, criteria[i].title, outcome.detail.c_str(), seconds,
                criteria[i].budget_seconds);
    std::fflush(stdout);
  }
  std::printf("SUMMARY: %zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures;
}
