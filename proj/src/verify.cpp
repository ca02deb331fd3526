#include "fracflow/verify.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "fracflow/analytic.hpp"
#include "fracflow/field_ops.hpp"
#include "fracflow/heat.hpp"
#include "fracflow/kernel.hpp"
#include "fracflow/line_ops.hpp"

namespace fracflow {
namespace {

void add(VerifyResult& r, const std::string& name, double measured, double tol,
         const std::string& note = "") {
  CheckRow row;
  row.name = name;
  row.measured = measured;
  row.tolerance = tol;
  row.pass = measured <= tol;
  row.note = note;
  r.rows.push_back(row);
}

// Relative L2 error of grad_beta(sin x) against the classical cos x.
double classical_limit_error(double beta, int n) {
  GridSpec grid{1, n, two_pi, Boundary::Periodic};
  ScalarField f = AnalyticField::parse("sin(x)").sample(grid);
  ScalarField target = AnalyticField::parse("cos(x)").sample(grid);
  VectorField g = grad_beta(f, FractionalOrder(beta), OperatorVariant::DerivativeOutside,
                            NormalizationMode::UnitMass);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    double d = g.comp(0)[i] - target[i];
    num += d * d;
    den += target[i] * target[i];
  }
  return std::sqrt(num / den);
}

double envelope(double beta) {
  KernelDescriptor k = KernelDescriptor::gaussian(FractionalOrder(beta), 1);
  return 1.0 - mollifier_symbol(k, 1.0);
}

VerifyResult suite_limits(double s) {
  VerifyResult r;
  r.suite = "limits";
  const double betas[] = {0.9, 0.99, 0.999};
  std::vector<double> errs;
  for (double b : betas) {
    double err = classical_limit_error(b, 256);
    errs.push_back(err);
    add(r, "grad-beta vs classical gradient, beta=" + std::to_string(b).substr(0, 5),
        err, 1.05 * envelope(b) * s, "relative L2, f=sin(x), N=256");
  }
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < errs.size(); ++i)
    worst_ratio = std::max(worst_ratio, errs[i] / errs[i - 1]);
  add(r, "classical-limit error monotone decreasing in beta", worst_ratio, 1.0 * s,
      "max successive error ratio");
  add(r, "classical-limit error at beta=0.999", errs.back(), 1e-3 * s,
      "relative L2 against cos(x)");

  {
    GridSpec grid{1, 256, two_pi, Boundary::Periodic};
    ScalarField f = AnalyticField::parse("sin(x)").sample(grid);
    ScalarField m = mollify(f, FractionalOrder(0.999));
    add(r, "mollifier classical limit, beta=0.999", max_abs_diff(m, f),
        1.05 * envelope(0.999) * s, "max |S f - f|, f=sin(x)");
  }
  return r;
}

VerifyResult suite_identities(double s) {
  VerifyResult r;
  r.suite = "identities";
  FractionalOrder beta(0.5);

  {
    GridSpec grid{2, 64, two_pi, Boundary::Periodic};
    ScalarField f = AnalyticField::parse("sin(x)*cos(y) + 0.5*sin(2*x) + 0.25*cos(3*y)")
                        .sample(grid);
    VectorField g = grad_beta(f, beta, OperatorVariant::DerivativeOutside);
    ScalarField lhs = divergence(g);
    ScalarField rhs = laplacian_beta(f, beta);
    add(r, "classical div of fractional grad equals fractional laplacian",
        max_abs_diff(lhs, rhs), 1e-12 * s, "2D, N=64, multi-mode input");

    ScalarField curl = curl2d(g);
    add(r, "classical curl of fractional gradient vanishes", max_abs(curl), 1e-12 * s,
        "2D, N=64");
  }

  {
    GridSpec grid{1, 128, two_pi, Boundary::Periodic};
    ScalarField f = AnalyticField::parse("sin(x) + 0.5*cos(2*x)").sample(grid);
    VectorField in = grad_beta(f, beta, OperatorVariant::DerivativeInside);
    VectorField out = grad_beta(f, beta, OperatorVariant::DerivativeOutside);
    add(r, "derivative-inside equals derivative-outside (spectral)",
        max_abs_diff(in.comp(0), out.comp(0)), 1e-12 * s, "1D, N=128");
  }

  {
    GridSpec grid{1, 128, two_pi, Boundary::Truncated};
    ScalarField f = AnalyticField::parse("sin(x)").sample(grid);
    VectorField in = grad_beta(f, beta, OperatorVariant::DerivativeInside,
                               NormalizationMode::UnitMass, FieldBackend::Direct);
    VectorField out = grad_beta(f, beta, OperatorVariant::DerivativeOutside,
                                NormalizationMode::UnitMass, FieldBackend::Direct);
    double worst = 0.0;
    for (int i = 3 * grid.n / 8; i < 5 * grid.n / 8; ++i)
      worst = std::max(worst, std::abs(in.comp(0)[i] - out.comp(0)[i]));
    add(r, "variant agreement away from truncated boundaries", worst, 1e-4 * s,
        "1D, N=128, central quarter");
  }
  return r;
}

VerifyResult suite_oracles(double s) {
  VerifyResult r;
  r.suite = "oracles";
  FractionalOrder beta(0.5);
  const NormalizationMode paper = NormalizationMode::PaperCF;

  {
    AnalyticLine f = AnalyticLine::monomial(1);
    SampledLine line = sample_line(f, 0.0, std::ldexp(1.0, -10), 1025);
    SampledLine d = cf_derivative(line, beta, paper);
    double want = 1.5 * (1.0 - std::exp(-1.0));  // 0.9481808382428365
    add(r, "exponential-kernel derivative of identity map at x=1",
        std::abs(d.values.back() - want), 1e-10 * s, "closed form 1.5(1-1/e)");
  }
  {
    AnalyticLine f = AnalyticLine::constant(1.0);
    SampledLine line = sample_line(f, 0.0, std::ldexp(1.0, -10), 1025);
    SampledLine d = ysm_derivative(line, beta, paper);
    double want = 2.0 * std::exp(-1.0);  // 0.7357588823428846
    add(r, "kernel-outside derivative of the constant 1 at x=1",
        std::abs(d.values.back() - want), 1e-10 * s, "closed form 2/e");
  }

  // Convergence order on curved inputs (exact data make the scheme exact).
  auto order_of = [&](const AnalyticLine& f, LineOp op) {
    std::vector<double> logh, loge;
    for (int p = 6; p <= 10; ++p) {
      double dx = std::ldexp(1.0, -p);
      int n = (1 << p) + 1;  // covers [0, 1]
      SampledLine line = sample_line(f, 0.0, dx, n);
      SampledLine d = op == LineOp::CF ? cf_derivative(line, beta, paper)
                                       : ysm_derivative(line, beta, paper);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        double exact = line_oracle(f, op, beta, paper, 0.0, i * dx);
        worst = std::max(worst, std::abs(d.values[i] - exact));
      }
      logh.push_back(std::log(dx));
      loge.push_back(std::log(worst));
    }
    return fit_slope(logh, loge).slope;
  };
  double p_cf = order_of(AnalyticLine::monomial(3), LineOp::CF);
  add(r, "convergence order of the kernel-inside derivative", std::abs(p_cf - 2.0),
      0.2 * s, "cubic input, dx = 2^-6 .. 2^-10, order " + std::to_string(p_cf));
  double p_ysm = order_of(AnalyticLine::exponential(1.0), LineOp::YSM);
  add(r, "convergence order of the kernel-outside derivative", std::abs(p_ysm - 2.0),
      0.2 * s, "exponential input, dx = 2^-6 .. 2^-10, order " + std::to_string(p_ysm));

  {
    HeatConfig cfg;
    cfg.grid = GridSpec{1, 64, two_pi, Boundary::Periodic};
    cfg.beta = FractionalOrder(0.5);
    double want = std::exp(1.0) / 2.0;  // 1.3591409142295226
    add(r, "explicit-step stability limit, beta=0.5", std::abs(stability_limit(cfg) - want),
        1e-12 * s, "closed form e/2");
  }
  {
    HeatConfig cfg;
    cfg.grid = GridSpec{1, 64, two_pi, Boundary::Periodic};
    cfg.beta = FractionalOrder(0.5);
    KernelDescriptor k = KernelDescriptor::gaussian(cfg.beta, 1, cfg.mode);
    double g1 = mollifier_symbol(k, 1.0);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", g1);
    cfg.source = AnalyticField::parse(std::string(buf) + "*sin(x)");
    ScalarField T = steady_heat(cfg);
    ScalarField want = AnalyticField::parse("sin(x)").sample(cfg.grid);
    add(r, "manufactured steady temperature recovers sin(x)", max_abs_diff(T, want),
        1e-10 * s, "per-mode balance");
  }
  return r;
}

VerifyResult suite_backends(double s) {
  VerifyResult r;
  r.suite = "backends";
  for (double b : {0.3, 0.5, 0.8}) {
    GridSpec grid{1, 128, two_pi, Boundary::Periodic};
    ScalarField f = AnalyticField::parse("sin(x) + 0.5*cos(3*x)").sample(grid);
    ScalarField sp = mollify(f, FractionalOrder(b), NormalizationMode::UnitMass,
                             FieldBackend::Spectral);
    ScalarField di = mollify(f, FractionalOrder(b), NormalizationMode::UnitMass,
                             FieldBackend::Direct);
    add(r, "mollify spectral vs direct, 1D, beta=" + std::to_string(b).substr(0, 3),
        max_abs_diff(sp, di), 1e-6 * s, "N=128, periodic");
  }
  {
    GridSpec grid{2, 128, two_pi, Boundary::Periodic};
    ScalarField f = AnalyticField::parse("sin(x)*cos(y)").sample(grid);
    ScalarField sp = mollify(f, FractionalOrder(0.5), NormalizationMode::UnitMass,
                             FieldBackend::Spectral);
    ScalarField di = mollify(f, FractionalOrder(0.5), NormalizationMode::UnitMass,
                             FieldBackend::Direct);
    add(r, "mollify spectral vs direct, 2D, beta=0.5", max_abs_diff(sp, di), 1e-6 * s,
        "N=128, periodic");
  }
  return r;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"limits", "identities", "oracles",
                                                 "backends"};
  return names;
}

VerifyResult verify_suite(const std::string& suite, double tol_scale) {
  if (!(tol_scale > 0.0) || !std::isfinite(tol_scale))
    throw config_error("tolerance scale must be a positive finite number");
  if (suite == "limits") return suite_limits(tol_scale);
  if (suite == "identities") return suite_identities(tol_scale);
  if (suite == "oracles") return suite_oracles(tol_scale);
  if (suite == "backends") return suite_backends(tol_scale);
  throw config_error("unknown verify suite '" + suite +
                     "' (expected limits, identities, oracles, or backends)");
}

void report_checks(RunReport& report, const VerifyResult& result) {
  ReportValue::Array checks;
  int passed = 0;
  for (const auto& row : result.rows) {
    ReportValue::Object o;
    o["name"] = ReportValue(row.name);
    o["measured"] = ReportValue(row.measured);
    o["tolerance"] = ReportValue(row.tolerance);
    o["pass"] = ReportValue(row.pass);
    if (!row.note.empty()) o["note"] = ReportValue(row.note);
    checks.push_back(ReportValue(std::move(o)));
    if (row.pass) ++passed;
  }
  report.set("suite", ReportValue(result.suite));
  report.set("checks", ReportValue(std::move(checks)));
  report.set("checks_passed", ReportValue(passed));
  report.set("checks_total", ReportValue(static_cast<int>(result.rows.size())));
  report.set("passed", ReportValue(result.passed()));
}

}  // namespace fracflow
