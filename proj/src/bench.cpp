#include "fracflow/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "fracflow/analytic.hpp"
#include "fracflow/field_ops.hpp"
#include "fracflow/line_ops.hpp"

namespace fracflow {
namespace {

// Seconds per repetition: repeats work() until a window of >= 20 ms fills,
// then keeps the fastest of three such windows (minimum filters scheduler
// noise without biasing the scaling fit).
double time_kernel(const std::function<void()>& work) {
  using clock = std::chrono::steady_clock;
  work();  // warm caches and FFT plans
  long reps = 1;
  double per_rep = 0.0;
  for (;;) {
    auto t0 = clock::now();
    for (long r = 0; r < reps; ++r) work();
    double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
    if (elapsed >= 0.02) {
      per_rep = elapsed / static_cast<double>(reps);
      break;
    }
    reps = elapsed <= 0.0 ? reps * 16 : reps * 2;
  }
  for (int window = 0; window < 2; ++window) {
    auto t0 = clock::now();
    for (long r = 0; r < reps; ++r) work();
    double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
    per_rep = std::min(per_rep, elapsed / static_cast<double>(reps));
  }
  return per_rep;
}

void finish(BenchSeries& s) {
  std::vector<double> logp, logt;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    logp.push_back(std::log(static_cast<double>(s.points[i])));
    logt.push_back(std::log(s.seconds[i]));
    s.ns_per_sample.push_back(1e9 * s.seconds[i] / static_cast<double>(s.points[i]));
  }
  SlopeFit fit = fit_slope(logp, logt);
  s.exponent = fit.slope;
  s.exponent_ci95 = fit.ci95;
}

}  // namespace

std::vector<BenchSeries> run_bench(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw config_error("bench needs at least two sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 64 || !is_pow2(sizes[i]))
      throw config_error("bench sizes must be powers of two >= 64");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw config_error("bench sizes must be strictly ascending");
  }

  const FractionalOrder beta(0.5);
  std::vector<BenchSeries> out;

  {
    BenchSeries s;
    s.name = "line-recurrence";
    for (int n : sizes) {
      double dx = 1.0 / static_cast<double>(n);
      SampledLine line = sample_line(AnalyticLine::sinusoid(2.0), 0.0, dx, n);
      s.sizes.push_back(n);
      s.points.push_back(n);
      s.seconds.push_back(time_kernel([&] {
        SampledLine d = cf_derivative(line, beta, NormalizationMode::UnitMass);
        volatile double sink = d.values.back();
        (void)sink;
      }));
    }
    finish(s);
    out.push_back(std::move(s));
  }

  {
    BenchSeries s;
    s.name = "spectral-mollify-1d";
    for (int n : sizes) {
      GridSpec grid{1, n, two_pi, Boundary::Periodic};
      ScalarField f = AnalyticField::parse("sin(x) + 0.5*cos(3*x)").sample(grid);
      s.sizes.push_back(n);
      s.points.push_back(n);
      s.seconds.push_back(time_kernel([&] {
        ScalarField m = mollify(f, beta);
        volatile double sink = m[0];
        (void)sink;
      }));
    }
    finish(s);
    out.push_back(std::move(s));
  }

  {
    BenchSeries s;
    s.name = "direct-mollify-2d";
    // The direct quadrature is quadratic in total points, so it runs on its
    // own small ladder (16, 32, 64, ...) with one rung per requested size,
    // capped where a single apply stays well under a second.
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      int m = 16 << std::min<std::size_t>(i, 3);
      GridSpec grid{2, m, two_pi, Boundary::Periodic};
      ScalarField f = AnalyticField::parse("sin(x)*cos(y)").sample(grid);
      s.sizes.push_back(m);
      s.points.push_back(static_cast<long>(m) * m);
      s.seconds.push_back(time_kernel([&] {
        ScalarField g = mollify(f, beta, NormalizationMode::UnitMass,
                                FieldBackend::Direct);
        volatile double sink = g[0];
        (void)sink;
      }));
    }
    finish(s);
    out.push_back(std::move(s));
  }

  return out;
}

void report_bench(RunReport& report, const std::vector<BenchSeries>& series) {
  ReportValue::Array arr;
  for (const auto& s : series) {
    ReportValue::Object o;
    o["name"] = ReportValue(s.name);
    ReportValue::Array sizes, points;
    for (long v : s.sizes) sizes.push_back(ReportValue(v));
    for (long v : s.points) points.push_back(ReportValue(v));
    o["sizes"] = ReportValue(std::move(sizes));
    o["points"] = ReportValue(std::move(points));
    o["seconds"] = ReportValue(s.seconds);
    o["ns_per_sample"] = ReportValue(s.ns_per_sample);
    o["exponent"] = ReportValue(s.exponent);
    o["exponent_ci95"] = ReportValue(s.exponent_ci95);
    arr.push_back(ReportValue(std::move(o)));
  }
  report.set("benchmarks", ReportValue(std::move(arr)));
}

}  // namespace fracflow
