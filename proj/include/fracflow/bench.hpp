#pragma once

#include <string>
#include <vector>

#include "fracflow/report.hpp"

namespace fracflow {

// One timed kernel across the size sweep. `points` is the size measure the
// scaling exponent is fitted against (samples for the line recurrence and
// 1D spectral mollify, total nodes for the 2D direct mollify).
struct BenchSeries {
  std::string name;
  std::vector<long> sizes;
  std::vector<long> points;
  std::vector<double> seconds;
  std::vector<double> ns_per_sample;
  double exponent = 0.0;
  double exponent_ci95 = 0.0;
};

// Times the O(N) line recurrence, the spectral mollify (N log N), and the
// direct-quadrature 2D mollify (quadratic in total points; run on its own
// 16/32/64/... ladder, one rung per requested size, to stay affordable).
// Sizes must be ascending powers of two >= 64.
std::vector<BenchSeries> run_bench(const std::vector<int>& sizes);

void report_bench(RunReport& report, const std::vector<BenchSeries>& series);

}  // namespace fracflow
