#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fracflow/common.hpp"

namespace fracflow {

// JSON-shaped value with deterministic serialization: object keys sort
// lexicographically (std::map) and doubles print with 17 significant digits,
// so identical runs produce byte-identical documents.
class ReportValue {
public:
  using Array = std::vector<ReportValue>;
  using Object = std::map<std::string, ReportValue>;

  ReportValue() : v_(false) {}
  ReportValue(bool b) : v_(b) {}
  ReportValue(int i) : v_(static_cast<std::int64_t>(i)) {}
  ReportValue(long i) : v_(static_cast<std::int64_t>(i)) {}
  ReportValue(long long i) : v_(static_cast<std::int64_t>(i)) {}
  ReportValue(unsigned long long i) : v_(static_cast<std::int64_t>(i)) {}
  ReportValue(double d) : v_(d) {}
  ReportValue(const char* s) : v_(std::string(s)) {}
  ReportValue(std::string s) : v_(std::move(s)) {}
  ReportValue(Array a) : v_(std::move(a)) {}
  ReportValue(Object o) : v_(std::move(o)) {}
  ReportValue(const std::vector<double>& xs);

  void write(std::string& out, int indent) const;

private:
  std::variant<bool, std::int64_t, double, std::string, Array, Object> v_;
};

// Top-level run document. Timings are recorded separately and omitted from
// the canonical serialization by default, so reports stay reproducible; pass
// include_timings=true to embed them (documented as non-canonical).
class RunReport {
public:
  void set(const std::string& key, ReportValue value) { root_[key] = std::move(value); }
  void add_warning(const std::string& text) { warnings_.push_back(text); }
  void set_timing(const std::string& key, double seconds) { timings_[key] = seconds; }

  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::map<std::string, double>& timings() const { return timings_; }

  std::string to_json(bool include_timings = false) const;

private:
  ReportValue::Object root_;
  std::vector<std::string> warnings_;
  std::map<std::string, double> timings_;
};

// Ordinary least squares y = a + b x; returns slope b and the half-width of
// its 95% confidence interval (1.96 standard errors).
struct SlopeFit {
  double slope = 0.0;
  double ci95 = 0.0;
};
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fracflow
