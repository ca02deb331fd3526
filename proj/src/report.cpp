#include "fracflow/report.hpp"

#include <cmath>
#include <cstdio>

namespace fracflow {

ReportValue::ReportValue(const std::vector<double>& xs) {
  Array a;
  a.reserve(xs.size());
  for (double x : xs) a.emplace_back(x);
  v_ = std::move(a);
}

namespace {

void write_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void write_double(std::string& out, double d) {
  if (!std::isfinite(d)) {  // JSON has no Inf/NaN; stringify them
    out += d > 0 ? "\"inf\"" : (d < 0 ? "\"-inf\"" : "\"nan\"");
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  out += buf;
}

void indent_to(std::string& out, int indent) { out.append(static_cast<std::size_t>(indent), ' '); }

}  // namespace

void ReportValue::write(std::string& out, int indent) const {
  if (std::holds_alternative<bool>(v_)) {
    out += std::get<bool>(v_) ? "true" : "false";
  } else if (std::holds_alternative<std::int64_t>(v_)) {
    out += std::to_string(std::get<std::int64_t>(v_));
  } else if (std::holds_alternative<double>(v_)) {
    write_double(out, std::get<double>(v_));
  } else if (std::holds_alternative<std::string>(v_)) {
    write_string(out, std::get<std::string>(v_));
  } else if (std::holds_alternative<Array>(v_)) {
    const Array& a = std::get<Array>(v_);
    if (a.empty()) {
      out += "[]";
      return;
    }
    out += '[';
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i) out += ", ";
      a[i].write(out, indent);
    }
    out += ']';
  } else {
    const Object& o = std::get<Object>(v_);
    if (o.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [k, v] : o) {
      indent_to(out, indent + 2);
      write_string(out, k);
      out += ": ";
      v.write(out, indent + 2);
      if (++i < o.size()) out += ',';
      out += '\n';
    }
    indent_to(out, indent);
    out += '}';
  }
}

std::string RunReport::to_json(bool include_timings) const {
  ReportValue::Object doc = root_;
  ReportValue::Array warn;
  for (const auto& w : warnings_) warn.emplace_back(w);
  doc["warnings"] = ReportValue(std::move(warn));
  if (include_timings) {
    ReportValue::Object t;
    for (const auto& [k, v] : timings_) t[k] = ReportValue(v);
    doc["timings"] = ReportValue(std::move(t));
  }
  std::string out;
  ReportValue(std::move(doc)).write(out, 0);
  out += '\n';
  return out;
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope fit needs two matching samples at least");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct x values");

  SlopeFit fit;
  fit.slope = sxy / sxx;
  if (n > 2) {
    const double a = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - a - fit.slope * x[i];
      ss += r * r;
    }
    fit.ci95 = 1.96 * std::sqrt(ss / (static_cast<double>(n) - 2.0) / sxx);
  }
  return fit;
}

}  // namespace fracflow
