#pragma once

#include <string>
#include <vector>

#include "fracflow/report.hpp"

namespace fracflow {

// One verification check: passes when measured <= tolerance.
struct CheckRow {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyResult {
  std::string suite;
  std::vector<CheckRow> rows;

  bool passed() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

// Suites: "limits" (classical-limit envelopes), "identities" (composition and
// variant identities), "oracles" (closed-form line-operator and heat values,
// convergence orders), "backends" (spectral vs direct agreement).
// tol_scale multiplies every tolerance (a tiny scale forces honest failures).
VerifyResult verify_suite(const std::string& suite, double tol_scale = 1.0);

const std::vector<std::string>& verify_suite_names();

// Embeds rows into a report under "checks" plus pass counters.
void report_checks(RunReport& report, const VerifyResult& result);

}  // namespace fracflow
