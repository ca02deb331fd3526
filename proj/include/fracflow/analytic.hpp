#pragma once

#include <string>
#include <vector>

#include "fracflow/grid.hpp"

namespace fracflow {

// Closed-form trigonometric polynomial used for initial data and sources:
// a sum of terms, each an amplitude times a product of sin/cos factors with
// integer frequencies, e.g. "sin(x)", "0.5*cos(2y)", "sin(x)*cos(y) - 3".
// Frequencies are in index units: sin(m x) is periodic on [0, 2*pi).
class AnalyticField {
public:
  struct Factor {
    bool is_sin = true;
    int axis = 0;  // 0 = x, 1 = y, 2 = z
    double freq = 1.0;
  };
  struct Term {
    double amp = 1.0;
    std::vector<Factor> factors;
  };

  AnalyticField() = default;  // identically zero

  // Throws config_error on malformed input.
  static AnalyticField parse(const std::string& text);

  double eval(double x, double y = 0.0, double z = 0.0) const;
  ScalarField sample(const GridSpec& grid) const;

  bool zero() const { return terms_.empty(); }
  const std::string& text() const { return text_; }

private:
  std::vector<Term> terms_;
  std::string text_;
};

}  // namespace fracflow
