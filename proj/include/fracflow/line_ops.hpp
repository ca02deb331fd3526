#pragma once

#include <string>
#include <vector>

#include "fracflow/kernel.hpp"

namespace fracflow {

// Uniform samples of a function on [a, a + (n-1) dx].
struct SampledLine {
  double origin = 0.0;
  double dx = 1.0;
  std::vector<double> values;
};

enum class LineOp { CF, YSM };

// Descriptors with closed-form transforms under both line derivatives; the
// derivations live next to line_oracle in line_ops.cpp.
class AnalyticLine {
public:
  enum class Kind { Constant, Monomial, Exponential, Sinusoid };

  static AnalyticLine constant(double value);
  static AnalyticLine monomial(int power);  // x^p, p in {1,2,3}
  static AnalyticLine exponential(double rate);
  static AnalyticLine sinusoid(double wavenumber, double phase = 0.0);

  // Text forms accepted by the CLI: constant:<v> | monomial:<p> |
  // exp:<rate> | sin:<k>[:<phase>].
  static AnalyticLine parse(const std::string& text);

  Kind kind() const { return kind_; }
  double eval(double x) const;
  double derivative(double x) const;
  std::string describe() const;

private:
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  int power_ = 1;
  double rate_ = 0.0;
  double wavenumber_ = 1.0;
  double phase_ = 0.0;

  friend double line_oracle(const AnalyticLine&, LineOp, FractionalOrder, NormalizationMode,
                            double, double);
};

SampledLine sample_line(const AnalyticLine& f, double a, double dx, int n);

// Derivative with the kernel applied to the reconstructed slope (derivative
// inside the convolution). O(N) via the causal recurrence
// I_{k+1} = e^(-c dx) I_k + [exact cell integral of the linear interpolant].
SampledLine cf_derivative(const SampledLine& line, FractionalOrder order,
                          NormalizationMode mode = NormalizationMode::UnitMass);

// Derivative outside the convolution, evaluated through the product rule:
// d/dx [ int_a^x e^(-c(x-s)) f(s) ds ] = f(x) - c * J(x).
SampledLine ysm_derivative(const SampledLine& line, FractionalOrder order,
                           NormalizationMode mode = NormalizationMode::UnitMass);

// Closed-form value of the requested operator at x (x >= a). Both operators
// are 0 at x = a by construction (integral over an empty interval).
double line_oracle(const AnalyticLine& f, LineOp op, FractionalOrder order,
                   NormalizationMode mode, double a, double x);

}  // namespace fracflow
