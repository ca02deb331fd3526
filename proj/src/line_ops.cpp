#include "fracflow/line_ops.hpp"

#include <cmath>

namespace fracflow {

AnalyticLine AnalyticLine::constant(double value) {
  AnalyticLine f;
  f.kind_ = Kind::Constant;
  f.value_ = value;
  return f;
}

AnalyticLine AnalyticLine::monomial(int power) {
  if (power < 1 || power > 3)
    throw std::invalid_argument("monomial power must be 1, 2 or 3");
  AnalyticLine f;
  f.kind_ = Kind::Monomial;
  f.power_ = power;
  return f;
}

AnalyticLine AnalyticLine::exponential(double rate) {
  AnalyticLine f;
  f.kind_ = Kind::Exponential;
  f.rate_ = rate;
  return f;
}

AnalyticLine AnalyticLine::sinusoid(double wavenumber, double phase) {
  AnalyticLine f;
  f.kind_ = Kind::Sinusoid;
  f.wavenumber_ = wavenumber;
  f.phase_ = phase;
  return f;
}

AnalyticLine AnalyticLine::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  try {
    if (parts[0] == "constant" && parts.size() == 2) return constant(std::stod(parts[1]));
    if (parts[0] == "monomial" && parts.size() == 2) return monomial(std::stoi(parts[1]));
    if (parts[0] == "exp" && parts.size() == 2) return exponential(std::stod(parts[1]));
    if (parts[0] == "sin" && (parts.size() == 2 || parts.size() == 3))
      return sinusoid(std::stod(parts[1]), parts.size() == 3 ? std::stod(parts[2]) : 0.0);
  } catch (const std::invalid_argument&) {
    // fall through to the uniform error below
  } catch (const std::out_of_range&) {
  }
  throw config_error("cannot parse line descriptor '" + text +
                     "' (expected constant:<v>, monomial:<p>, exp:<rate> or sin:<k>[:<phase>])");
}

double AnalyticLine::eval(double x) const {
  switch (kind_) {
    case Kind::Constant: return value_;
    case Kind::Monomial: return std::pow(x, power_);
    case Kind::Exponential: return std::exp(rate_ * x);
    case Kind::Sinusoid: return std::sin(wavenumber_ * x + phase_);
  }
  return 0.0;
}

double AnalyticLine::derivative(double x) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Monomial: return power_ * std::pow(x, power_ - 1);
    case Kind::Exponential: return rate_ * std::exp(rate_ * x);
    case Kind::Sinusoid: return wavenumber_ * std::cos(wavenumber_ * x + phase_);
  }
  return 0.0;
}

std::string AnalyticLine::describe() const {
  switch (kind_) {
    case Kind::Constant: return "constant:" + std::to_string(value_);
    case Kind::Monomial: return "monomial:" + std::to_string(power_);
    case Kind::Exponential: return "exp:" + std::to_string(rate_);
    case Kind::Sinusoid:
      return "sin:" + std::to_string(wavenumber_) + ":" + std::to_string(phase_);
  }
  return "?";
}

SampledLine sample_line(const AnalyticLine& f, double a, double dx, int n) {
  if (n < 3) throw std::invalid_argument("too few samples: a line needs at least 3");
  if (!(dx > 0.0)) throw std::invalid_argument("line spacing must be positive");
  SampledLine out;
  out.origin = a;
  out.dx = dx;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = f.eval(a + i * dx);
  return out;
}

namespace {

void validate(const SampledLine& line) {
  if (line.values.size() < 3)
    throw std::invalid_argument("too few samples: line operators need at least 3");
  if (!(line.dx > 0.0) || !std::isfinite(line.dx))
    throw std::invalid_argument("line spacing must be positive and finite");
  for (double v : line.values)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input sample in line");
}

// Exact integral of the piecewise-linear interpolant against the kernel over
// one cell, folded into the causal recurrence
//   I_{k+1} = E I_k + wl g_k + wr g_{k+1},   E = e^(-c dx),
// with wl = W1/dx, wr = W0 - W1/dx, where W0 = int_0^dx e^(-c u) du and
// W1 = int_0^dx u e^(-c u) du. The propagation factor is exact, so the only
// error source is the interpolant itself.
std::vector<double> causal_integral(const std::vector<double>& g, double c, double dx) {
  const double z = c * dx;
  const double E = std::exp(-z);
  const double w0 = -std::expm1(-z) / c;
  double w1;  // (1 - e^(-z)(1+z)) / c^2, by series below z = 0.01
  if (z < 0.01) {
    w1 = dx * dx *
         (0.5 + z * (-1.0 / 3.0 + z * (0.125 + z * (-1.0 / 30.0 + z * (1.0 / 144.0 - z / 840.0)))));
  } else {
    w1 = (-std::expm1(-z) - z * E) / (c * c);
  }
  const double wl = w1 / dx;
  const double wr = w0 - w1 / dx;

  std::vector<double> out(g.size());
  out[0] = 0.0;
  for (std::size_t k = 0; k + 1 < g.size(); ++k)
    out[k + 1] = E * out[k] + wl * g[k] + wr * g[k + 1];
  return out;
}

// Second-order slope reconstruction: central differences at interior nodes,
// one-sided three-point stencils at the two ends.
std::vector<double> slopes(const std::vector<double>& v, double dx) {
  const std::size_t n = v.size();
  std::vector<double> g(n);
  g[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx);
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (v[i + 1] - v[i - 1]) / (2.0 * dx);
  g[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dx);
  return g;
}

}  // namespace

SampledLine cf_derivative(const SampledLine& line, FractionalOrder order,
                          NormalizationMode mode) {
  validate(line);
  const double c = order.rate();
  const double pref = cf_line_prefactor(order, mode);
  SampledLine out;
  out.origin = line.origin;
  out.dx = line.dx;
  out.values = causal_integral(slopes(line.values, line.dx), c, line.dx);
  for (double& v : out.values) v *= pref;
  return out;
}

SampledLine ysm_derivative(const SampledLine& line, FractionalOrder order,
                           NormalizationMode mode) {
  validate(line);
  const double c = order.rate();
  const double pref = ysm_line_prefactor(order, mode);
  const std::vector<double> J = causal_integral(line.values, c, line.dx);
  SampledLine out;
  out.origin = line.origin;
  out.dx = line.dx;
  out.values.resize(line.values.size());
  out.values[0] = 0.0;  // empty integral at the lower limit
  for (std::size_t i = 1; i < out.values.size(); ++i)
    out.values[i] = pref * (line.values[i] - c * J[i]);
  return out;
}

namespace {

// Closed forms of W_f(x) = int_a^x e^(-c(x-s)) f(s) ds.
//
//   Constant v:        v (1 - Ea) / c,                    Ea = e^(-c(x-a))
//   Monomial s^m:      M_m = (x^m - a^m Ea)/c - (m/c) M_{m-1},  M_0 as above
//                      (integrate by parts once per power)
//   Exponential e^(qs): (e^(qx) - e^(qa) Ea)/(c+q); the resonant q = -c
//                      case degenerates to e^(-cx) (x - a)
//   Sinusoid sin(ks+p): [c sin(kx+p) - k cos(kx+p) - Ea (c sin(ka+p) - k cos(ka+p))]
//                      / (c^2 + k^2), from d/ds e^(cs)(c sin - k cos)/(c^2+k^2)
//                      = e^(cs) sin; the cosine weight swaps sin and cos with
//                      a sign: [c cos + k sin] in place of [c sin - k cos].
double monomial_weighted(int m, double a, double x, double c, double ea) {
  double acc = -std::expm1(-c * (x - a)) / c;  // M_0
  for (int q = 1; q <= m; ++q)
    acc = (std::pow(x, q) - std::pow(a, q) * ea) / c - (q / c) * acc;
  return acc;
}

double weighted_integral(const AnalyticLine& f, AnalyticLine::Kind kind, double value, int power,
                         double rate, double k, double phase, double a, double x, double c,
                         bool of_derivative) {
  const double ea = std::exp(-c * (x - a));
  switch (kind) {
    case AnalyticLine::Kind::Constant:
      return of_derivative ? 0.0 : value * -std::expm1(-c * (x - a)) / c;
    case AnalyticLine::Kind::Monomial:
      return of_derivative ? power * monomial_weighted(power - 1, a, x, c, ea)
                           : monomial_weighted(power, a, x, c, ea);
    case AnalyticLine::Kind::Exponential: {
      double w;
      if (rate == -c)
        w = std::exp(-c * x) * (x - a);
      else
        w = (std::exp(rate * x) - std::exp(rate * a) * ea) / (c + rate);
      return of_derivative ? rate * w : w;
    }
    case AnalyticLine::Kind::Sinusoid: {
      const double den = c * c + k * k;
      if (!of_derivative) {
        const double hx = c * std::sin(k * x + phase) - k * std::cos(k * x + phase);
        const double ha = c * std::sin(k * a + phase) - k * std::cos(k * a + phase);
        return (hx - ea * ha) / den;
      }
      const double hx = c * std::cos(k * x + phase) + k * std::sin(k * x + phase);
      const double ha = c * std::cos(k * a + phase) + k * std::sin(k * a + phase);
      return k * (hx - ea * ha) / den;
    }
  }
  (void)f;
  return 0.0;
}

}  // namespace

double line_oracle(const AnalyticLine& f, LineOp op, FractionalOrder order,
                   NormalizationMode mode, double a, double x) {
  if (x < a) throw std::invalid_argument("line oracle requires x >= a");
  if (x == a) return 0.0;  // both operators vanish at the lower limit
  const double c = order.rate();
  if (op == LineOp::CF) {
    const double w = weighted_integral(f, f.kind_, f.value_, f.power_, f.rate_, f.wavenumber_,
                                       f.phase_, a, x, c, true);
    return cf_line_prefactor(order, mode) * w;
  }
  const double w = weighted_integral(f, f.kind_, f.value_, f.power_, f.rate_, f.wavenumber_,
                                     f.phase_, a, x, c, false);
  return ysm_line_prefactor(order, mode) * (f.eval(x) - c * w);
}

}  // namespace fracflow
