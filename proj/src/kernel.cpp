#include "fracflow/kernel.hpp"

#include <cmath>

namespace fracflow {

FractionalOrder::FractionalOrder(double beta) : beta_(beta), classical_(false) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("fractional order beta must lie strictly in (0,1), got " +
                                std::to_string(beta));
}

FractionalOrder FractionalOrder::classical_limit() { return FractionalOrder(1.0, true); }

double FractionalOrder::rate() const {
  if (classical_)
    throw std::invalid_argument("exponential rate is undefined in the classical limit");
  return beta_ / (1.0 - beta_);
}

double FractionalOrder::gauss_coeff() const {
  if (classical_) return 0.0;  // symbol exp(0) = 1: mollification degenerates to identity
  return (1.0 - beta_) / (4.0 * beta_);
}

double FractionalOrder::sigma() const {
  if (classical_) return 0.0;
  return std::sqrt((1.0 - beta_) / (2.0 * beta_));
}

const char* to_string(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::UnitMass: return "unit-mass";
    case NormalizationMode::PaperCF: return "paper-cf";
    case NormalizationMode::PaperYSM: return "paper-ysm";
    case NormalizationMode::LosadaNieto: return "losada-nieto";
  }
  return "?";
}

NormalizationMode normalization_from_string(const std::string& name) {
  if (name == "unit-mass") return NormalizationMode::UnitMass;
  if (name == "paper-cf") return NormalizationMode::PaperCF;
  if (name == "paper-ysm") return NormalizationMode::PaperYSM;
  if (name == "losada-nieto") return NormalizationMode::LosadaNieto;
  throw config_error("unknown normalization mode '" + name +
                     "' (expected unit-mass, paper-cf, paper-ysm or losada-nieto)");
}

KernelDescriptor KernelDescriptor::gaussian(FractionalOrder order, int dim,
                                            NormalizationMode mode) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("kernel dimension must be 1, 2 or 3");
  return KernelDescriptor{KernelKind::Gaussian, dim, mode, order};
}

KernelDescriptor KernelDescriptor::exponential(FractionalOrder order, NormalizationMode mode) {
  if (mode == NormalizationMode::PaperYSM)
    throw std::invalid_argument("paper-ysm normalization applies to Gaussian mollifiers only");
  return KernelDescriptor{KernelKind::Exponential, 1, mode, order};
}

double cf_prefactor(FractionalOrder order) {
  const double b = order.beta();
  return b / ((1.0 - b) * std::pow(pi, b / 2.0));
}

double paper_constant_I(FractionalOrder order, int dim) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("dimensional constant defined for dimensions 1..3");
  const double b = order.beta();
  const double half = 0.5 * (dim + 2);
  return std::pow(1.0 - b, half) * std::pow(pi, 0.5 * (dim + b)) / std::pow(b, half);
}

double KernelDescriptor::scale() const {
  const double b = order.beta();
  if (kind == KernelKind::Gaussian) {
    switch (normalization) {
      case NormalizationMode::UnitMass:
        // (c/pi)^(dim/2) with c = beta/(1-beta): unit integral over R^dim.
        return std::pow(b / (pi * (1.0 - b)), 0.5 * dim);
      case NormalizationMode::PaperCF:
        return cf_prefactor(order);
      case NormalizationMode::PaperYSM:
        // beta * I(beta,dim) / ((1-beta) pi^(beta/2)); simplifies to
        // (pi (1-beta)/beta)^(dim/2).
        return cf_prefactor(order) * paper_constant_I(order, dim);
      case NormalizationMode::LosadaNieto:
        return cf_prefactor(order) * 2.0 / (2.0 - b);
    }
  } else {
    switch (normalization) {
      case NormalizationMode::UnitMass:
        return 0.5 * order.rate();  // (c/2) exp(-c|x|) integrates to one
      case NormalizationMode::PaperCF:
        return (2.0 - b) / (2.0 * (1.0 - b));
      case NormalizationMode::LosadaNieto:
      case NormalizationMode::PaperYSM:  // rejected at construction; kept total
        return 1.0 / (1.0 - b);
    }
  }
  return 0.0;  // unreachable
}

double exp_rate(FractionalOrder order) { return order.rate(); }

double mollifier_eval(const KernelDescriptor& kernel, double r) {
  if (kernel.order.classical())
    throw std::invalid_argument("classical-limit kernel has no pointwise evaluation");
  const double c = kernel.order.rate();
  if (kernel.kind == KernelKind::Gaussian) return kernel.scale() * std::exp(-c * r * r);
  return kernel.scale() * std::exp(-c * std::abs(r));
}

namespace {

// Composite Simpson over [0, R] with n panels (n is made even), doubled for
// the even kernel profile; in dim > 1 the Gaussian factorizes on axes, so the
// mass is the 1D axis integral raised to the dim-th power.
double simpson_half_line(const KernelDescriptor& kernel, double reach, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = reach / panels;
  double acc = mollifier_eval(kernel, 0.0) + mollifier_eval(kernel, reach);
  for (int i = 1; i < panels; ++i)
    acc += mollifier_eval(kernel, i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

double mollifier_mass(const KernelDescriptor& kernel, int quadrature_n) {
  if (kernel.order.classical()) return 1.0;  // delta kernel: unit mass by definition
  if (quadrature_n < 8) throw std::invalid_argument("quadrature panel count must be >= 8");

  const double c = kernel.order.rate();
  // Reach where the profile decays to ~1e-16 of its peak.
  const double drop = std::log(1e16);
  const double reach =
      kernel.kind == KernelKind::Gaussian ? std::sqrt(drop / c) : drop / c;

  // The prefactor is dimensional for Gaussian kernels; integrate the bare
  // axis profile and reapply scale at the end so the factorization is exact.
  KernelDescriptor axis = kernel;
  axis.kind = kernel.kind;
  axis.dim = 1;
  axis.normalization = NormalizationMode::UnitMass;
  const double axis_scale =
      kernel.kind == KernelKind::Gaussian
          ? std::pow(kernel.order.beta() / (pi * (1.0 - kernel.order.beta())), 0.5)
          : 0.5 * c;

  const double coarse = 2.0 * simpson_half_line(axis, reach, quadrature_n) / axis_scale;
  const double fine = 2.0 * simpson_half_line(axis, reach, 2 * quadrature_n) / axis_scale;
  const double rel = std::abs(fine - coarse) / std::abs(fine);
  if (rel > 1e-10)
    throw numeric_error("mollifier mass quadrature did not converge: refining " +
                        std::to_string(quadrature_n) + " -> " + std::to_string(2 * quadrature_n) +
                        " panels moved the result by relative " + std::to_string(rel));

  const double axis_mass = fine;
  if (kernel.kind == KernelKind::Gaussian)
    return kernel.scale() * std::pow(axis_mass, kernel.dim);
  return kernel.scale() * axis_mass;
}

double mode_mass(FractionalOrder order, int dim, NormalizationMode mode) {
  if (order.classical()) return 1.0;
  const double b = order.beta();
  const double gauss_integral = std::pow(pi * (1.0 - b) / b, 0.5 * dim);
  return KernelDescriptor::gaussian(order, dim, mode).scale() * gauss_integral;
}

double mollifier_symbol(const KernelDescriptor& kernel, double ksq) {
  if (kernel.kind != KernelKind::Gaussian)
    throw std::invalid_argument("Fourier symbol is defined for Gaussian mollifiers only");
  if (kernel.order.classical()) return 1.0;
  return mode_mass(kernel.order, kernel.dim, kernel.normalization) *
         std::exp(-kernel.order.gauss_coeff() * ksq);
}

namespace {

double line_aleph(FractionalOrder order, NormalizationMode mode, bool cf) {
  switch (mode) {
    case NormalizationMode::PaperCF:
      return 1.0;
    case NormalizationMode::LosadaNieto:
      return 2.0 / (2.0 - order.beta());
    case NormalizationMode::UnitMass:
      // The choice that restores the classical derivative as beta -> 1.
      return cf ? 2.0 / (2.0 - order.beta()) : 1.0;
    case NormalizationMode::PaperYSM:
      break;
  }
  throw std::invalid_argument("paper-ysm normalization does not define a line operator");
}

}  // namespace

double cf_line_prefactor(FractionalOrder order, NormalizationMode mode) {
  const double b = order.beta();
  return (2.0 - b) * line_aleph(order, mode, true) / (2.0 * (1.0 - b));
}

double ysm_line_prefactor(FractionalOrder order, NormalizationMode mode) {
  return line_aleph(order, mode, false) / (1.0 - order.beta());
}

}  // namespace fracflow
