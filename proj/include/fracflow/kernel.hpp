#pragma once

#include <string>

#include "fracflow/common.hpp"

namespace fracflow {

// Fractional order beta, valid strictly inside (0,1). The classical limit
// beta -> 1 is representable only through the distinguished marker returned
// by classical_limit(); it makes mollification the identity and is accepted
// by the field operators, while the exponential rate is undefined for it.
class FractionalOrder {
public:
  explicit FractionalOrder(double beta);
  static FractionalOrder classical_limit();

  double beta() const { return beta_; }
  bool classical() const { return classical_; }

  // c = beta/(1-beta), the decay rate of both kernel families.
  double rate() const;
  // a = (1-beta)/(4 beta), the Fourier-side Gaussian coefficient: the
  // mollifier symbol is exp(-a*|k|^2) before normalization.
  double gauss_coeff() const;
  // sigma = sqrt((1-beta)/(2 beta)), standard deviation of the unit-mass
  // mollifier; used to size real-space quadrature stencils.
  double sigma() const;

private:
  FractionalOrder(double beta, bool classical) : beta_(beta), classical_(classical) {}
  double beta_;
  bool classical_;
};

// Normalization of the kernel prefactor. UnitMass makes the mollifier a true
// approximate identity (integral one); the other modes reproduce specific
// published constants and generally do not have unit mass.
enum class NormalizationMode { UnitMass, PaperCF, PaperYSM, LosadaNieto };

const char* to_string(NormalizationMode mode);
NormalizationMode normalization_from_string(const std::string& name);

enum class KernelKind { Exponential, Gaussian };

// A concrete kernel: family, spatial dimension (Gaussian mollifiers act on
// R^dim; the exponential kernel is the one-dimensional line kernel), and the
// normalization mode that fixes the scalar prefactor.
struct KernelDescriptor {
  KernelKind kind = KernelKind::Gaussian;
  int dim = 1;
  NormalizationMode normalization = NormalizationMode::UnitMass;
  FractionalOrder order;

  static KernelDescriptor gaussian(FractionalOrder order, int dim,
                                   NormalizationMode mode = NormalizationMode::UnitMass);
  static KernelDescriptor exponential(FractionalOrder order,
                                      NormalizationMode mode = NormalizationMode::UnitMass);

  // Scalar prefactor multiplying exp(-c r^2) (Gaussian) or exp(-c |r|)
  // (exponential) under this normalization.
  double scale() const;
};

// c = beta/(1-beta); rejects the classical-limit marker.
double exp_rate(FractionalOrder order);

// Kernel value at radius r (Gaussian: scale*exp(-c r^2); exponential:
// scale*exp(-c|r|)). Rejects the classical-limit marker (delta kernel).
double mollifier_eval(const KernelDescriptor& kernel, double r);

// Total integral over R^dim computed by composite Simpson quadrature with
// quadrature_n panels per half-axis. Throws numeric_error when doubling the
// panel count still moves the result by more than 1e-10 relative.
double mollifier_mass(const KernelDescriptor& kernel, int quadrature_n);

// Fourier symbol of the Gaussian mollifier at squared wavenumber ksq:
// mass(mode) * exp(-(1-beta)/(4 beta) * ksq). Defined for Gaussian kernels
// only. The classical marker yields identically 1.
double mollifier_symbol(const KernelDescriptor& kernel, double ksq);

// Analytic mass of the Gaussian mollifier under a normalization mode:
// scale * (pi (1-beta)/beta)^(dim/2). UnitMass gives exactly 1.
double mode_mass(FractionalOrder order, int dim, NormalizationMode mode);

// The published dimensional constant: I(beta,n) =
// (1-beta)^((n+2)/2) * pi^((n+beta)/2) / beta^((n+2)/2), for n in 1..3.
double paper_constant_I(FractionalOrder order, int dim);

// The published scalar prefactor beta / ((1-beta) * pi^(beta/2)).
double cf_prefactor(FractionalOrder order);

// Prefactors of the two line derivatives under a normalization mode.
// CF:  (2-beta)*aleph / (2(1-beta));  YSM: aleph / (1-beta).
// aleph is mode-dependent: 1 for the published constants, 2/(2-beta) for
// LosadaNieto; UnitMass picks the choice restoring the classical limit
// (2/(2-beta) for CF, 1 for YSM). PaperYSM is not a line-operator mode.
double cf_line_prefactor(FractionalOrder order, NormalizationMode mode);
double ysm_line_prefactor(FractionalOrder order, NormalizationMode mode);

}  // namespace fracflow
