#include "fracflow/field_ops.hpp"

#include <cmath>

#include "fracflow/fft.hpp"

namespace fracflow {

const char* to_string(OperatorVariant v) {
  return v == OperatorVariant::DerivativeInside ? "inside" : "outside";
}

OperatorVariant variant_from_string(const std::string& name) {
  if (name == "inside") return OperatorVariant::DerivativeInside;
  if (name == "outside") return OperatorVariant::DerivativeOutside;
  throw config_error("unknown operator variant '" + name + "' (expected inside or outside)");
}

const char* to_string(FieldBackend b) {
  return b == FieldBackend::Spectral ? "spectral" : "direct";
}

FieldBackend backend_from_string(const std::string& name) {
  if (name == "spectral") return FieldBackend::Spectral;
  if (name == "direct") return FieldBackend::Direct;
  throw config_error("unknown backend '" + name + "' (expected spectral or direct)");
}

namespace {

using cvec = std::vector<std::complex<double>>;

void require_finite(const ScalarField& f, const char* where) {
  if (!all_finite(f))
    throw numeric_error(std::string("NaN or Inf detected in the ") + where + " field");
}

// ---- spectral plumbing ----------------------------------------------------

// Apply a per-mode complex multiplier: out = ifft(mult(mode) * fft(f)).
template <class Mult>
ScalarField apply_multiplier(const ScalarField& f, Mult&& mult) {
  cvec spec;
  fft::forward(f.grid(), f.values(), spec);
  fft::for_each_mode(f.grid(), [&](const fft::ModeInfo& m) { spec[m.index] *= mult(m); });
  ScalarField out(f.grid());
  fft::inverse(f.grid(), spec, out.values());
  return out;
}

// i k_axis, with the unpaired Nyquist bin zeroed (an odd multiplier has no
// real counterpart there).
std::complex<double> ik_axis(const fft::ModeInfo& m, int axis, int n) {
  if (m.j[axis] == n / 2) return {0.0, 0.0};
  return {0.0, m.k[axis]};
}

ScalarField spectral_derivative(const ScalarField& f, int axis) {
  const int n = f.grid().n;
  return apply_multiplier(f, [axis, n](const fft::ModeInfo& m) { return ik_axis(m, axis, n); });
}

ScalarField spectral_mollify(const ScalarField& f, FractionalOrder order,
                             NormalizationMode mode) {
  const double mass = mode_mass(order, f.grid().ndim, mode);
  const double a = order.gauss_coeff();
  return apply_multiplier(f, [mass, a](const fft::ModeInfo& m) {
    return std::complex<double>(mass * std::exp(-a * m.ksq), 0.0);
  });
}

// ---- direct (real-space) plumbing -----------------------------------------

// Walk every 1D pencil along `axis`; fn(base, stride) addresses its samples
// as values[base + i*stride].
template <class Fn>
void for_each_pencil(const GridSpec& g, int axis, Fn&& fn) {
  const std::size_t n = static_cast<std::size_t>(g.n);
  std::size_t stride = 1;
  for (int d = g.ndim - 1; d > axis; --d) stride *= n;

  const std::size_t total = g.size();
  const std::size_t block = stride * n;  // span of one pencil bundle
  for (std::size_t outer = 0; outer < total; outer += block)
    for (std::size_t inner = 0; inner < stride; ++inner) fn(outer + inner, stride);
}

// Second-order differences: central in the interior; periodic wrap or
// one-sided three-point stencils at truncated ends.
ScalarField direct_derivative(const ScalarField& f, int axis) {
  const GridSpec& g = f.grid();
  const int n = g.n;
  const double h = g.spacing();
  ScalarField out(g);
  const auto& v = f.values();
  auto& o = out.values();

  for_each_pencil(g, axis, [&](std::size_t base, std::size_t s) {
    auto at = [&](int i) { return v[base + static_cast<std::size_t>(i) * s]; };
    auto put = [&](int i, double val) { o[base + static_cast<std::size_t>(i) * s] = val; };
    if (g.boundary == Boundary::Periodic) {
      for (int i = 0; i < n; ++i)
        put(i, (at((i + 1) % n) - at((i + n - 1) % n)) / (2.0 * h));
    } else {
      put(0, (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h));
      for (int i = 1; i < n - 1; ++i) put(i, (at(i + 1) - at(i - 1)) / (2.0 * h));
      put(n - 1, (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h));
    }
  });
  return out;
}

// Truncated Gaussian quadrature stencil: one axis worth of kernel samples,
// weight exp(-c (o h)^2) * h at offset o, |o| <= R = ceil(8 sigma / h).
struct DirectStencil {
  int radius = 0;
  std::vector<double> w;       // raw weights, index o + radius
  std::vector<double> folded;  // periodic fold: weights grouped modulo n
};

DirectStencil make_stencil(const GridSpec& g, FractionalOrder order) {
  const double h = g.spacing();
  const double c = order.rate();
  DirectStencil st;
  st.radius = static_cast<int>(std::ceil(8.0 * order.sigma() / h));
  st.w.resize(2 * st.radius + 1);
  for (int o = -st.radius; o <= st.radius; ++o)
    st.w[o + st.radius] = std::exp(-c * (o * h) * (o * h)) * h;
  if (g.boundary == Boundary::Periodic) {
    // Offsets that land on the same periodic cell share one weight; the
    // stencil then has at most n taps regardless of the physical radius.
    st.folded.assign(g.n, 0.0);
    for (int o = -st.radius; o <= st.radius; ++o)
      st.folded[((o % g.n) + g.n) % g.n] += st.w[o + st.radius];
  }
  return st;
}

ScalarField direct_mollify(const ScalarField& f, FractionalOrder order,
                           NormalizationMode mode) {
  const GridSpec& g = f.grid();
  if (order.classical()) return f;  // identity in the classical limit

  const DirectStencil st = make_stencil(g, order);
  const double scale = KernelDescriptor::gaussian(order, g.ndim, mode).scale();
  const int n = g.n;
  const auto& v = f.values();
  ScalarField out(g);
  auto& o = out.values();

  if (g.boundary == Boundary::Periodic) {
    const auto& w = st.folded;
    auto wrap = [n](int i) { return i >= n ? i - n : i; };
    if (g.ndim == 1) {
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += w[m] * v[wrap(i + m)];
        o[i] = scale * acc;
      }
    } else if (g.ndim == 2) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int s = 0; s < n; ++s) {
            const std::size_t row = static_cast<std::size_t>(wrap(i + s)) * n;
            double inner = 0.0;
            for (int t = 0; t < n; ++t) inner += w[t] * v[row + wrap(j + t)];
            acc += w[s] * inner;
          }
          o[static_cast<std::size_t>(i) * n + j] = scale * acc;
        }
    } else {
      const std::size_t nn = static_cast<std::size_t>(n) * n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int s = 0; s < n; ++s)
              for (int t = 0; t < n; ++t) {
                const std::size_t plane = static_cast<std::size_t>(wrap(i + s)) * nn +
                                          static_cast<std::size_t>(wrap(j + t)) * n;
                double inner = 0.0;
                for (int u = 0; u < n; ++u) inner += w[u] * v[plane + wrap(k + u)];
                acc += w[s] * w[t] * inner;
              }
            o[(static_cast<std::size_t>(i) * n + j) * n + k] = scale * acc;
          }
    }
    return out;
  }

  // Truncated: the field is zero outside the box, so out-of-range taps drop.
  const int R = st.radius;
  const auto& w = st.w;
  if (g.ndim == 1) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      const int lo = std::max(-R, -i), hi = std::min(R, n - 1 - i);
      for (int t = lo; t <= hi; ++t) acc += w[t + R] * v[i + t];
      o[i] = scale * acc;
    }
  } else if (g.ndim == 2) {
    for (int i = 0; i < n; ++i) {
      const int slo = std::max(-R, -i), shi = std::min(R, n - 1 - i);
      for (int j = 0; j < n; ++j) {
        const int tlo = std::max(-R, -j), thi = std::min(R, n - 1 - j);
        double acc = 0.0;
        for (int s = slo; s <= shi; ++s) {
          const std::size_t row = static_cast<std::size_t>(i + s) * n;
          double inner = 0.0;
          for (int t = tlo; t <= thi; ++t) inner += w[t + R] * v[row + j + t];
          acc += w[s + R] * inner;
        }
        o[static_cast<std::size_t>(i) * n + j] = scale * acc;
      }
    }
  } else {
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int s = std::max(-R, -i); s <= std::min(R, n - 1 - i); ++s)
            for (int t = std::max(-R, -j); t <= std::min(R, n - 1 - j); ++t) {
              const std::size_t plane =
                  static_cast<std::size_t>(i + s) * nn + static_cast<std::size_t>(j + t) * n;
              double inner = 0.0;
              for (int u = std::max(-R, -k); u <= std::min(R, n - 1 - k); ++u)
                inner += w[u + R] * v[plane + k + u];
              acc += w[s + R] * w[t + R] * inner;
            }
          o[(static_cast<std::size_t>(i) * n + j) * n + k] = scale * acc;
        }
  }
  return out;
}

// ---- shared dispatch -------------------------------------------------------

ScalarField derivative(const ScalarField& f, int axis, FieldBackend backend) {
  if (backend == FieldBackend::Spectral) return spectral_derivative(f, axis);
  return direct_derivative(f, axis);
}

// One fractional partial derivative: smoothing and differentiation composed
// in the order the variant dictates.
ScalarField partial_beta(const ScalarField& f, int axis, FractionalOrder order,
                         OperatorVariant variant, NormalizationMode mode,
                         FieldBackend backend) {
  if (variant == OperatorVariant::DerivativeInside)
    return mollify(derivative(f, axis, backend), order, mode, backend);
  return derivative(mollify(f, order, mode, backend), axis, backend);
}

void check_vector(const VectorField& v, const char* where) {
  if (v.components() != v.grid().ndim)
    throw std::invalid_argument(std::string("component count mismatch in ") + where);
}

}  // namespace

ScalarField mollify(const ScalarField& f, FractionalOrder order, NormalizationMode mode,
                    FieldBackend backend) {
  require_finite(f, "mollify input");
  if (backend == FieldBackend::Spectral) {
    if (order.classical()) return f;
    return spectral_mollify(f, order, mode);
  }
  return direct_mollify(f, order, mode);
}

VectorField grad_beta(const ScalarField& f, FractionalOrder order, OperatorVariant variant,
                      NormalizationMode mode, FieldBackend backend) {
  require_finite(f, "grad input");
  VectorField out(f.grid());
  for (int d = 0; d < f.grid().ndim; ++d)
    out.comp(d) = partial_beta(f, d, order, variant, mode, backend);
  return out;
}

ScalarField div_beta(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                     NormalizationMode mode, FieldBackend backend) {
  check_vector(v, "div_beta");
  ScalarField out(v.grid());
  for (int d = 0; d < v.grid().ndim; ++d) {
    const ScalarField term = partial_beta(v.comp(d), d, order, variant, mode, backend);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
  }
  return out;
}

ScalarField laplacian_beta(const ScalarField& f, FractionalOrder order, NormalizationMode mode,
                           FieldBackend backend) {
  return mollify(laplacian(f, backend), order, mode, backend);
}

ScalarField curl2d_beta(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                        NormalizationMode mode, FieldBackend backend) {
  check_vector(v, "curl2d_beta");
  if (v.grid().ndim != 2)
    throw std::invalid_argument("unsupported dimension: scalar vorticity needs a 2D field");
  const ScalarField a = partial_beta(v.comp(1), 0, order, variant, mode, backend);
  const ScalarField b = partial_beta(v.comp(0), 1, order, variant, mode, backend);
  ScalarField out(v.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

VectorField curl3d_beta(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                        NormalizationMode mode, FieldBackend backend) {
  check_vector(v, "curl3d_beta");
  if (v.grid().ndim != 3)
    throw std::invalid_argument("unsupported dimension: the curl vector needs a 3D field");
  VectorField out(v.grid());
  for (int d = 0; d < 3; ++d) {
    const int p = (d + 1) % 3, q = (d + 2) % 3;
    const ScalarField a = partial_beta(v.comp(q), p, order, variant, mode, backend);
    const ScalarField b = partial_beta(v.comp(p), q, order, variant, mode, backend);
    for (std::size_t i = 0; i < a.size(); ++i) out.comp(d)[i] = a[i] - b[i];
  }
  return out;
}

TensorField grad_tensor_beta(const VectorField& v, FractionalOrder order,
                             OperatorVariant variant, NormalizationMode mode,
                             FieldBackend backend) {
  check_vector(v, "grad_tensor_beta");
  if (v.grid().ndim < 2)
    throw std::invalid_argument("unsupported dimension: the gradient tensor needs ndim >= 2");
  TensorField out(v.grid());
  for (int i = 0; i < v.grid().ndim; ++i)
    for (int j = 0; j < v.grid().ndim; ++j)
      out.comp(i, j) = partial_beta(v.comp(j), i, order, variant, mode, backend);
  return out;
}

TensorField strain_rate(const VectorField& v, FractionalOrder order, OperatorVariant variant,
                        NormalizationMode mode, FieldBackend backend) {
  return symmetric_part(grad_tensor_beta(v, order, variant, mode, backend));
}

TensorField cauchy_stress(const VectorField& v, const ScalarField& p, double mu,
                          double lambda_bulk, FractionalOrder order, NormalizationMode mode,
                          FieldBackend backend) {
  check_vector(v, "cauchy_stress");
  if (!(v.grid() == p.grid()))
    throw std::invalid_argument("velocity and pressure grids differ in cauchy_stress");
  if (mu < 0.0) throw std::invalid_argument("dynamic viscosity must be nonnegative");

  const OperatorVariant variant = OperatorVariant::DerivativeOutside;
  TensorField out = strain_rate(v, order, variant, mode, backend);
  const ScalarField dil = div_beta(v, order, variant, mode, backend);
  const int nd = v.grid().ndim;
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) {
      auto& c = out.comp(i, j).values();
      for (std::size_t m = 0; m < c.size(); ++m) {
        c[m] *= 2.0 * mu;
        if (i == j) c[m] += -p[m] + lambda_bulk * dil[m];
      }
    }
  return out;
}

ScalarField continuity_residual(const ScalarField& rho, const ScalarField& drho_dt,
                                const VectorField& v, FractionalOrder order,
                                NormalizationMode mode, FieldBackend backend) {
  if (!(rho.grid() == drho_dt.grid()) || !(rho.grid() == v.grid()))
    throw std::invalid_argument("grid mismatch in continuity_residual");
  const VectorField g = grad_beta(rho, order, OperatorVariant::DerivativeOutside, mode, backend);
  ScalarField out(rho.grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double adv = 0.0;
    for (int d = 0; d < rho.grid().ndim; ++d) adv += v.comp(d)[i] * g.comp(d)[i];
    out[i] = drho_dt[i] + adv;
  }
  return out;
}

VectorField gradient(const ScalarField& f, FieldBackend backend) {
  VectorField out(f.grid());
  for (int d = 0; d < f.grid().ndim; ++d) out.comp(d) = derivative(f, d, backend);
  return out;
}

ScalarField divergence(const VectorField& v, FieldBackend backend) {
  check_vector(v, "divergence");
  ScalarField out(v.grid());
  for (int d = 0; d < v.grid().ndim; ++d) {
    const ScalarField term = derivative(v.comp(d), d, backend);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
  }
  return out;
}

ScalarField laplacian(const ScalarField& f, FieldBackend backend) {
  if (backend == FieldBackend::Spectral)
    return apply_multiplier(
        f, [](const fft::ModeInfo& m) { return std::complex<double>(-m.ksq, 0.0); });
  ScalarField out(f.grid());
  for (int d = 0; d < f.grid().ndim; ++d) {
    const ScalarField dd = direct_derivative(direct_derivative(f, d), d);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += dd[i];
  }
  return out;
}

ScalarField curl2d(const VectorField& v, FieldBackend backend) {
  check_vector(v, "curl2d");
  if (v.grid().ndim != 2)
    throw std::invalid_argument("unsupported dimension: scalar vorticity needs a 2D field");
  const ScalarField a = derivative(v.comp(1), 0, backend);
  const ScalarField b = derivative(v.comp(0), 1, backend);
  ScalarField out(v.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

VectorField curl3d(const VectorField& v, FieldBackend backend) {
  check_vector(v, "curl3d");
  if (v.grid().ndim != 3)
    throw std::invalid_argument("unsupported dimension: the curl vector needs a 3D field");
  VectorField out(v.grid());
  for (int d = 0; d < 3; ++d) {
    const int p = (d + 1) % 3, q = (d + 2) % 3;
    const ScalarField a = derivative(v.comp(q), p, backend);
    const ScalarField b = derivative(v.comp(p), q, backend);
    for (std::size_t i = 0; i < a.size(); ++i) out.comp(d)[i] = a[i] - b[i];
  }
  return out;
}

void dealias_23(const GridSpec& grid, std::vector<std::complex<double>>& spec) {
  const double cut = grid.n / 3.0;
  fft::for_each_mode(grid, [&](const fft::ModeInfo& m) {
    for (int d = 0; d < grid.ndim; ++d)
      if (std::abs(m.j[d]) > cut) {
        spec[m.index] = 0.0;
        return;
      }
  });
}

ScalarField multiply(const ScalarField& a, const ScalarField& b, bool dealias) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("grid mismatch in multiply");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  if (!dealias) return out;
  cvec spec;
  fft::forward(out.grid(), out.values(), spec);
  dealias_23(out.grid(), spec);
  fft::inverse(out.grid(), spec, out.values());
  return out;
}

}  // namespace fracflow
