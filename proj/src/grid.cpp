#include "fracflow/grid.hpp"

#include <algorithm>
#include <cmath>

namespace fracflow {

GridSpec::GridSpec(int ndim_, int n_, double length_, Boundary boundary_)
    : ndim(ndim_), n(n_), length(length_), boundary(boundary_) {
  if (ndim < 1 || ndim > 3)
    throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (n < 8) throw std::invalid_argument("grid needs at least 8 points per axis");
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("grid length must be positive and finite");
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int d = 0; d < ndim; ++d) s *= static_cast<std::size_t>(n);
  return s;
}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field value count does not match the grid size");
}

std::size_t ScalarField::flat(int ix, int iy, int iz) const {
  const std::size_t n = static_cast<std::size_t>(grid_.n);
  switch (grid_.ndim) {
    case 1: return static_cast<std::size_t>(ix);
    case 2: return static_cast<std::size_t>(ix) * n + iy;
    default: return (static_cast<std::size_t>(ix) * n + iy) * n + iz;
  }
}

VectorField::VectorField(const GridSpec& grid) : grid_(grid) {
  comps_.assign(grid.ndim, ScalarField(grid));
}

TensorField::TensorField(const GridSpec& grid) : grid_(grid) {
  comps_.assign(static_cast<std::size_t>(grid.ndim) * grid.ndim, ScalarField(grid));
}

TensorField symmetric_part(const TensorField& t) {
  TensorField out(t.grid());
  const int nd = t.grid().ndim;
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) {
      const auto& a = t.comp(i, j).values();
      const auto& b = t.comp(j, i).values();
      auto& o = out.comp(i, j).values();
      for (std::size_t m = 0; m < o.size(); ++m) o[m] = 0.5 * (a[m] + b[m]);
    }
  return out;
}

TensorField antisymmetric_part(const TensorField& t) {
  TensorField out(t.grid());
  const int nd = t.grid().ndim;
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) {
      const auto& a = t.comp(i, j).values();
      const auto& b = t.comp(j, i).values();
      auto& o = out.comp(i, j).values();
      for (std::size_t m = 0; m < o.size(); ++m) o[m] = 0.5 * (a[m] - b[m]);
    }
  return out;
}

TensorField transpose(const TensorField& t) {
  TensorField out(t.grid());
  const int nd = t.grid().ndim;
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) out.comp(i, j) = t.comp(j, i);
  return out;
}

double l2_norm(const ScalarField& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v * v;
  return std::sqrt(acc * std::pow(f.grid().spacing(), f.grid().ndim));
}

double l2_norm(const VectorField& f) {
  double acc = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const double nc = l2_norm(f.comp(c));
    acc += nc * nc;
  }
  return std::sqrt(acc);
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const VectorField& f) {
  double m = 0.0;
  for (int c = 0; c < f.components(); ++c) m = std::max(m, max_abs(f.comp(c)));
  return m;
}

double mean(const ScalarField& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc / static_cast<double>(f.size());
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("field size mismatch in max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(const ScalarField& f) {
  for (double v : f.values())
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const VectorField& f) {
  for (int c = 0; c < f.components(); ++c)
    if (!all_finite(f.comp(c))) return false;
  return true;
}

}  // namespace fracflow
