#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fracflow/common.hpp"

namespace fracflow {

enum class Boundary { Periodic, Truncated };

// Uniform grid on [0, length)^ndim with n points per axis, row-major (the
// last axis is contiguous). Periodic grids identify 0 with length; truncated
// grids treat the field as zero outside the box.
struct GridSpec {
  int ndim = 1;
  int n = 64;
  double length = two_pi;
  Boundary boundary = Boundary::Periodic;

  GridSpec() = default;
  GridSpec(int ndim_, int n_, double length_, Boundary boundary_ = Boundary::Periodic);

  double spacing() const { return length / n; }
  std::size_t size() const;
  double coord(int i) const { return i * spacing(); }

  bool operator==(const GridSpec&) const = default;
};

class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid) : grid_(grid), values_(grid.size(), 0.0) {}
  ScalarField(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Row-major flat index; trailing indices ignored below the grid dimension.
  std::size_t flat(int ix, int iy = 0, int iz = 0) const;

private:
  GridSpec grid_;
  std::vector<double> values_;
};

class VectorField {
public:
  VectorField() = default;
  explicit VectorField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int components() const { return static_cast<int>(comps_.size()); }
  ScalarField& comp(int i) { return comps_[i]; }
  const ScalarField& comp(int i) const { return comps_[i]; }

private:
  GridSpec grid_;
  std::vector<ScalarField> comps_;
};

// Rank-2 tensor field, components row-major: comp(i,j) = T_ij.
class TensorField {
public:
  TensorField() = default;
  explicit TensorField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  ScalarField& comp(int i, int j) { return comps_[i * grid_.ndim + j]; }
  const ScalarField& comp(int i, int j) const { return comps_[i * grid_.ndim + j]; }

private:
  GridSpec grid_;
  std::vector<ScalarField> comps_;
};

TensorField symmetric_part(const TensorField& t);
TensorField antisymmetric_part(const TensorField& t);
TensorField transpose(const TensorField& t);

// Discrete L2 norm: sqrt(sum v^2 * h^ndim).
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);
double max_abs(const ScalarField& f);
double max_abs(const VectorField& f);
double mean(const ScalarField& f);
double max_abs_diff(const ScalarField& a, const ScalarField& b);

bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

}  // namespace fracflow
