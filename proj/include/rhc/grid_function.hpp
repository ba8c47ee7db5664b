#pragma once

#include <cstddef>
#include <vector>

#include "rhc/contour.hpp"
#include "rhc/types.hpp"

namespace rhc {

/// n x n matrix samples at every collocation node of a contour system.
/// Two grid functions are aligned when they refer to the same system object.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(ContourPtr system, std::vector<Matrix> values);

  static GridFunction constant(ContourPtr system, const Matrix& value);
  static GridFunction identity(ContourPtr system, Eigen::Index dim);
  static GridFunction sample(ContourPtr system, const JumpFunction& f);

  const ContourPtr& system() const { return system_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Matrix>& values() const { return values_; }
  const Matrix& operator[](std::size_t k) const { return values_[k]; }
  Matrix& operator[](std::size_t k) { return values_[k]; }

  // Entry (r, c) over all nodes as a vector of length size().
  Vector entry(Eigen::Index r, Eigen::Index c) const;
  // Entries stacked column-wise: column r*dim + c holds entry (r, c).
  Eigen::MatrixXcd stacked() const;
  static GridFunction from_stacked(ContourPtr system, const Eigen::MatrixXcd& s, Eigen::Index dim);

  GridFunction adjoint() const;
  GridFunction inverse() const;
  double max_norm() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);

 private:
  ContourPtr system_;
  std::vector<Matrix> values_;
  Eigen::Index dim_ = 0;
};

void require_aligned(const GridFunction& a, const GridFunction& b);
void require_aligned(const GridFunction& f, const ContourPtr& system);

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
// Pointwise matrix product a(z_k) * b(z_k).
GridFunction operator*(const GridFunction& a, const GridFunction& b);
GridFunction operator*(const Matrix& a, const GridFunction& b);
GridFunction operator*(const GridFunction& a, const Matrix& b);

}  // namespace rhc
