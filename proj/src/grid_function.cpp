#include "rhc/grid_function.hpp"

#include <algorithm>

#include "rhc/errors.hpp"

namespace rhc {

GridFunction::GridFunction(ContourPtr system, std::vector<Matrix> values)
    : system_(std::move(system)), values_(std::move(values)) {
  if (!system_) throw InvalidArgumentError("grid function needs a contour system");
  if (values_.size() != system_->total_nodes())
    throw AlignmentError("grid function has " + std::to_string(values_.size()) + " values for " +
                         std::to_string(system_->total_nodes()) + " nodes");
  dim_ = values_.empty() ? 0 : values_.front().rows();
  for (const auto& m : values_)
    if (m.rows() != dim_ || m.cols() != dim_) throw AlignmentError("grid function values must be square and uniform");
}

GridFunction GridFunction::constant(ContourPtr system, const Matrix& value) {
  const std::size_t n = system->total_nodes();
  return GridFunction(std::move(system), std::vector<Matrix>(n, value));
}

GridFunction GridFunction::identity(ContourPtr system, Eigen::Index dim) {
  return constant(std::move(system), Matrix::Identity(dim, dim));
}

GridFunction GridFunction::sample(ContourPtr system, const JumpFunction& f) {
  std::vector<Matrix> values;
  values.reserve(system->total_nodes());
  for (std::size_t i = 0; i < system->circle_count(); ++i) {
    const Circle& c = system->circle(i);
    for (int k = 0; k < c.node_count; ++k) values.push_back(f(i, c.node(k)));
  }
  return GridFunction(std::move(system), std::move(values));
}

Vector GridFunction::entry(Eigen::Index r, Eigen::Index c) const {
  Vector out(static_cast<Eigen::Index>(values_.size()));
  for (std::size_t k = 0; k < values_.size(); ++k) out(static_cast<Eigen::Index>(k)) = values_[k](r, c);
  return out;
}

Eigen::MatrixXcd GridFunction::stacked() const {
  Eigen::MatrixXcd s(static_cast<Eigen::Index>(values_.size()), dim_ * dim_);
  for (std::size_t k = 0; k < values_.size(); ++k)
    for (Eigen::Index r = 0; r < dim_; ++r)
      for (Eigen::Index c = 0; c < dim_; ++c) s(static_cast<Eigen::Index>(k), r * dim_ + c) = values_[k](r, c);
  return s;
}

GridFunction GridFunction::from_stacked(ContourPtr system, const Eigen::MatrixXcd& s, Eigen::Index dim) {
  std::vector<Matrix> values(static_cast<std::size_t>(s.rows()), Matrix(dim, dim));
  for (Eigen::Index k = 0; k < s.rows(); ++k)
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) values[static_cast<std::size_t>(k)](r, c) = s(k, r * dim + c);
  return GridFunction(std::move(system), std::move(values));
}

GridFunction GridFunction::adjoint() const {
  std::vector<Matrix> out;
  out.reserve(values_.size());
  for (const auto& m : values_) out.push_back(m.adjoint());
  return GridFunction(system_, std::move(out));
}

GridFunction GridFunction::inverse() const {
  std::vector<Matrix> out;
  out.reserve(values_.size());
  for (const auto& m : values_) out.push_back(m.inverse());
  return GridFunction(system_, std::move(out));
}

double GridFunction::max_norm() const {
  double best = 0.0;
  for (const auto& m : values_) best = std::max(best, m.cwiseAbs().maxCoeff());
  return best;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_aligned(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_aligned(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

void require_aligned(const GridFunction& a, const GridFunction& b) {
  if (a.system() != b.system()) throw AlignmentError("grid functions live on different contour systems");
  if (a.dim() != b.dim()) throw AlignmentError("grid functions have different matrix dimensions");
}

void require_aligned(const GridFunction& f, const ContourPtr& system) {
  if (f.system() != system) throw AlignmentError("grid function is not aligned with the contour system");
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  require_aligned(a, b);
  std::vector<Matrix> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(a[k] * b[k]);
  return GridFunction(a.system(), std::move(out));
}

GridFunction operator*(const Matrix& a, const GridFunction& b) {
  std::vector<Matrix> out;
  out.reserve(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) out.push_back(a * b[k]);
  return GridFunction(b.system(), std::move(out));
}

GridFunction operator*(const GridFunction& a, const Matrix& b) {
  std::vector<Matrix> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(a[k] * b);
  return GridFunction(a.system(), std::move(out));
}

}  // namespace rhc
