#include "rhc/cauchy.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "rhc/errors.hpp"

namespace rhc {

namespace {

// phi_j(zeta) for storage index j, times the circle's orientation sign.
void series_weights(const Circle& c, Complex z, Branch b, Eigen::Ref<Eigen::RowVectorXcd, 0, Eigen::InnerStride<>> phi) {
  const int n = c.node_count;
  const int half = n / 2;
  const Complex zeta = (z - c.center) / c.radius;
  const double s = c.orientation_sign();
  phi.setZero();
  if (b == Branch::interior) {
    Complex p = 1.0;
    for (int m = 0; m < half; ++m) {
      phi(m) = s * p;
      p *= zeta;
    }
    phi(half) = 0.5 * s * p;
  } else {
    const Complex inv = 1.0 / zeta;
    Complex p = inv;
    for (int m = 1; m < half; ++m) {
      phi(n - m) = -s * p;
      p *= inv;
    }
    phi(half) = -0.5 * s * p;
  }
}

}  // namespace

Eigen::MatrixXcd dft_matrix(int n) {
  Eigen::MatrixXcd f(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const int jk = static_cast<int>((static_cast<long>(j) * k) % n);
      const double t = -2.0 * kPi * jk / n;
      f(j, k) = Complex(std::cos(t), std::sin(t)) / static_cast<double>(n);
    }
  return f;
}

Vector fourier_coefficients(const Vector& samples) {
  return dft_matrix(static_cast<int>(samples.size())) * samples;
}

Branch geometric_branch(const Circle& c, Complex z) {
  return std::abs(z - c.center) < c.radius ? Branch::interior : Branch::exterior;
}

Branch boundary_branch(const Circle& c, Side s) {
  return (s == Side::plus) == c.interior_is_plus() ? Branch::interior : Branch::exterior;
}

Eigen::MatrixXcd cauchy_rows(const Circle& c, const std::vector<Complex>& points,
                             const std::vector<Branch>& branches) {
  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd phi(rows, c.node_count);
  for (Eigen::Index t = 0; t < rows; ++t) series_weights(c, points[t], branches[t], phi.row(t));
  return phi * dft_matrix(c.node_count);
}

Eigen::MatrixXcd CauchyProjectors::plus_block(Eigen::Index n) const {
  return Eigen::kroneckerProduct(plus, Eigen::MatrixXcd::Identity(n, n));
}

Eigen::MatrixXcd CauchyProjectors::minus_block(Eigen::Index n) const {
  return Eigen::kroneckerProduct(minus, Eigen::MatrixXcd::Identity(n, n));
}

CauchyProjectors build_projectors(const ContourPtr& system) {
  const auto total = static_cast<Eigen::Index>(system->total_nodes());
  CauchyProjectors p;
  p.system = system;
  p.plus.resize(total, total);
  for (std::size_t i = 0; i < system->circle_count(); ++i) {  // source circle
    const Circle& src = system->circle(i);
    std::vector<Complex> points;
    std::vector<Branch> branches;
    points.reserve(system->total_nodes());
    for (std::size_t j = 0; j < system->circle_count(); ++j) {  // target circle
      const Circle& dst = system->circle(j);
      for (int k = 0; k < dst.node_count; ++k) {
        points.push_back(dst.node(k));
        branches.push_back(i == j ? boundary_branch(src, Side::plus) : geometric_branch(src, dst.node(k)));
      }
    }
    const auto off = static_cast<Eigen::Index>(system->offset(i));
    p.plus.middleCols(off, src.node_count) = cauchy_rows(src, points, branches);
  }
  p.minus = p.plus - Eigen::MatrixXcd::Identity(total, total);
  return p;
}

GridFunction apply_plus(const CauchyProjectors& p, const GridFunction& f) {
  require_aligned(f, p.system);
  return GridFunction::from_stacked(p.system, p.plus * f.stacked(), f.dim());
}

GridFunction apply_minus(const CauchyProjectors& p, const GridFunction& f) {
  require_aligned(f, p.system);
  return GridFunction::from_stacked(p.system, p.minus * f.stacked(), f.dim());
}

CauchyTransform::CauchyTransform(const GridFunction& f) : system_(f.system()), dim_(f.dim()) {
  const Eigen::MatrixXcd s = f.stacked();
  for (std::size_t i = 0; i < system_->circle_count(); ++i) {
    const int n = system_->circle(i).node_count;
    coefficients_.push_back(dft_matrix(n) * s.middleRows(static_cast<Eigen::Index>(system_->offset(i)), n));
  }
}

Matrix CauchyTransform::series(std::size_t circle, Complex z, Branch b) const {
  const Circle& c = system_->circle(circle);
  Eigen::RowVectorXcd phi(c.node_count);
  series_weights(c, z, b, phi);
  const Eigen::RowVectorXcd flat = phi * coefficients_[circle];
  Matrix out(dim_, dim_);
  for (Eigen::Index r = 0; r < dim_; ++r)
    for (Eigen::Index col = 0; col < dim_; ++col) out(r, col) = flat(r * dim_ + col);
  return out;
}

Matrix CauchyTransform::evaluate(Complex z, double margin) const {
  check_margin(*system_, z, margin);
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < system_->circle_count(); ++i)
    out += series(i, z, geometric_branch(system_->circle(i), z));
  return out;
}

Matrix CauchyTransform::boundary_value(std::size_t circle, Complex z, Side side) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < system_->circle_count(); ++i) {
    const Circle& c = system_->circle(i);
    out += series(i, z, i == circle ? boundary_branch(c, side) : geometric_branch(c, z));
  }
  return out;
}

void check_margin(const ContourSystem& cs, Complex z, double margin) {
  for (std::size_t i = 0; i < cs.circle_count(); ++i) {
    const Circle& c = cs.circle(i);
    const double limit = margin * c.node_spacing();
    // Nearest node lies within one node spacing of the radial projection of z.
    if (std::abs(std::abs(z - c.center) - c.radius) >= limit) continue;
    for (int k = 0; k < c.node_count; ++k) {
      if (std::abs(z - c.node(k)) < limit) {
        std::ostringstream msg;
        msg << "point (" << z.real() << ", " << z.imag() << ") is within " << margin
            << " node spacings of circle " << i;
        throw TooCloseToContourError(msg.str());
      }
    }
  }
}

Matrix cauchy_offcontour(const GridFunction& f, Complex z, double margin) {
  return CauchyTransform(f).evaluate(z, margin);
}

}  // namespace rhc
