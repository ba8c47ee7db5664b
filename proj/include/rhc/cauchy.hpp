#pragma once

#include <cstddef>
#include <vector>

#include "rhc/contour.hpp"
#include "rhc/grid_function.hpp"
#include "rhc/types.hpp"

namespace rhc {

/// Which one-sided Fourier series of a circle's interpolant to use.
enum class Branch { interior, exterior };

// Fourier mode carried by storage index j of an N-point DFT (j >= N/2 maps to j - N).
inline int fourier_mode(int j, int n) { return j < n / 2 ? j : j - n; }

/// (1/N) sum_k f_k exp(-2 pi i j k / N), j = 0..N-1 in storage order.
Eigen::MatrixXcd dft_matrix(int n);

/// Coefficients a_m of samples taken at the N equispaced nodes of one circle.
Vector fourier_coefficients(const Vector& samples);

Branch geometric_branch(const Circle& c, Complex z);
// Branch giving the boundary value on circle c from side s.
Branch boundary_branch(const Circle& c, Side s);

/// Rows r(z) with r(z) . f = (1/2 pi i) \oint_c p(w) / (w - z) dw, p the trigonometric
/// interpolant of the node samples f. The Nyquist mode is split evenly between the
/// two branches, so interior minus exterior rows reproduce p on the circle.
Eigen::MatrixXcd cauchy_rows(const Circle& c, const std::vector<Complex>& points,
                             const std::vector<Branch>& branches);

/// Scalar N x N matrices of the discrete C+ and C- = C+ - I over all nodes.
struct CauchyProjectors {
  ContourPtr system;
  Eigen::MatrixXcd plus;
  Eigen::MatrixXcd minus;

  // kron(plus, I_n): the operator on node-major stacked n-vectors.
  Eigen::MatrixXcd plus_block(Eigen::Index n) const;
  Eigen::MatrixXcd minus_block(Eigen::Index n) const;
};

CauchyProjectors build_projectors(const ContourPtr& system);

GridFunction apply_plus(const CauchyProjectors& p, const GridFunction& f);
GridFunction apply_minus(const CauchyProjectors& p, const GridFunction& f);

/// Cauchy integral of a fixed grid function, with its Fourier coefficients cached
/// for repeated off-contour and boundary evaluation.
class CauchyTransform {
 public:
  explicit CauchyTransform(const GridFunction& f);

  Eigen::Index dim() const { return dim_; }
  const ContourPtr& system() const { return system_; }

  // Off-contour value. Throws TooCloseToContourError when z is within
  // margin * (local node spacing) of a node.
  Matrix evaluate(Complex z, double margin = 0.5) const;
  // One-sided boundary value at a point z of circle i (any point, not only nodes).
  Matrix boundary_value(std::size_t circle, Complex z, Side side) const;

 private:
  Matrix series(std::size_t circle, Complex z, Branch b) const;

  ContourPtr system_;
  Eigen::Index dim_ = 0;
  std::vector<Eigen::MatrixXcd> coefficients_;  // per circle: N_i x dim^2
};

// Throws TooCloseToContourError if z is within margin * spacing of any node.
void check_margin(const ContourSystem& cs, Complex z, double margin);

Matrix cauchy_offcontour(const GridFunction& f, Complex z, double margin = 0.5);

}  // namespace rhc
