#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rhc/cauchy.hpp"
#include "rhc/grid_function.hpp"
#include "rhc/rhp.hpp"
#include "rhc/types.hpp"

namespace rhc {

/// Winding number of scalar samples around 0 as the circle is traversed in its own
/// orientation. Throws WindingAmbiguityError when the samples under-resolve the phase.
int winding_number(const Circle& c, const Vector& samples);
int winding_number(const GridFunction& v, std::size_t circle = 0);

/// ((z - z_plus) / (z - z_minus))^k; an empty point stands for infinity and its factor is dropped.
Complex theta_factor(Complex z, int k, std::optional<Complex> z_plus, std::optional<Complex> z_minus);
Matrix theta(Complex z, const std::vector<int>& indices, std::optional<Complex> z_plus,
             std::optional<Complex> z_minus);
/// diag[(conj(z+)/conj(z-) (z - 1/conj(z+)) / (z - 1/conj(z-)))^k_j] for finite nonzero z+-.
Matrix theta_sharp(Complex z, const std::vector<int>& indices, Complex z_plus, Complex z_minus);

/// f#(z) = f(1/conj(z))^*.
MatrixFunction sharp(MatrixFunction f);

struct ScalarFactorization {
  int index = 0;
  GridFunction m_plus;
  GridFunction m_minus;
  GridFunction theta;
  GridFunction log_part;  // continuous log(v / theta) at the nodes
  std::optional<Complex> z_plus;
  std::optional<Complex> z_minus;
  double identity_residual = 0.0;  // max |v - theta m+ / m-| / |v|
  std::shared_ptr<const CauchyTransform> transform;

  // exp of the Cauchy integral of log_part: m+ on the plus side, m- on the minus side.
  Complex evaluate(Complex z, double margin = 0.5) const;
};

/// v = m-^{-1} theta m+ on a single circle. The points default to the circle centre
/// for the bounded side and infinity for the unbounded side.
ScalarFactorization scalar_factorize(const GridFunction& v, const CauchyProjectors& proj);
ScalarFactorization scalar_factorize(const GridFunction& v, const CauchyProjectors& proj,
                                     std::optional<Complex> z_plus, std::optional<Complex> z_minus);

struct HermitianFactorization {
  GridFunction w_plus;
  Matrix constant_C;
  Matrix sqrt_R;
  double c_deviation = 0.0;       // max |C(z_k) - mean C|
  double c_stddev = 0.0;          // rms of |C(z_k) - mean C|
  double product_residual = 0.0;  // max |v - w+# w+|
  InversionReport hypotheses;
  RHSolution solution;
};

struct HermitianOptions {
  SolverOptions solver;
  double symmetry_tol = 1e-10;  // v = v# off S^1 and v = v* on S^1
  double constancy_tol = 1e-6;  // max deviation of C(z) before NonConstantCError
};

/// v = (w+)# w+ for v = v# on an inversion-invariant system with v > 0 on S^1.
HermitianFactorization hermitian_factorize(const JumpData& v, const CauchyProjectors& proj,
                                           const HermitianOptions& opts = {});

}  // namespace rhc
