#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "rhc/cauchy.hpp"
#include "rhc/contour.hpp"
#include "rhc/grid_function.hpp"
#include "rhc/types.hpp"

namespace rhc {

struct SolverOptions {
  double det_floor = 1e-10;   // |det v|, |det b+-| below this are singular
  double sigma_min = 1e-8;    // smallest admissible singular value of Id - C_w
  double rank_tol = 1e-7;     // singular values below this are null directions
  double low_mode_cut = 0.25; // modes |m| <= low_mode_cut * N_i count as resolved
};

/// Sampled jump matrix together with the closed form it was sampled from.
struct JumpData {
  GridFunction v;
  JumpFunction closed_form;

  static JumpData sample(const ContourPtr& system, JumpFunction f, double det_floor = 1e-10);
};

struct FactorizationData {
  GridFunction w_plus;
  GridFunction w_minus;

  GridFunction b_plus() const;   // I + w+
  GridFunction b_minus() const;  // I - w-
};

/// side = plus: b+ = v, b- = I. side = minus: b+ = I, b- = v^{-1}.
FactorizationData trivial_splitting(const JumpData& v, Side side, double det_floor = 1e-10);

struct RHProblem {
  ContourPtr system;
  FactorizationData data;
  Matrix h;
  // Optional closed-form jump; when set, residuals are also measured between nodes.
  JumpFunction jump;

  static RHProblem from_jump(const JumpData& v, Side splitting, const Matrix& h,
                             double det_floor = 1e-10);
};

/// Null-space bookkeeping of one SVD of the row operator.
struct IndexReport {
  int dim_ker = 0;
  int dim_coker = 0;
  double smallest_singular_value = 0.0;  // over all singular values
  double smallest_retained = 0.0;        // smallest singular value >= rank_tol
  double largest_discarded = 0.0;        // largest singular value < rank_tol (0 if none)
  std::size_t discarded = 0;             // singular values below rank_tol
  std::size_t deflated = 0;              // discarded ones judged to be aliasing artefacts
  // log10(smallest_retained / largest_discarded); empty when nothing is discarded,
  // infinite when the discarded singular values are exactly zero.
  std::optional<double> separation_decades;
};

struct RHSolution {
  ContourPtr system;
  Matrix h;
  FactorizationData data;
  GridFunction mu;
  GridFunction m_plus;
  GridFunction m_minus;
  double residual_jump = 0.0;
  double smallest_singular_value = 0.0;
  double backward_error = 0.0;
  IndexReport spectrum;
  std::shared_ptr<const CauchyTransform> transform;  // of mu (w+ + w-)
};

/// Full operator phi -> phi - C+(phi w-) - C-(phi w+) on stacked entries:
/// unknown index (k n + r) n + c holds phi(z_k)_{rc}.
Eigen::MatrixXcd assemble_operator(const RHProblem& p, const CauchyProjectors& proj);

/// The same operator restricted to one row of phi (right multiplication acts row by
/// row): unknown index k n + c. The full operator is n copies of this block.
Eigen::MatrixXcd assemble_row_operator(const RHProblem& p, const CauchyProjectors& proj);

/// Solves (Id - C_w) mu = h. Throws NearSingularOperatorError when the operator has
/// a resolved null direction or sigma < sigma_min, RankAmbiguityError when the
/// null-space decision is not clear-cut.
RHSolution solve(const RHProblem& p, const CauchyProjectors& proj, const SolverOptions& opts = {});

Matrix evaluate_m(const RHSolution& sol, Complex z, double margin = 0.5);
// Boundary value of m at a point z of circle i from the given side.
Matrix boundary_m(const RHSolution& sol, std::size_t circle, Complex z, Side side);

/// max |m+ - m- v| (Frobenius) over nodes and the midpoints between nodes, with v
/// re-evaluated in closed form and m+- taken from the Cauchy representation.
double jump_residual(const RHSolution& sol, const JumpFunction& v);

struct RangeDefect {
  double plus = 0.0;   // |C-(m+ - h)|
  double minus = 0.0;  // |C+(m- - h)|
};
RangeDefect range_defect(const RHSolution& sol, const CauchyProjectors& proj);

IndexReport index_diagnostics(const RHProblem& p, const CauchyProjectors& proj,
                              const SolverOptions& opts = {});

/// For each circle, the index of its image under z -> 1/conj(z) (itself for S^1).
/// Throws NotInversionInvariantContourError if S^1 is absent or an image is missing.
std::vector<std::size_t> inversion_partners(const ContourSystem& cs);

struct InversionReport {
  bool symmetric_off_circle = true;
  double symmetry_defect = 0.0;        // max |v#(z) - v(z)| / max(1, |v(z)|) off S^1
  double min_re_eig_on_circle = 0.0;   // min over S^1 nodes of lambda_min((v + v*)/2)
  double hermitian_defect = 0.0;       // max |v - v*| on S^1
};

InversionReport check_inversion_hypotheses(const JumpFunction& v, const ContourSystem& cs,
                                           double tol = 1e-12);
InversionReport check_inversion_hypotheses(const JumpData& v, const ContourSystem& cs,
                                           double tol = 1e-12);

}  // namespace rhc
