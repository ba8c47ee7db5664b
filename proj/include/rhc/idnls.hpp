#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rhc/cauchy.hpp"
#include "rhc/contour.hpp"
#include "rhc/rhp.hpp"
#include "rhc/types.hpp"

namespace rhc {

enum class IdnlsSign { focusing, defocusing };

struct Pole {
  Complex z;  // |z| > 1
  Complex c;  // norming constant
};

struct IdnlsSpec {
  ScalarFunction r = [](Complex) { return Complex(0.0); };
  int n = 0;
  std::vector<Pole> poles;
  IdnlsSign sign = IdnlsSign::focusing;
  // Optional check that poles come in quartets {+-z_j, +-1/conj(z_j)} and r(-z) = -r(z).
  bool strict_scattering_symmetry = false;
  int unit_nodes = 128;
  int pole_nodes = 64;
  // Per-pole radius overrides for C[z_j]; empty means the default policy.
  std::vector<double> radii;
};

/// Throws InvalidArgumentError for poles inside the closed unit disk or repeated poles,
/// HypothesisViolationError when strict_scattering_symmetry is requested and fails.
void validate(const IdnlsSpec& spec);

Matrix defocusing_matrix(const ScalarFunction& r, int n, Complex z);
Matrix focusing_matrix(const ScalarFunction& r, int n, Complex z);

/// The defocusing matrix sampled on clockwise S^1. Throws ReflectionTooLargeError if
/// sup |r| >= 1 on the nodes.
JumpData build_defocusing_jump(const IdnlsSpec& spec);
/// The focusing matrix V sampled on clockwise S^1.
JumpData build_focusing_jump(const IdnlsSpec& spec);

enum class CircleRole { unit, pole, inverted_pole, outer, inner };
const char* to_string(CircleRole role);

struct CircleProvenance {
  CircleRole role;
  std::size_t pole = 0;  // for pole / inverted_pole
};

/// Pole-free problem on S^1 (cw) u C[z_j] (cw) u C[z_j]# (ccw), optionally conjugated
/// with C_R, C_{1/R} (ccw).
struct AugmentedProblem {
  IdnlsSpec spec;
  ContourPtr system;
  JumpFunction jump;
  std::vector<CircleProvenance> provenance;
  std::vector<double> pole_radii;
  bool conjugated = false;
  double outer_radius = 0.0;  // R, when conjugated

  // q_j = z_j^{-2n} c_j and p_j = conj(z_j)^{-2n-2} conj(c_j).
  Complex q(std::size_t j) const;
  Complex p(std::size_t j) const;

  /// Right factor X(z) with m = m' X(z) (identity unless conjugated).
  Matrix unconjugate_factor(Complex z) const;
  /// M from the sectionally holomorphic solution: undoes conjugation and pole removal.
  Matrix recover(const RHSolution& sol, Complex z, double margin = 0.5) const;
};

/// Default radius policy: rho_j = 0.5 min(|z_j| - 1, min_{k != j} |z_j - z_k| / 2,
/// min_k |z_j - 1/conj(z_k)|). Throws CirclePackingError when no valid radii exist.
std::vector<double> default_pole_radii(const std::vector<Pole>& poles);

AugmentedProblem remove_poles(const IdnlsSpec& spec);

/// Conjugation by A, B_j, C. R defaults to 2 max |z_j| (2 when there are no poles).
/// Throws RadiusConflictError when R <= max |z_j| or C_R, C_{1/R} meet another circle.
AugmentedProblem conjugate(const AugmentedProblem& ap, std::optional<double> R = std::nullopt);

RHProblem to_rhp(const AugmentedProblem& ap, double det_floor = 1e-10);

/// Maximum defect of the residue conditions at z_j and 1/conj(z_j), measured by a
/// trapezoid contour integral of the recovered M on a circle of half the pole radius.
double residue_defect(const AugmentedProblem& ap, const RHSolution& sol, int quadrature_nodes = 64);

/// Exact M for r = 0 from the partial-fraction ansatz
/// M = I + sum_j alpha_j / (z - z_j) + beta_j / (z - 1/conj(z_j)).
class SolitonOracle {
 public:
  explicit SolitonOracle(const IdnlsSpec& spec);

  Matrix evaluate(Complex z) const;
  // First column of alpha_j, second column of beta_j.
  const std::vector<Eigen::Vector2cd>& alpha() const { return alpha_; }
  const std::vector<Eigen::Vector2cd>& beta() const { return beta_; }

 private:
  std::vector<Complex> z_;
  std::vector<Complex> zeta_;
  std::vector<Eigen::Vector2cd> alpha_;
  std::vector<Eigen::Vector2cd> beta_;
};

SolitonOracle soliton_oracle(const IdnlsSpec& spec);

}  // namespace rhc
