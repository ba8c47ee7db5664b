#include "rhc/idnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rhc/errors.hpp"

namespace rhc {

namespace {

Complex ipow(Complex z, int k) {
  Complex base = k < 0 ? 1.0 / z : z;
  unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
  Complex out = 1.0;
  while (e) {
    if (e & 1u) out *= base;
    base *= base;
    e >>= 1u;
  }
  return out;
}

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Circle unit_circle_cw(int nodes) { return Circle{Complex(0.0, 0.0), 1.0, Orientation::clockwise, nodes}; }

Complex pole_product(const std::vector<Pole>& poles, std::optional<std::size_t> skip) {
  Complex p = 1.0;
  for (std::size_t k = 0; k < poles.size(); ++k)
    if (!skip || k != *skip) p *= poles[k].z;
  return p;
}

}  // namespace

void validate(const IdnlsSpec& spec) {
  if (!spec.r) throw InvalidArgumentError("reflection coefficient r is not set");
  for (std::size_t j = 0; j < spec.poles.size(); ++j) {
    const Complex z = spec.poles[j].z;
    if (!(std::abs(z) > 1.0 + 1e-12)) throw InvalidArgumentError("pole " + std::to_string(j) + " must satisfy |z_j| > 1");
    for (std::size_t k = 0; k < j; ++k)
      if (std::abs(z - spec.poles[k].z) <= 1e-12) throw InvalidArgumentError("poles must be distinct");
  }
  if (spec.strict_scattering_symmetry) {
    for (const auto& p : spec.poles) {
      const bool paired = std::any_of(spec.poles.begin(), spec.poles.end(),
                                      [&](const Pole& q) { return std::abs(q.z + p.z) <= 1e-12; });
      if (!paired) throw HypothesisViolationError("strict scattering symmetry: -z_j is missing from the pole list");
    }
    const Circle s1 = unit_circle_cw(spec.unit_nodes);
    for (int k = 0; k < s1.node_count; ++k) {
      const Complex z = s1.node(k);
      if (std::abs(spec.r(-z) + spec.r(z)) > 1e-12)
        throw HypothesisViolationError("strict scattering symmetry: r(-z) != -r(z)");
    }
  }
}

Matrix defocusing_matrix(const ScalarFunction& r, int n, Complex z) {
  const Complex rz = r(z);
  return mat2(1.0 - std::norm(rz), -ipow(z, 2 * n) * std::conj(rz), ipow(z, -2 * n) * rz, 1.0);
}

Matrix focusing_matrix(const ScalarFunction& r, int n, Complex z) {
  const Complex rz = r(z);
  return mat2(1.0 + std::norm(rz), ipow(z, 2 * n) * std::conj(rz), ipow(z, -2 * n) * rz, 1.0);
}

JumpData build_defocusing_jump(const IdnlsSpec& spec) {
  validate(spec);
  const Circle s1 = unit_circle_cw(spec.unit_nodes);
  double sup = 0.0;
  for (int k = 0; k < s1.node_count; ++k) sup = std::max(sup, std::abs(spec.r(s1.node(k))));
  if (!(sup < 1.0)) {
    std::ostringstream msg;
    msg << "defocusing data needs sup|r| < 1 on the unit circle, got " << sup;
    throw ReflectionTooLargeError(msg.str());
  }
  ScalarFunction r = spec.r;
  const int n = spec.n;
  return JumpData::sample(build_contour({s1}),
                          [r, n](std::size_t, Complex z) { return defocusing_matrix(r, n, z); });
}

JumpData build_focusing_jump(const IdnlsSpec& spec) {
  validate(spec);
  ScalarFunction r = spec.r;
  const int n = spec.n;
  return JumpData::sample(build_contour({unit_circle_cw(spec.unit_nodes)}),
                          [r, n](std::size_t, Complex z) { return focusing_matrix(r, n, z); });
}

const char* to_string(CircleRole role) {
  switch (role) {
    case CircleRole::unit: return "unit";
    case CircleRole::pole: return "pole";
    case CircleRole::inverted_pole: return "inverted_pole";
    case CircleRole::outer: return "outer";
    case CircleRole::inner: return "inner";
  }
  return "unknown";
}

Complex AugmentedProblem::q(std::size_t j) const {
  return ipow(spec.poles[j].z, -2 * spec.n) * spec.poles[j].c;
}

Complex AugmentedProblem::p(std::size_t j) const {
  return ipow(std::conj(spec.poles[j].z), -2 * spec.n - 2) * std::conj(spec.poles[j].c);
}

std::vector<double> default_pole_radii(const std::vector<Pole>& poles) {
  std::vector<double> radii;
  for (std::size_t j = 0; j < poles.size(); ++j) {
    const Complex z = poles[j].z;
    double d = std::abs(z) - 1.0;
    for (std::size_t k = 0; k < poles.size(); ++k) {
      if (k != j) d = std::min(d, std::abs(z - poles[k].z) / 2.0);
      d = std::min(d, std::abs(z - invert_point(poles[k].z)));
    }
    const double rho = 0.5 * d;
    if (!(rho > 0.0) || !std::isfinite(rho))
      throw CirclePackingError("no admissible radius for the circle around pole " + std::to_string(j));
    radii.push_back(rho);
  }
  return radii;
}

AugmentedProblem remove_poles(const IdnlsSpec& spec) {
  validate(spec);
  AugmentedProblem ap;
  ap.spec = spec;
  if (!spec.radii.empty()) {
    if (spec.radii.size() != spec.poles.size())
      throw InvalidArgumentError("one radius per pole is required when radii are given");
    for (double r : spec.radii)
      if (!(r > 0.0)) throw CirclePackingError("pole radii must be positive");
    ap.pole_radii = spec.radii;
  } else {
    ap.pole_radii = default_pole_radii(spec.poles);
  }

  std::vector<Circle> circles{unit_circle_cw(spec.unit_nodes)};
  ap.provenance.push_back({CircleRole::unit, 0});
  for (std::size_t j = 0; j < spec.poles.size(); ++j) {
    const Circle c{spec.poles[j].z, ap.pole_radii[j], Orientation::clockwise, spec.pole_nodes};
    circles.push_back(c);
    ap.provenance.push_back({CircleRole::pole, j});
    circles.push_back(invert_circle(c));
    ap.provenance.push_back({CircleRole::inverted_pole, j});
  }
  try {
    ap.system = build_contour(std::move(circles));
  } catch (const OverlapError& e) {
    throw CirclePackingError(std::string("pole circles are not disjoint: ") + e.what());
  }

  const auto prov = ap.provenance;
  const ScalarFunction r = spec.r;
  const int n = spec.n;
  const bool focusing = spec.sign == IdnlsSign::focusing;
  std::vector<Complex> zs, qs, ps;
  for (std::size_t j = 0; j < spec.poles.size(); ++j) {
    zs.push_back(spec.poles[j].z);
    qs.push_back(ap.q(j));
    ps.push_back(ap.p(j));
  }
  ap.jump = [prov, r, n, focusing, zs, qs, ps](std::size_t i, Complex z) -> Matrix {
    const CircleProvenance& pv = prov.at(i);
    switch (pv.role) {
      case CircleRole::unit:
        return focusing ? focusing_matrix(r, n, z) : defocusing_matrix(r, n, z);
      case CircleRole::pole:
        return mat2(1.0, 0.0, qs[pv.pole] / (z - zs[pv.pole]), 1.0);
      case CircleRole::inverted_pole:
        return mat2(1.0, -ps[pv.pole] / (z - invert_point(zs[pv.pole])), 0.0, 1.0);
      default:
        throw InvalidArgumentError("unexpected circle role in pole-removed problem");
    }
  };
  return ap;
}

AugmentedProblem conjugate(const AugmentedProblem& ap, std::optional<double> R) {
  if (ap.conjugated) throw InvalidArgumentError("problem is already conjugated");
  const auto& poles = ap.spec.poles;
  double max_abs = 0.0;
  for (const auto& p : poles) max_abs = std::max(max_abs, std::abs(p.z));
  const double radius = R ? *R : (poles.empty() ? 2.0 : 2.0 * max_abs);
  if (!(radius > max_abs) || !(radius > 1.0)) {
    std::ostringstream msg;
    msg << "R = " << radius << " must exceed max|z_j| = " << max_abs << " and 1";
    throw RadiusConflictError(msg.str());
  }

  AugmentedProblem out = ap;
  out.conjugated = true;
  out.outer_radius = radius;
  std::vector<Circle> circles = ap.system->circles();
  circles.push_back(Circle{Complex(0.0, 0.0), radius, Orientation::counterclockwise, ap.spec.pole_nodes});
  out.provenance.push_back({CircleRole::outer, 0});
  circles.push_back(Circle{Complex(0.0, 0.0), 1.0 / radius, Orientation::counterclockwise, ap.spec.pole_nodes});
  out.provenance.push_back({CircleRole::inner, 0});
  try {
    out.system = build_contour(std::move(circles));
  } catch (const OverlapError& e) {
    throw RadiusConflictError(std::string("C_R or C_1/R meets another circle: ") + e.what());
  }

  const Complex P = pole_product(poles, std::nullopt);
  Complex Q = 1.0;  // prod 1/conj(z_k)
  for (const auto& p : poles) Q /= std::conj(p.z);
  std::vector<Complex> zs, lower, upper;
  const int n = ap.spec.n;
  for (std::size_t j = 0; j < poles.size(); ++j) {
    const Complex pj = pole_product(poles, j);
    zs.push_back(poles[j].z);
    lower.push_back(pj * ap.q(j));
    upper.push_back(std::conj(pj) * ipow(std::conj(poles[j].z), -2 * n - 1) * std::conj(poles[j].c));
  }
  const auto prov = out.provenance;
  const JumpFunction base = ap.jump;
  out.jump = [prov, base, P, Q, zs, lower, upper](std::size_t i, Complex z) -> Matrix {
    const CircleProvenance& pv = prov.at(i);
    switch (pv.role) {
      case CircleRole::unit:
        return mat2(1.0 / Q, 0.0, 0.0, 1.0 / z) * base(i, z) * mat2(P, 0.0, 0.0, z);
      case CircleRole::pole:
        return mat2(1.0, 0.0, lower[pv.pole] / (z - zs[pv.pole]), 1.0);
      case CircleRole::inverted_pole:
        return mat2(1.0, -z * upper[pv.pole] / (z - invert_point(zs[pv.pole])), 0.0, 1.0);
      case CircleRole::outer:
        return mat2(P, 0.0, 0.0, z);
      case CircleRole::inner:
        return mat2(1.0 / Q, 0.0, 0.0, 1.0 / z);
    }
    throw InvalidArgumentError("unexpected circle role");
  };
  return out;
}

Matrix AugmentedProblem::unconjugate_factor(Complex z) const {
  if (!conjugated) return Matrix::Identity(2, 2);
  const double a = std::abs(z);
  if (a > outer_radius || a < 1.0 / outer_radius) return Matrix::Identity(2, 2);
  const auto& poles = spec.poles;
  const Complex P = pole_product(poles, std::nullopt);
  if (a > 1.0) {
    for (std::size_t j = 0; j < poles.size(); ++j) {
      if (std::abs(z - poles[j].z) < pole_radii[j]) {
        const Matrix b = mat2(P, 0.0, -pole_product(poles, j) * q(j), z);
        return b.inverse();
      }
    }
    return mat2(1.0 / P, 0.0, 0.0, 1.0 / z);
  }
  Complex Q = 1.0;
  for (const auto& p : poles) Q /= std::conj(p.z);
  return mat2(1.0 / Q, 0.0, 0.0, 1.0 / z);
}

Matrix AugmentedProblem::recover(const RHSolution& sol, Complex z, double margin) const {
  const Matrix m = evaluate_m(sol, z, margin) * unconjugate_factor(z);
  for (std::size_t i = 0; i < provenance.size(); ++i) {
    const CircleProvenance& pv = provenance[i];
    const Circle& c = system->circle(i);
    if (!c.contains(z)) continue;
    if (pv.role == CircleRole::pole)
      return m * mat2(1.0, 0.0, q(pv.pole) / (z - spec.poles[pv.pole].z), 1.0);
    if (pv.role == CircleRole::inverted_pole)
      return m * mat2(1.0, p(pv.pole) / (z - invert_point(spec.poles[pv.pole].z)), 0.0, 1.0);
  }
  return m;
}

RHProblem to_rhp(const AugmentedProblem& ap, double det_floor) {
  const JumpData v = JumpData::sample(ap.system, ap.jump, det_floor);
  return RHProblem::from_jump(v, Side::plus, Matrix::Identity(2, 2), det_floor);
}

double residue_defect(const AugmentedProblem& ap, const RHSolution& sol, int quadrature_nodes) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ap.provenance.size(); ++i) {
    const CircleProvenance& pv = ap.provenance[i];
    if (pv.role != CircleRole::pole && pv.role != CircleRole::inverted_pole) continue;
    const Circle& c = ap.system->circle(i);
    const Complex center = pv.role == CircleRole::pole ? ap.spec.poles[pv.pole].z : invert_point(ap.spec.poles[pv.pole].z);
    const double rho = 0.5 * (c.radius - std::abs(center - c.center));
    Matrix integral = Matrix::Zero(2, 2);
    for (int k = 0; k < quadrature_nodes; ++k) {
      const double t = 2.0 * kPi * k / quadrature_nodes;
      const Complex d = rho * Complex(std::cos(t), std::sin(t));
      integral += ap.recover(sol, center + d) * d;
    }
    integral /= static_cast<double>(quadrature_nodes);
    const Matrix regular = evaluate_m(sol, center) * ap.unconjugate_factor(center);
    Matrix expected = Matrix::Zero(2, 2);
    if (pv.role == CircleRole::pole) {
      expected.col(0) = ap.q(pv.pole) * regular.col(1);
    } else {
      expected.col(1) = ap.p(pv.pole) * regular.col(0);
    }
    worst = std::max(worst, (integral - expected).norm());
  }
  return worst;
}

SolitonOracle::SolitonOracle(const IdnlsSpec& spec) {
  validate(spec);
  const Circle s1 = unit_circle_cw(spec.unit_nodes);
  for (int k = 0; k < s1.node_count; ++k)
    if (std::abs(spec.r(s1.node(k))) > 1e-14)
      throw InvalidArgumentError("the soliton oracle needs a vanishing reflection coefficient");

  const std::size_t J = spec.poles.size();
  std::vector<Complex> q(J), p(J);
  for (std::size_t j = 0; j < J; ++j) {
    z_.push_back(spec.poles[j].z);
    zeta_.push_back(invert_point(spec.poles[j].z));
    q[j] = ipow(spec.poles[j].z, -2 * spec.n) * spec.poles[j].c;
    p[j] = ipow(std::conj(spec.poles[j].z), -2 * spec.n - 2) * std::conj(spec.poles[j].c);
  }
  if (J == 0) return;

  // a_j = q_j (e2 + sum_k b_k / (z_j - zeta_k)),  b_j = p_j (e1 + sum_k a_k / (zeta_j - z_k))
  const auto dim = static_cast<Eigen::Index>(2 * J);
  Matrix sys = Matrix::Identity(dim, dim);
  Matrix rhs = Matrix::Zero(dim, 2);
  for (std::size_t j = 0; j < J; ++j) {
    const auto a = static_cast<Eigen::Index>(j);
    const auto b = static_cast<Eigen::Index>(J + j);
    for (std::size_t k = 0; k < J; ++k) {
      sys(a, static_cast<Eigen::Index>(J + k)) -= q[j] / (z_[j] - zeta_[k]);
      sys(b, static_cast<Eigen::Index>(k)) -= p[j] / (zeta_[j] - z_[k]);
    }
    rhs(a, 1) = q[j];
    rhs(b, 0) = p[j];
  }
  const Eigen::JacobiSVD<Matrix> svd(sys);
  const Eigen::VectorXd& s = svd.singularValues();
  const double rcond = s(s.size() - 1) / s(0);
  if (!(rcond >= 1e-12)) {
    std::ostringstream msg;
    msg << "soliton linear system is degenerate (reciprocal condition " << rcond << ")";
    throw DegenerateSolitonSystemError(msg.str());
  }
  const Matrix x = sys.fullPivLu().solve(rhs);
  for (std::size_t j = 0; j < J; ++j) {
    alpha_.push_back(x.row(static_cast<Eigen::Index>(j)).transpose());
    beta_.push_back(x.row(static_cast<Eigen::Index>(J + j)).transpose());
  }
}

Matrix SolitonOracle::evaluate(Complex z) const {
  Matrix m = Matrix::Identity(2, 2);
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    m.col(0) += alpha_[j] / (z - z_[j]);
    m.col(1) += beta_[j] / (z - zeta_[j]);
  }
  return m;
}

SolitonOracle soliton_oracle(const IdnlsSpec& spec) { return SolitonOracle(spec); }

}  // namespace rhc
