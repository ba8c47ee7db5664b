#include "rhc/factorize.hpp"

#include <cmath>
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

void require_scalar_single(const GridFunction& v) {
  if (v.dim() != 1) throw InvalidArgumentError("scalar factorization needs a 1 x 1 grid function");
  if (v.system()->circle_count() != 1)
    throw InvalidArgumentError("scalar factorization is defined on a single circle");
}

void require_side(const ContourSystem& cs, std::optional<Complex> z, Side side, const char* name) {
  const Side actual = z ? cs.side_of(*z) : cs.unbounded_side();
  if (actual != side) {
    std::ostringstream msg;
    msg << name << " does not lie in Omega_" << to_string(side);
    throw InvalidArgumentError(msg.str());
  }
}

}  // namespace

int winding_number(const Circle& c, const Vector& samples) {
  const int n = c.node_count;
  if (samples.size() != n) throw AlignmentError("winding_number: sample count differs from node count");
  for (int k = 0; k < n; ++k)
    if (std::abs(samples(k)) == 0.0) throw SingularJumpError("winding_number: symbol vanishes at a node");

  // Phase unwrapping with a resolution guard.
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double step = std::arg(samples((k + 1) % n) / samples(k));
    if (std::abs(step) >= kPi / 2.0)
      throw WindingAmbiguityError("winding_number: phase step of " + std::to_string(step) +
                                  " rad between nodes; symbol is under-resolved");
    total += step;
  }
  const double unwrapped = total / (2.0 * kPi);

  // Argument principle with spectral differentiation in the node angle.
  const Vector a = fourier_coefficients(samples);
  Vector da(n);
  for (int j = 0; j < n; ++j) da(j) = j == n / 2 ? Complex(0.0) : kI * static_cast<double>(fourier_mode(j, n)) * a(j);
  const Vector deriv = static_cast<double>(n) * dft_matrix(n).adjoint() * da;
  Complex sum = 0.0;
  for (int k = 0; k < n; ++k) sum += deriv(k) / samples(k);
  const double spectral = (sum / (kI * static_cast<double>(n))).real();

  const double rounded = std::round(spectral);
  if (std::abs(spectral - rounded) > 0.1 || std::abs(spectral - unwrapped) > 0.1) {
    std::ostringstream msg;
    msg << "winding_number: argument integral " << spectral << " (unwrapped " << unwrapped
        << ") is not clearly an integer";
    throw WindingAmbiguityError(msg.str());
  }
  return static_cast<int>(rounded) * static_cast<int>(c.orientation_sign());
}

int winding_number(const GridFunction& v, std::size_t circle) {
  if (v.dim() != 1) throw InvalidArgumentError("winding_number needs a scalar grid function");
  const ContourSystem& cs = *v.system();
  const Circle& c = cs.circle(circle);
  Vector s(c.node_count);
  for (int k = 0; k < c.node_count; ++k) s(k) = v[cs.offset(circle) + static_cast<std::size_t>(k)](0, 0);
  return winding_number(c, s);
}

Complex theta_factor(Complex z, int k, std::optional<Complex> z_plus, std::optional<Complex> z_minus) {
  Complex base = 1.0;
  if (z_plus) base *= z - *z_plus;
  if (z_minus) base /= z - *z_minus;
  return ipow(base, k);
}

Matrix theta(Complex z, const std::vector<int>& indices, std::optional<Complex> z_plus,
             std::optional<Complex> z_minus) {
  const auto n = static_cast<Eigen::Index>(indices.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) out(j, j) = theta_factor(z, indices[static_cast<std::size_t>(j)], z_plus, z_minus);
  return out;
}

Matrix theta_sharp(Complex z, const std::vector<int>& indices, Complex z_plus, Complex z_minus) {
  if (z_plus == 0.0 || z_minus == 0.0) throw InvalidArgumentError("theta_sharp needs nonzero z_plus and z_minus");
  const auto n = static_cast<Eigen::Index>(indices.size());
  const Complex base = std::conj(z_plus) / std::conj(z_minus) * (z - invert_point(z_plus)) / (z - invert_point(z_minus));
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) out(j, j) = ipow(base, indices[static_cast<std::size_t>(j)]);
  return out;
}

MatrixFunction sharp(MatrixFunction f) {
  return [f = std::move(f)](Complex z) -> Matrix { return f(invert_point(z)).adjoint(); };
}

Complex ScalarFactorization::evaluate(Complex z, double margin) const {
  return std::exp(transform->evaluate(z, margin)(0, 0));
}

ScalarFactorization scalar_factorize(const GridFunction& v, const CauchyProjectors& proj) {
  require_scalar_single(v);
  const ContourSystem& cs = *v.system();
  const Circle& c = cs.circle(0);
  std::optional<Complex> bounded = c.center;
  std::optional<Complex> unbounded;
  return cs.unbounded_side() == Side::minus ? scalar_factorize(v, proj, bounded, unbounded)
                                            : scalar_factorize(v, proj, unbounded, bounded);
}

ScalarFactorization scalar_factorize(const GridFunction& v, const CauchyProjectors& proj,
                                     std::optional<Complex> z_plus, std::optional<Complex> z_minus) {
  require_scalar_single(v);
  require_aligned(v, proj.system);
  const ContourPtr& sys = v.system();
  const ContourSystem& cs = *sys;
  const Circle& c = cs.circle(0);
  require_side(cs, z_plus, Side::plus, "z_plus");
  require_side(cs, z_minus, Side::minus, "z_minus");

  ScalarFactorization out;
  out.index = winding_number(v, 0);
  out.z_plus = z_plus;
  out.z_minus = z_minus;
  if (c.node_count < 8 * std::abs(out.index) + 32)
    throw WindingAmbiguityError("scalar_factorize needs at least 8|kappa| + 32 nodes");

  const int n = c.node_count;
  std::vector<Matrix> th(static_cast<std::size_t>(n), Matrix(1, 1));
  std::vector<Complex> q(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    th[kk](0, 0) = theta_factor(c.node(k), out.index, z_plus, z_minus);
    q[kk] = v[kk](0, 0) / th[kk](0, 0);
  }

  std::vector<Matrix> g(static_cast<std::size_t>(n), Matrix(1, 1));
  Complex acc = std::log(q[0]);
  g[0](0, 0) = acc;
  for (std::size_t k = 1; k < q.size(); ++k) {
    acc += std::log(q[k] / q[k - 1]);
    g[k](0, 0) = acc;
  }
  const Complex closure = acc + std::log(q[0] / q.back()) - g[0](0, 0);
  if (std::abs(closure) > 1e-6)
    throw WindingAmbiguityError("scalar_factorize: log(v / theta) is not single valued on the circle");

  out.theta = GridFunction(sys, std::move(th));
  out.log_part = GridFunction(sys, std::move(g));
  const GridFunction gp = apply_plus(proj, out.log_part);
  const GridFunction gm = apply_minus(proj, out.log_part);
  std::vector<Matrix> mp(static_cast<std::size_t>(n), Matrix(1, 1));
  std::vector<Matrix> mm(static_cast<std::size_t>(n), Matrix(1, 1));
  double res = 0.0;
  for (std::size_t k = 0; k < mp.size(); ++k) {
    mp[k](0, 0) = std::exp(gp[k](0, 0));
    mm[k](0, 0) = std::exp(gm[k](0, 0));
    const Complex rebuilt = out.theta[k](0, 0) * mp[k](0, 0) / mm[k](0, 0);
    res = std::max(res, std::abs(v[k](0, 0) - rebuilt) / std::abs(v[k](0, 0)));
  }
  out.m_plus = GridFunction(sys, std::move(mp));
  out.m_minus = GridFunction(sys, std::move(mm));
  out.identity_residual = res;
  out.transform = std::make_shared<const CauchyTransform>(out.log_part);
  return out;
}

HermitianFactorization hermitian_factorize(const JumpData& v, const CauchyProjectors& proj,
                                           const HermitianOptions& opts) {
  require_aligned(v.v, proj.system);
  const ContourSystem& cs = *v.v.system();
  HermitianFactorization out;
  out.hypotheses = check_inversion_hypotheses(v, cs, opts.symmetry_tol);
  if (!out.hypotheses.symmetric_off_circle) {
    std::ostringstream msg;
    msg << "v differs from v# off the unit circle (defect " << out.hypotheses.symmetry_defect << ")";
    throw HypothesisViolationError(msg.str());
  }
  if (out.hypotheses.hermitian_defect > opts.symmetry_tol) {
    std::ostringstream msg;
    msg << "v is not Hermitian on the unit circle (defect " << out.hypotheses.hermitian_defect << ")";
    throw HypothesisViolationError(msg.str());
  }
  if (!(out.hypotheses.min_re_eig_on_circle > 0.0)) {
    std::ostringstream msg;
    msg << "v is not positive definite on the unit circle (min eigenvalue " << out.hypotheses.min_re_eig_on_circle
        << ")";
    throw HypothesisViolationError(msg.str());
  }

  const Eigen::Index n = v.v.dim();
  const Matrix id = Matrix::Identity(n, n);
  const RHProblem p = RHProblem::from_jump(v, Side::plus, id, opts.solver.det_floor);
  out.solution = solve(p, proj, opts.solver);
  const RHSolution& sol = out.solution;
  const std::vector<std::size_t> partners = inversion_partners(cs);

  const std::size_t total = cs.total_nodes();
  std::vector<Matrix> n_plus_sharp(total);
  std::vector<Matrix> c_values(total);
  Matrix mean = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < cs.circle_count(); ++i) {
    const Circle& c = cs.circle(i);
    for (int k = 0; k < c.node_count; ++k) {
      const std::size_t g = cs.offset(i) + static_cast<std::size_t>(k);
      n_plus_sharp[g] = boundary_m(sol, partners[i], invert_point(c.node(k)), Side::plus).adjoint();
      const Matrix n_minus = sol.m_minus[g].inverse();
      c_values[g] = n_plus_sharp[g].inverse() * n_minus;
      mean += c_values[g];
    }
  }
  mean /= static_cast<double>(total);
  double sq = 0.0;
  for (const auto& cv : c_values) {
    const double d = (cv - mean).norm();
    out.c_deviation = std::max(out.c_deviation, d);
    sq += d * d;
  }
  out.c_stddev = std::sqrt(sq / static_cast<double>(total));
  if (out.c_deviation > opts.constancy_tol) {
    std::ostringstream msg;
    msg << "C(z) = (n+#)^{-1} n- varies along the contour by " << out.c_deviation;
    throw NonConstantCError(msg.str(), out.c_deviation);
  }

  const double scale = std::max(1.0, mean.norm());
  if ((mean - mean.adjoint()).norm() > opts.constancy_tol * scale)
    throw NonPositiveCError("the constant C is not Hermitian");
  const Matrix herm = 0.5 * (mean + mean.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw NonPositiveCError("the constant C is not positive definite");
  out.constant_C = herm;
  out.sqrt_R = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  out.w_plus = out.sqrt_R * sol.m_plus;

  for (std::size_t g = 0; g < total; ++g) {
    const Matrix product = (n_plus_sharp[g] * out.sqrt_R) * out.w_plus[g];
    out.product_residual = std::max(out.product_residual, (v.v[g] - product).norm());
  }
  return out;
}

}  // namespace rhc
