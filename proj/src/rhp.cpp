#include "rhc/rhp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rhc/errors.hpp"

namespace rhc {

namespace {

double frobenius(const Matrix& m) { return m.norm(); }

GridFunction identity_plus(const GridFunction& w, double sign) {
  std::vector<Matrix> out;
  out.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    out.push_back(Matrix::Identity(w.dim(), w.dim()) + sign * w[k]);
  return GridFunction(w.system(), std::move(out));
}

void check_det(const GridFunction& f, double floor, const char* what) {
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double d = std::abs(f[k].determinant());
    if (!(d >= floor)) {
      std::ostringstream msg;
      msg << what << " is singular at node " << k << " (|det| = " << d << ")";
      throw SingularJumpError(msg.str());
    }
  }
}

// Orthogonal projection onto Fourier modes |m| <= cut * N_i, per circle and component,
// applied to the columns of q (row operator ordering k n + c).
Eigen::MatrixXcd lowpass(const ContourSystem& cs, Eigen::Index n, double cut, const Eigen::MatrixXcd& q) {
  Eigen::MatrixXcd out(q.rows(), q.cols());
  for (std::size_t i = 0; i < cs.circle_count(); ++i) {
    const int nodes = cs.circle(i).node_count;
    const Eigen::MatrixXcd f = dft_matrix(nodes);
    Eigen::VectorXd mask(nodes);
    for (int j = 0; j < nodes; ++j)
      mask(j) = std::abs(fourier_mode(j, nodes)) <= cut * nodes && j != nodes / 2 ? 1.0 : 0.0;
    const Eigen::MatrixXcd l = static_cast<double>(nodes) * f.adjoint() * mask.asDiagonal() * f;
    const auto off = static_cast<Eigen::Index>(cs.offset(i));
    for (Eigen::Index c = 0; c < n; ++c) {
      Eigen::MatrixXcd seg(nodes, q.cols());
      for (int k = 0; k < nodes; ++k) seg.row(k) = q.row((off + k) * n + c);
      const Eigen::MatrixXcd filtered = l * seg;
      for (int k = 0; k < nodes; ++k) out.row((off + k) * n + c) = filtered.row(k);
    }
  }
  return out;
}

// Number of directions of span(q) carrying at least half their energy in resolved
// modes; throws when some direction is neither clearly resolved nor clearly aliased.
std::size_t count_resolved(const ContourSystem& cs, Eigen::Index n, double cut, const Eigen::MatrixXcd& q,
                           const char* what) {
  if (q.cols() == 0) return 0;
  const Eigen::MatrixXcd y = lowpass(cs, n, cut, q);
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(y).singularValues();
  std::size_t resolved = 0;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const double frac = s(j) * s(j);
    if (frac > 0.1 && frac < 0.9) {
      std::ostringstream msg;
      msg << "ambiguous " << what << " direction: resolved-mode energy fraction " << frac;
      throw RankAmbiguityError(msg.str());
    }
    if (frac >= 0.5) ++resolved;
  }
  return resolved;
}

struct Analysis {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd;
  IndexReport report;
  Eigen::Index retained = 0;
};

Analysis analyze(const Eigen::MatrixXcd& a, const ContourSystem& cs, Eigen::Index n, const SolverOptions& opts) {
  Analysis out;
  out.svd.compute(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = out.svd.singularValues();
  const Eigen::Index size = s.size();
  const double tau = opts.rank_tol;

  Eigen::Index retained = 0;
  while (retained < size && s(retained) >= tau) ++retained;
  out.retained = retained;

  for (Eigen::Index j = 0; j < size; ++j) {
    if (s(j) >= tau / 10.0 && s(j) <= tau * 10.0) {
      std::ostringstream msg;
      msg << "singular value " << s(j) << " lies within a decade of the rank tolerance " << tau;
      throw RankAmbiguityError(msg.str());
    }
  }

  IndexReport& r = out.report;
  r.smallest_singular_value = size > 0 ? s(size - 1) : 0.0;
  r.smallest_retained = retained > 0 ? s(retained - 1) : 0.0;
  r.discarded = static_cast<std::size_t>(size - retained);
  r.largest_discarded = retained < size ? s(retained) : 0.0;
  if (retained < size && retained > 0) {
    r.separation_decades = r.largest_discarded > 0.0 ? std::log10(r.smallest_retained / r.largest_discarded)
                                                     : std::numeric_limits<double>::infinity();
  }
  const std::size_t ker =
      count_resolved(cs, n, opts.low_mode_cut, out.svd.matrixV().rightCols(size - retained), "kernel");
  const std::size_t coker =
      count_resolved(cs, n, opts.low_mode_cut, out.svd.matrixU().rightCols(size - retained), "cokernel");
  r.dim_ker = static_cast<int>(ker) * static_cast<int>(n);
  r.dim_coker = static_cast<int>(coker) * static_cast<int>(n);
  r.deflated = r.discarded - std::max(ker, coker);
  return out;
}

Eigen::MatrixXcd truncated_solve(const Analysis& an, const Eigen::MatrixXcd& b) {
  const Eigen::Index r = an.retained;
  const Eigen::MatrixXcd& u = an.svd.matrixU();
  const Eigen::MatrixXcd& v = an.svd.matrixV();
  const Eigen::VectorXd inv = an.svd.singularValues().head(r).cwiseInverse();
  return v.leftCols(r) * (inv.asDiagonal() * (u.leftCols(r).adjoint() * b));
}

}  // namespace

JumpData JumpData::sample(const ContourPtr& system, JumpFunction f, double det_floor) {
  JumpData out{GridFunction::sample(system, f), std::move(f)};
  check_det(out.v, det_floor, "jump matrix");
  return out;
}

GridFunction FactorizationData::b_plus() const { return identity_plus(w_plus, 1.0); }
GridFunction FactorizationData::b_minus() const { return identity_plus(w_minus, -1.0); }

FactorizationData trivial_splitting(const JumpData& v, Side side, double det_floor) {
  check_det(v.v, det_floor, "jump matrix");
  const auto& sys = v.v.system();
  const Eigen::Index n = v.v.dim();
  const GridFunction id = GridFunction::identity(sys, n);
  const GridFunction zero = GridFunction::constant(sys, Matrix::Zero(n, n));
  if (side == Side::plus) return {v.v - id, zero};
  return {zero, id - v.v.inverse()};
}

RHProblem RHProblem::from_jump(const JumpData& v, Side splitting, const Matrix& h, double det_floor) {
  if (h.rows() != v.v.dim() || h.cols() != v.v.dim())
    throw InvalidArgumentError("normalization h must match the jump dimension");
  return RHProblem{v.v.system(), trivial_splitting(v, splitting, det_floor), h, v.closed_form};
}

Eigen::MatrixXcd assemble_row_operator(const RHProblem& p, const CauchyProjectors& proj) {
  require_aligned(p.data.w_plus, proj.system);
  require_aligned(p.data.w_minus, proj.system);
  const Eigen::Index n = p.data.w_plus.dim();
  const auto total = static_cast<Eigen::Index>(proj.system->total_nodes());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(total * n, total * n);
  for (Eigen::Index l = 0; l < total; ++l) {
    const Matrix wm = p.data.w_minus[static_cast<std::size_t>(l)].transpose();
    const Matrix wp = p.data.w_plus[static_cast<std::size_t>(l)].transpose();
    for (Eigen::Index k = 0; k < total; ++k) {
      a.block(k * n, l * n, n, n) -= proj.plus(k, l) * wm + proj.minus(k, l) * wp;
    }
  }
  return a;
}

Eigen::MatrixXcd assemble_operator(const RHProblem& p, const CauchyProjectors& proj) {
  const Eigen::MatrixXcd row = assemble_row_operator(p, proj);
  const Eigen::Index n = p.data.w_plus.dim();
  const Eigen::Index total = row.rows() / std::max<Eigen::Index>(n, 1);
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(total * n * n, total * n * n);
  for (Eigen::Index k = 0; k < total; ++k)
    for (Eigen::Index l = 0; l < total; ++l)
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
          for (Eigen::Index c2 = 0; c2 < n; ++c2)
            full((k * n + r) * n + c, (l * n + r) * n + c2) = row(k * n + c, l * n + c2);
  return full;
}

RHSolution solve(const RHProblem& p, const CauchyProjectors& proj, const SolverOptions& opts) {
  const Eigen::MatrixXcd a = assemble_row_operator(p, proj);
  const Eigen::Index n = p.data.w_plus.dim();
  if (p.h.rows() != n || p.h.cols() != n) throw InvalidArgumentError("normalization h must be n x n");
  const Analysis an = analyze(a, *p.system, n, opts);
  const IndexReport& rep = an.report;
  if (rep.dim_ker > 0 || rep.dim_coker > 0) {
    std::ostringstream msg;
    msg << "Id - C_w has a resolved null space (dim_ker = " << rep.dim_ker << ", dim_coker = " << rep.dim_coker
        << "); the problem has nonzero partial indices or is not uniquely solvable";
    throw NearSingularOperatorError(msg.str(), rep.smallest_singular_value);
  }
  if (an.retained == 0 || rep.smallest_retained < opts.sigma_min) {
    throw NearSingularOperatorError("smallest singular value of Id - C_w is below sigma_min",
                                    rep.smallest_retained);
  }

  const auto total = static_cast<Eigen::Index>(p.system->total_nodes());
  Eigen::MatrixXcd b(total * n, n);
  for (Eigen::Index k = 0; k < total; ++k)
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) b(k * n + c, r) = p.h(r, c);

  Eigen::MatrixXcd x = truncated_solve(an, b);
  x += truncated_solve(an, b - a * x);
  const double scale = an.svd.singularValues()(0) * x.norm() + b.norm();
  const double backward = scale > 0.0 ? (a * x - b).norm() / scale : 0.0;

  std::vector<Matrix> mu(static_cast<std::size_t>(total), Matrix(n, n));
  for (Eigen::Index k = 0; k < total; ++k)
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) mu[static_cast<std::size_t>(k)](r, c) = x(k * n + c, r);

  RHSolution sol;
  sol.system = p.system;
  sol.h = p.h;
  sol.data = p.data;
  sol.mu = GridFunction(p.system, std::move(mu));
  sol.m_plus = sol.mu * p.data.b_plus();
  sol.m_minus = sol.mu * p.data.b_minus();
  sol.smallest_singular_value = rep.smallest_retained;
  sol.backward_error = backward;
  sol.spectrum = rep;
  sol.transform = std::make_shared<const CauchyTransform>(sol.mu * (p.data.w_plus + p.data.w_minus));

  if (p.jump) {
    sol.residual_jump = jump_residual(sol, p.jump);
  } else {
    const GridFunction v = p.data.b_minus().inverse() * p.data.b_plus();
    double res = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
      res = std::max(res, frobenius(sol.m_plus[k] - sol.m_minus[k] * v[k]));
    sol.residual_jump = res;
  }
  return sol;
}

Matrix evaluate_m(const RHSolution& sol, Complex z, double margin) {
  return sol.h + sol.transform->evaluate(z, margin);
}

Matrix boundary_m(const RHSolution& sol, std::size_t circle, Complex z, Side side) {
  return sol.h + sol.transform->boundary_value(circle, z, side);
}

double jump_residual(const RHSolution& sol, const JumpFunction& v) {
  const ContourSystem& cs = *sol.system;
  double res = 0.0;
  for (std::size_t i = 0; i < cs.circle_count(); ++i) {
    const Circle& c = cs.circle(i);
    const std::size_t off = cs.offset(i);
    for (int k = 0; k < c.node_count; ++k) {
      const std::size_t g = off + static_cast<std::size_t>(k);
      res = std::max(res, frobenius(sol.m_plus[g] - sol.m_minus[g] * v(i, c.node(k))));
      const double t = 2.0 * kPi * (k + 0.5) / c.node_count;
      const Complex z = c.center + c.radius * Complex(std::cos(t), std::sin(t));
      const Matrix mp = boundary_m(sol, i, z, Side::plus);
      const Matrix mm = boundary_m(sol, i, z, Side::minus);
      res = std::max(res, frobenius(mp - mm * v(i, z)));
    }
  }
  return res;
}

RangeDefect range_defect(const RHSolution& sol, const CauchyProjectors& proj) {
  const GridFunction h = GridFunction::constant(sol.system, sol.h);
  return {apply_minus(proj, sol.m_plus - h).max_norm(), apply_plus(proj, sol.m_minus - h).max_norm()};
}

IndexReport index_diagnostics(const RHProblem& p, const CauchyProjectors& proj, const SolverOptions& opts) {
  const Eigen::MatrixXcd a = assemble_row_operator(p, proj);
  return analyze(a, *p.system, p.data.w_plus.dim(), opts).report;
}

std::vector<std::size_t> inversion_partners(const ContourSystem& cs) {
  const auto unit = cs.unit_circle();
  if (!unit) throw NotInversionInvariantContourError("contour system does not contain the unit circle");
  std::vector<std::size_t> partners(cs.circle_count());
  for (std::size_t i = 0; i < cs.circle_count(); ++i) {
    if (i == *unit) {
      partners[i] = i;
      continue;
    }
    Circle image;
    try {
      image = invert_circle(cs.circle(i));
    } catch (const SingularInversionError&) {
      throw NotInversionInvariantContourError("circle " + std::to_string(i) + " passes through the origin");
    }
    const auto j = cs.find_circle(image, 1e-9);
    if (!j) {
      throw NotInversionInvariantContourError("the inversion image of circle " + std::to_string(i) +
                                              " (with orientation) is not in the system");
    }
    partners[i] = *j;
  }
  return partners;
}

InversionReport check_inversion_hypotheses(const JumpFunction& v, const ContourSystem& cs, double tol) {
  const std::vector<std::size_t> partners = inversion_partners(cs);
  const std::size_t unit = *cs.unit_circle();
  InversionReport rep;
  rep.min_re_eig_on_circle = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cs.circle_count(); ++i) {
    const Circle& c = cs.circle(i);
    for (int k = 0; k < c.node_count; ++k) {
      const Complex z = c.node(k);
      const Matrix vz = v(i, z);
      if (i == unit) {
        const Matrix re = 0.5 * (vz + vz.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(re, Eigen::EigenvaluesOnly);
        rep.min_re_eig_on_circle = std::min(rep.min_re_eig_on_circle, es.eigenvalues().minCoeff());
        rep.hermitian_defect = std::max(rep.hermitian_defect, frobenius(vz - vz.adjoint()));
      } else {
        const Matrix sharp = v(partners[i], invert_point(z)).adjoint();
        rep.symmetry_defect = std::max(rep.symmetry_defect, frobenius(sharp - vz) / std::max(1.0, frobenius(vz)));
      }
    }
  }
  rep.symmetric_off_circle = rep.symmetry_defect <= tol;
  return rep;
}

InversionReport check_inversion_hypotheses(const JumpData& v, const ContourSystem& cs, double tol) {
  if (!v.closed_form) throw InvalidArgumentError("inversion checks need a closed-form jump");
  return check_inversion_hypotheses(v.closed_form, cs, tol);
}

}  // namespace rhc
