#include <cmath>

#include "rhc/errors.hpp"
#include "rhc/factorize.hpp"
#include "rhc/idnls.hpp"
#include "rhc/rhp.hpp"
#include "support.hpp"

using namespace rhc;
using test::max_diff;
using test::scalar;
using test::unit;

namespace {

JumpFunction scalar_jump(ScalarFunction f) {
  return [f](std::size_t, Complex z) { return scalar(f(z)); };
}

JumpFunction rational(Complex a, Complex b) {
  return scalar_jump([a, b](Complex z) { return (z - a) / (z - b); });
}

RHSolution solve_scalar(const ContourPtr& cs, const JumpFunction& v, Side side = Side::plus,
                        const SolverOptions& opts = {}) {
  const CauchyProjectors proj = build_projectors(cs);
  return solve(RHProblem::from_jump(JumpData::sample(cs, v), side, scalar(1.0)), proj, opts);
}

IndexReport winding_index(int kappa, int nodes = 64) {
  const ContourPtr cs = build_contour({unit(Orientation::counterclockwise, nodes)});
  const CauchyProjectors proj = build_projectors(cs);
  const JumpData v = JumpData::sample(cs, scalar_jump([kappa](Complex z) { return std::pow(z, kappa); }));
  return index_diagnostics(RHProblem::from_jump(v, Side::plus, scalar(1.0)), proj);
}

Matrix defocusing_jump_at(Complex z) {
  return defocusing_matrix([](Complex w) { return 0.3 * w; }, 0, z);
}

}  // namespace

TEST_CASE("trivial splittings") {
  const ContourPtr cs = build_contour({unit(Orientation::counterclockwise, 8)});
  const JumpData id = JumpData::sample(cs, [](std::size_t, Complex) { return Matrix(Matrix::Identity(2, 2)); });
  const FactorizationData s = trivial_splitting(id, Side::plus);
  CHECK(s.w_plus.max_norm() == 0.0);
  CHECK(s.w_minus.max_norm() == 0.0);

  Matrix d = Matrix::Identity(2, 2);
  d(0, 0) = 2.0;
  const JumpData dv = JumpData::sample(cs, [d](std::size_t, Complex) { return d; });
  const FactorizationData m = trivial_splitting(dv, Side::minus);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  CHECK(max_diff(m.w_minus[0], expected) < 1e-15);
  CHECK(max_diff(m.b_minus()[3], Matrix(Matrix::Identity(2, 2) - expected)) < 1e-15);
}

TEST_CASE("property: (b-)^-1 b+ reproduces v for both splittings") {
  test::Gen gen(3);
  const ContourPtr cs = build_contour({unit(Orientation::clockwise, 16)});
  for (int trial = 0; trial < 20; ++trial) {
    Matrix base = Matrix::Random(3, 3) * 0.3;
    base += Matrix::Identity(3, 3);
    const Complex shift = gen.complex_unit_disk(0.3);
    const JumpFunction f = [base, shift](std::size_t, Complex z) {
      Matrix m = base;
      m(0, 1) += shift * z;
      return m;
    };
    const JumpData v = JumpData::sample(cs, f);
    for (Side side : {Side::plus, Side::minus}) {
      const FactorizationData s = trivial_splitting(v, side);
      const GridFunction back = s.b_minus().inverse() * s.b_plus();
      for (std::size_t k = 0; k < v.v.size(); ++k)
        CHECK(max_diff(back[k], v.v[k]) <= 1e-12 * std::max(1.0, v.v[k].norm()));
    }
  }
}

TEST_CASE("singular jumps are rejected") {
  const ContourPtr cs = build_contour({unit(Orientation::counterclockwise, 8)});
  CHECK_THROWS_AS(JumpData::sample(cs, scalar_jump([](Complex z) { return z - 1.0; })), SingularJumpError);
  CHECK_THROWS_AS(JumpData::sample(cs, scalar_jump([](Complex) { return Complex(1e-12); })), SingularJumpError);
}

TEST_CASE("zero factorization data gives the identity operator") {
  const ContourPtr cs = build_contour({unit(Orientation::counterclockwise, 8)});
  const CauchyProjectors proj = build_projectors(cs);
  const JumpData id = JumpData::sample(cs, [](std::size_t, Complex) { return Matrix(Matrix::Identity(2, 2)); });
  const Eigen::MatrixXcd a = assemble_operator(RHProblem::from_jump(id, Side::plus, Matrix::Identity(2, 2)), proj);
  CHECK(a.rows() == 32);
  CHECK((a - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity jump gives mu = h and m = h") {
  const ContourPtr cs = build_contour({unit()});
  Matrix h(2, 2);
  h << 1.0, 2.0, Complex(0.0, 1.0), 3.0;
  const JumpData id = JumpData::sample(cs, [](std::size_t, Complex) { return Matrix(Matrix::Identity(2, 2)); });
  const RHSolution sol = solve(RHProblem::from_jump(id, Side::plus, h), build_projectors(cs));
  CHECK((sol.mu - GridFunction::constant(cs, h)).max_norm() < 1e-14);
  CHECK(sol.residual_jump < 1e-14);
  CHECK(max_diff(evaluate_m(sol, 0.3), h) < 1e-14);
  CHECK(max_diff(evaluate_m(sol, 5.0), h) < 1e-14);
}

TEST_CASE("constant jump 2 with plus splitting gives mu = h") {
  const ContourPtr cs = build_contour({unit()});
  const RHSolution sol = solve_scalar(cs, scalar_jump([](Complex) { return Complex(2.0); }));
  CHECK((sol.mu - GridFunction::constant(cs, scalar(1.0))).max_norm() < 1e-13);
  // m = 2 inside, 1 outside
  CHECK(std::abs(evaluate_m(sol, 0.2)(0, 0) - 2.0) < 1e-13);
  CHECK(std::abs(evaluate_m(sol, 3.0)(0, 0) - 1.0) < 1e-13);
}

TEST_CASE("an identity-jump circle contributes identity columns") {
  const Circle s1 = unit(Orientation::counterclockwise, 32);
  const Circle extra{Complex(3.0, 0.0), 0.5, Orientation::counterclockwise, 16};
  const ContourPtr small = build_contour({s1});
  const ContourPtr big = build_contour({s1, extra});
  const auto f = [](std::size_t i, Complex z) { return scalar(i == 0 ? (z - 1.6) / (z - 2.5) : Complex(1.0)); };
  const RHProblem ps = RHProblem::from_jump(JumpData::sample(small, f), Side::plus, scalar(1.0));
  const RHProblem pb = RHProblem::from_jump(JumpData::sample(big, f), Side::plus, scalar(1.0));
  const Eigen::MatrixXcd as = assemble_operator(ps, build_projectors(small));
  const Eigen::MatrixXcd ab = assemble_operator(pb, build_projectors(big));
  CHECK((ab.topLeftCorner(32, 32) - as).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((ab.rightCols(16) - Eigen::MatrixXcd::Identity(48, 48).rightCols(16)).cwiseAbs().maxCoeff() == 0.0);

  const RHSolution ss = solve(ps, build_projectors(small));
  const RHSolution sb = solve(pb, build_projectors(big));
  for (std::size_t k = 0; k < 32; ++k) CHECK(max_diff(ss.mu[k], sb.mu[k]) < 1e-13);
  CHECK(max_diff(evaluate_m(ss, 0.1), evaluate_m(sb, 0.1)) < 1e-13);
}

TEST_CASE("rational jump with winding zero matches its closed form") {
  const Complex a = 1.6, b = 2.5;
  const ContourPtr cs = build_contour({unit(Orientation::counterclockwise, 128)});
  const RHSolution sol = solve_scalar(cs, rational(a, b));
  CHECK(std::abs(evaluate_m(sol, 0.0)(0, 0) - 0.64) < 1e-10);
  test::Gen gen(7);
  for (int k = 0; k < 100; ++k) {
    Complex z = gen.complex_in_box(3.0);
    if (std::abs(std::abs(z) - 1.0) < 0.05 || std::abs(z - b) < 0.05) continue;
    const Complex want = std::abs(z) < 1.0 ? (z - a) / (z - b) : Complex(1.0);
    CHECK(std::abs(evaluate_m(sol, z)(0, 0) - want) < 1e-10);
  }
  for (std::size_t k = 0; k < cs->total_nodes(); ++k) {
    const Complex z = cs->node_point(k);
    CHECK(std::abs(sol.m_plus[k](0, 0) - (z - a) / (z - b)) < 1e-10);
    CHECK(std::abs(sol.m_minus[k](0, 0) - 1.0) < 1e-10);
  }
  CHECK(sol.residual_jump < 1e-12);
}

TEST_CASE("rational jump with winding one has a one-dimensional kernel") {
  const ContourPtr cs = build_contour({unit(Orientation::counterclockwise, 128)});
  CHECK_THROWS_AS(solve_scalar(cs, rational(0.4, 2.5)), NearSingularOperatorError);
  const CauchyProjectors proj = build_projectors(cs);
  const IndexReport rep =
      index_diagnostics(RHProblem::from_jump(JumpData::sample(cs, rational(0.4, 2.5)), Side::plus, scalar(1.0)), proj);
  CHECK(rep.dim_ker == 1);
  CHECK(rep.dim_coker == 0);
}

TEST_CASE("defocusing model problem is uniquely solvable") {
  const ContourPtr cs = build_contour({unit(Orientation::clockwise, 128)});
  const JumpFunction f = [](std::size_t, Complex z) { return defocusing_jump_at(z); };
  const RHSolution sol =
      solve(RHProblem::from_jump(JumpData::sample(cs, f), Side::plus, Matrix::Identity(2, 2)), build_projectors(cs));
  CHECK(sol.residual_jump <= 1e-8);
  CHECK(sol.smallest_singular_value >= 1e-6);
  CHECK(sol.spectrum.dim_ker == 0);
  CHECK(sol.spectrum.dim_coker == 0);
}

TEST_CASE("m decays to h like 1/R") {
  const ContourPtr cs = build_contour({unit(Orientation::clockwise, 64)});
  const JumpFunction f = [](std::size_t, Complex z) { return defocusing_jump_at(z); };
  const RHSolution sol =
      solve(RHProblem::from_jump(JumpData::sample(cs, f), Side::plus, Matrix::Identity(2, 2)), build_projectors(cs));
  std::vector<double> scaled;
  for (double r : {10.0, 100.0, 1000.0}) {
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      const Matrix m = evaluate_m(sol, std::polar(r, 0.3 + k * kPi / 4.0));
      worst = std::max(worst, max_diff(m, Matrix::Identity(2, 2)));
    }
    scaled.push_back(worst * r);
  }
  CHECK(scaled[0] > 0.0);
  CHECK(std::abs(scaled[1] / scaled[0] - 1.0) < 0.2);
  CHECK(std::abs(scaled[2] / scaled[1] - 1.0) < 0.02);
}

TEST_CASE("boundary values lie in the ranges of the projections") {
  const ContourPtr cs = build_contour({unit(Orientation::counterclockwise, 64)});
  const CauchyProjectors proj = build_projectors(cs);
  for (Side side : {Side::plus, Side::minus}) {
    const RHSolution sol = solve(
        RHProblem::from_jump(JumpData::sample(cs, rational(1.6, 2.5)), side, scalar(1.0)), proj);
    const RangeDefect d = range_defect(sol, proj);
    CHECK(d.plus <= 10.0 * sol.backward_error * static_cast<double>(cs->total_nodes()));
    CHECK(d.minus <= 10.0 * sol.backward_error * static_cast<double>(cs->total_nodes()));
  }
}

TEST_CASE("property: solution does not depend on the splitting") {
  test::Gen gen(41);
  for (int trial = 0; trial < 6; ++trial) {
    const Complex a = std::polar(gen.uniform(1.3, 2.0), gen.uniform(0.0, 2.0 * kPi));
    const Complex c = gen.complex_unit_disk(0.3);
    const Orientation o = gen.coin() ? Orientation::counterclockwise : Orientation::clockwise;
    const ContourPtr cs = build_contour({unit(o, 64)});
    // zero and pole both outside the circle: determinant has winding zero
    const JumpFunction f = [a, c](std::size_t, Complex z) {
      Matrix m(2, 2);
      m << (z - a) / (z - 1.1 * a), c * z, 0.0, 1.0;
      return m;
    };
    const CauchyProjectors proj = build_projectors(cs);
    const JumpData v = JumpData::sample(cs, f);
    const RHSolution sp = solve(RHProblem::from_jump(v, Side::plus, Matrix::Identity(2, 2)), proj);
    const RHSolution sm = solve(RHProblem::from_jump(v, Side::minus, Matrix::Identity(2, 2)), proj);
    CHECK((sp.m_plus - sm.m_plus).max_norm() <= 1e-8);
    CHECK((sp.m_minus - sm.m_minus).max_norm() <= 1e-8);
    const Complex probe = gen.complex_unit_disk(0.5);
    CHECK(max_diff(evaluate_m(sp, probe), evaluate_m(sm, probe)) <= 1e-8);
  }
}

TEST_CASE("residual converges geometrically under node doubling") {
  double prev = -1.0;
  for (int n : {16, 32, 64}) {
    const ContourPtr cs = build_contour({unit(Orientation::clockwise, n)});
    const JumpFunction f = [](std::size_t, Complex z) { return defocusing_jump_at(z); };
    const RHSolution sol = solve(RHProblem::from_jump(JumpData::sample(cs, f), Side::plus, Matrix::Identity(2, 2)),
                                 build_projectors(cs));
    if (prev > 1e-11) CHECK(sol.residual_jump <= prev / 10.0);
    prev = sol.residual_jump;
  }
}

TEST_CASE("winding jumps z^k give kernel and cokernel of the expected size") {
  for (int kappa = -2; kappa <= 2; ++kappa) {
    const IndexReport rep = winding_index(kappa);
    CHECK(rep.dim_ker == std::max(kappa, 0));
    CHECK(rep.dim_coker == std::max(-kappa, 0));
    if (rep.separation_decades) CHECK(*rep.separation_decades >= 2.0);
  }
}

TEST_CASE("duality: cokernel of v matches kernel of v sharp") {
  const Circle c = unit(Orientation::counterclockwise, 64);
  const ContourPtr cs = build_contour({c});
  const ContourPtr inv = build_contour({invert_circle(c)});
  for (int kappa : {-2, -1, 1, 2}) {
    const MatrixFunction v = [kappa](Complex z) { return scalar(std::pow(z, kappa) * std::exp(0.2 * z)); };
    const MatrixFunction vs = sharp(v);
    const IndexReport a = index_diagnostics(
        RHProblem::from_jump(JumpData::sample(cs, [v](std::size_t, Complex z) { return v(z); }), Side::plus,
                             scalar(1.0)),
        build_projectors(cs));
    const IndexReport b = index_diagnostics(
        RHProblem::from_jump(JumpData::sample(inv, [vs](std::size_t, Complex z) { return vs(z); }), Side::plus,
                             scalar(1.0)),
        build_projectors(inv));
    CHECK(a.dim_coker == b.dim_ker);
    CHECK(a.dim_ker == b.dim_coker);
  }
}

TEST_CASE("rank tolerance inside the singular value gap is refused") {
  const ContourPtr cs = build_contour({unit(Orientation::counterclockwise, 64)});
  const CauchyProjectors proj = build_projectors(cs);
  const RHProblem p =
      RHProblem::from_jump(JumpData::sample(cs, rational(1.6, 2.5)), Side::plus, scalar(1.0));
  const IndexReport rep = index_diagnostics(p, proj);
  SolverOptions opts;
  opts.rank_tol = rep.smallest_singular_value * 2.0;
  CHECK_THROWS_AS(index_diagnostics(p, proj, opts), RankAmbiguityError);
}

TEST_CASE("inversion hypothesis checks") {
  const ContourPtr s1 = build_contour({unit(Orientation::clockwise, 64)});
  const JumpFunction id = [](std::size_t, Complex) { return Matrix(Matrix::Identity(2, 2)); };
  InversionReport r = check_inversion_hypotheses(id, *s1);
  CHECK(r.symmetric_off_circle);
  CHECK(std::abs(r.min_re_eig_on_circle - 1.0) < 1e-15);

  const JumpFunction foc = [](std::size_t, Complex z) {
    return focusing_matrix([](Complex w) { return 0.5 * w * w * w; }, 1, z);
  };
  r = check_inversion_hypotheses(foc, *s1);
  // lambda_min of a Hermitian 2x2 with det 1 and trace 2 + |r|^2, |r| = 0.5 on S^1
  const double t = 2.25;
  CHECK(std::abs(r.min_re_eig_on_circle - (t - std::sqrt(t * t - 4.0)) / 2.0) < 1e-12);
  CHECK(r.hermitian_defect < 1e-15);

  const JumpFunction def = [](std::size_t, Complex z) { return defocusing_jump_at(z); };
  r = check_inversion_hypotheses(def, *s1);
  CHECK(std::abs(r.min_re_eig_on_circle - 0.91) < 1e-12);

  // A circle without its mirror image is refused.
  const ContourPtr lone = build_contour({unit(Orientation::clockwise, 32),
                                         Circle{Complex(3.0, 0.0), 0.5, Orientation::clockwise, 16}});
  CHECK_THROWS_AS(check_inversion_hypotheses(id, *lone), NotInversionInvariantContourError);

  // v = v# fails off S^1 for a non-symmetric pair.
  const Circle c{Complex(3.0, 0.0), 0.5, Orientation::clockwise, 16};
  const ContourPtr pair = build_contour({unit(Orientation::clockwise, 32), c, invert_circle(c)});
  const JumpFunction lower = [](std::size_t i, Complex z) {
    Matrix m = Matrix::Identity(2, 2);
    if (i > 0) m(1, 0) = 1.0 / (z - 3.0 + (i == 2 ? 3.0 : 0.0));
    return m;
  };
  r = check_inversion_hypotheses(lower, *pair);
  CHECK_FALSE(r.symmetric_off_circle);
}
