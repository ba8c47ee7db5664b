#include "rhc/problem.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <typeinfo>

#include "rhc/cauchy.hpp"
#include "rhc/contour.hpp"
#include "rhc/errors.hpp"
#include "rhc/expression.hpp"
#include "rhc/factorize.hpp"
#include "rhc/idnls.hpp"
#include "rhc/rhp.hpp"

namespace rhc {

using nlohmann::json;

namespace {

const std::set<std::string> kModes{"solve", "factorize-scalar", "factorize-hermitian",
                                   "check-symmetry", "index", "idnls"};
const std::set<std::string> kTolerances{"det_floor",    "sigma_min",     "rank_tol", "low_mode_cut",
                                        "symmetry_tol", "constancy_tol", "margin"};
const std::set<std::string> kTopLevel{"version", "mode",   "contour",   "constants", "functions",
                                      "jump",    "h",      "splitting", "tolerances", "factorize",
                                      "idnls",   "comment"};
const std::set<std::string> kIdnlsKeys{"r",          "n",          "poles", "sign", "conjugate", "R",
                                       "unit_nodes", "pole_nodes", "radii", "strict_scattering_symmetry"};

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw InvalidArgumentError(where + ": " + what);
}

void require(bool ok, const std::string& where, const std::string& what) {
  if (!ok) bad(where, what);
}

bool is_point(const json& j) { return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(); }

Complex to_complex(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

void validate_matrix_text(const json& j, const std::string& where) {
  if (j.is_string()) return;
  require(j.is_array() && !j.empty(), where, "expected an expression string or a square array of strings");
  for (const auto& row : j) {
    require(row.is_array() && row.size() == j.size(), where, "matrix must be square");
    for (const auto& e : row) require(e.is_string(), where, "matrix entries must be expression strings");
  }
}

void validate_contour(const json& c) {
  require(c.is_array() && !c.empty(), "contour", "expected a non-empty array of circles");
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::string w = "contour[" + std::to_string(i) + "]";
    const json& e = c[i];
    require(e.is_object(), w, "expected an object");
    for (auto it = e.begin(); it != e.end(); ++it)
      require(it.key() == "center" || it.key() == "radius" || it.key() == "orientation" || it.key() == "nodes", w,
              "unknown key '" + it.key() + "'");
    require(e.contains("center") && is_point(e["center"]), w, "center must be [re, im]");
    require(e.contains("radius") && e["radius"].is_number(), w, "radius must be a number");
    require(e.contains("orientation") && e["orientation"].is_string() &&
                (e["orientation"] == "ccw" || e["orientation"] == "cw"),
            w, "orientation must be \"ccw\" or \"cw\"");
    if (e.contains("nodes")) require(e["nodes"].is_number_integer(), w, "nodes must be an integer");
  }
}

}  // namespace

void validate_problem(const json& p) {
  require(p.is_object(), "problem", "expected a JSON object");
  for (auto it = p.begin(); it != p.end(); ++it)
    require(kTopLevel.count(it.key()) > 0, "problem", "unknown key '" + it.key() + "'");
  require(p.contains("version") && p["version"].is_number_integer() && p["version"] == kProblemVersion, "version",
          "must be 1");
  require(p.contains("mode") && p["mode"].is_string() && kModes.count(p["mode"].get<std::string>()) > 0, "mode",
          "must be one of solve, factorize-scalar, factorize-hermitian, check-symmetry, index, idnls");
  const std::string mode = p["mode"];
  if (mode != "idnls") {
    require(p.contains("contour"), "contour", "required for mode " + mode);
    require(p.contains("jump"), "jump", "required for mode " + mode);
  }
  if (p.contains("contour")) validate_contour(p["contour"]);
  if (p.contains("constants")) {
    require(p["constants"].is_object(), "constants", "expected an object");
    for (auto it = p["constants"].begin(); it != p["constants"].end(); ++it)
      require(it.value().is_number() || is_point(it.value()), "constants." + it.key(), "expected a number or [re, im]");
  }
  if (p.contains("functions")) {
    require(p["functions"].is_object(), "functions", "expected an object of expression strings");
    for (auto it = p["functions"].begin(); it != p["functions"].end(); ++it)
      require(it.value().is_string(), "functions." + it.key(), "expected an expression string");
  }
  if (p.contains("jump")) {
    const json& j = p["jump"];
    if (j.is_object()) {
      require(j.size() == 1 && j.contains("per_circle") && j["per_circle"].is_array(), "jump",
              "object form must be {\"per_circle\": [...]}");
      for (std::size_t i = 0; i < j["per_circle"].size(); ++i)
        validate_matrix_text(j["per_circle"][i], "jump.per_circle[" + std::to_string(i) + "]");
      if (p.contains("contour"))
        require(j["per_circle"].size() == p["contour"].size(), "jump.per_circle", "needs one entry per circle");
    } else {
      validate_matrix_text(j, "jump");
    }
  }
  if (p.contains("h")) validate_matrix_text(p["h"], "h");
  if (p.contains("splitting"))
    require(p["splitting"] == "plus" || p["splitting"] == "minus", "splitting", "must be \"plus\" or \"minus\"");
  if (p.contains("tolerances")) {
    require(p["tolerances"].is_object(), "tolerances", "expected an object");
    for (auto it = p["tolerances"].begin(); it != p["tolerances"].end(); ++it) {
      require(kTolerances.count(it.key()) > 0, "tolerances", "unknown tolerance '" + it.key() + "'");
      require(it.value().is_number() && it.value().get<double>() > 0.0, "tolerances." + it.key(),
              "must be a positive number");
    }
  }
  if (p.contains("factorize")) {
    const json& f = p["factorize"];
    require(f.is_object(), "factorize", "expected an object");
    for (auto it = f.begin(); it != f.end(); ++it) {
      require(it.key() == "z_plus" || it.key() == "z_minus", "factorize", "unknown key '" + it.key() + "'");
      require(it.value().is_null() || is_point(it.value()), "factorize." + it.key(), "expected [re, im] or null");
    }
  }
  if (mode == "idnls") require(p.contains("idnls"), "idnls", "required for mode idnls");
  if (p.contains("idnls")) {
    const json& d = p["idnls"];
    require(d.is_object(), "idnls", "expected an object");
    for (auto it = d.begin(); it != d.end(); ++it)
      require(kIdnlsKeys.count(it.key()) > 0, "idnls", "unknown key '" + it.key() + "'");
    require(d.contains("r") && d["r"].is_string(), "idnls.r", "expression string required");
    if (d.contains("n")) require(d["n"].is_number_integer(), "idnls.n", "must be an integer");
    if (d.contains("poles")) {
      require(d["poles"].is_array(), "idnls.poles", "expected [[re, im, c_re, c_im], ...]");
      for (const auto& q : d["poles"]) {
        require(q.is_array() && q.size() == 4, "idnls.poles", "each pole is [re, im, c_re, c_im]");
        for (const auto& x : q) require(x.is_number(), "idnls.poles", "pole entries must be numbers");
      }
    }
    if (d.contains("sign"))
      require(d["sign"] == "focusing" || d["sign"] == "defocusing", "idnls.sign", "focusing or defocusing");
    if (d.contains("conjugate")) require(d["conjugate"].is_boolean(), "idnls.conjugate", "must be boolean");
    if (d.contains("strict_scattering_symmetry"))
      require(d["strict_scattering_symmetry"].is_boolean(), "idnls.strict_scattering_symmetry", "must be boolean");
    if (d.contains("R")) require(d["R"].is_number(), "idnls.R", "must be a number");
    for (const char* k : {"unit_nodes", "pole_nodes"})
      if (d.contains(k)) require(d[k].is_number_integer(), std::string("idnls.") + k, "must be an integer");
    if (d.contains("radii")) {
      require(d["radii"].is_array(), "idnls.radii", "expected an array of numbers");
      for (const auto& x : d["radii"]) require(x.is_number(), "idnls.radii", "expected numbers");
    }
  }
}

json load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open problem file '" + path + "'");
  json p;
  try {
    p = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem file is not valid JSON: ") + e.what(), e.byte);
  }
  validate_problem(p);
  return p;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const HypothesisError*>(&e)) return 2;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  return 1;
}

std::string error_type_name(const std::exception& e) {
#define RHC_NAME(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  RHC_NAME(ParseError)
  RHC_NAME(EvalError)
  RHC_NAME(OverlapError)
  RHC_NAME(OrientationError)
  RHC_NAME(SingularInversionError)
  RHC_NAME(AlignmentError)
  RHC_NAME(TooCloseToContourError)
  RHC_NAME(WindingAmbiguityError)
  RHC_NAME(CirclePackingError)
  RHC_NAME(RadiusConflictError)
  RHC_NAME(InvalidArgumentError)
  RHC_NAME(SingularJumpError)
  RHC_NAME(NotInversionInvariantContourError)
  RHC_NAME(ReflectionTooLargeError)
  RHC_NAME(HypothesisViolationError)
  RHC_NAME(NonConstantCError)
  RHC_NAME(NonPositiveCError)
  RHC_NAME(NearSingularOperatorError)
  RHC_NAME(RankAmbiguityError)
  RHC_NAME(DegenerateSolitonSystemError)
  RHC_NAME(InputError)
  RHC_NAME(HypothesisError)
  RHC_NAME(NumericalError)
#undef RHC_NAME
  return "Error";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgumentError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw InvalidArgumentError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw InvalidArgumentError("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

namespace {

struct Tolerances {
  SolverOptions solver;
  double symmetry_tol = 1e-10;
  double constancy_tol = 1e-6;
  double margin = 0.5;
};

Tolerances read_tolerances(const json& p, const RunOptions& opts) {
  std::map<std::string, double> t;
  if (p.contains("tolerances"))
    for (auto it = p["tolerances"].begin(); it != p["tolerances"].end(); ++it) t[it.key()] = it.value();
  for (const auto& [k, v] : opts.tolerances) {
    if (!kTolerances.count(k)) bad("--tol", "unknown tolerance '" + k + "'");
    if (!(v > 0.0)) bad("--tol", k + " must be positive");
    t[k] = v;
  }
  Tolerances out;
  for (const auto& [k, v] : t) {
    if (k == "det_floor") out.solver.det_floor = v;
    if (k == "sigma_min") out.solver.sigma_min = v;
    if (k == "rank_tol") out.solver.rank_tol = v;
    if (k == "low_mode_cut") out.solver.low_mode_cut = v;
    if (k == "symmetry_tol") out.symmetry_tol = v;
    if (k == "constancy_tol") out.constancy_tol = v;
    if (k == "margin") out.margin = v;
  }
  return out;
}

ExpressionContext read_context(const json& p) {
  ExpressionContext ctx;
  if (p.contains("constants"))
    for (auto it = p["constants"].begin(); it != p["constants"].end(); ++it)
      ctx.constants[it.key()] = it.value().is_number() ? Complex(it.value().get<double>()) : to_complex(it.value());
  if (p.contains("functions"))
    for (auto it = p["functions"].begin(); it != p["functions"].end(); ++it)
      ctx.functions[it.key()] = Expression::parse(it.value().get<std::string>(), ctx).function();
  return ctx;
}

MatrixExpression read_matrix(const json& j, const ExpressionContext& ctx) {
  if (j.is_string()) return MatrixExpression::parse({{j.get<std::string>()}}, ctx);
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : j) {
    rows.emplace_back();
    for (const auto& e : row) rows.back().push_back(e.get<std::string>());
  }
  return MatrixExpression::parse(rows, ctx);
}

ContourPtr read_contour(const json& p, const RunOptions& opts) {
  std::vector<Circle> circles;
  for (const auto& e : p["contour"]) {
    Circle c;
    c.center = to_complex(e["center"]);
    c.radius = e["radius"].get<double>();
    c.orientation = e["orientation"] == "ccw" ? Orientation::counterclockwise : Orientation::clockwise;
    c.node_count = e.value("nodes", 64);
    if (opts.nodes) c.node_count = *opts.nodes;
    circles.push_back(c);
  }
  return build_contour(std::move(circles));
}

JumpFunction read_jump(const json& p, const ExpressionContext& ctx, const ContourSystem& cs) {
  const json& j = p["jump"];
  if (j.is_object()) {
    std::vector<MatrixExpression> per;
    for (const auto& m : j["per_circle"]) per.push_back(read_matrix(m, ctx));
    for (const auto& m : per)
      if (m.dim() != per.front().dim()) bad("jump.per_circle", "all circles need the same matrix dimension");
    if (per.size() != cs.circle_count()) bad("jump.per_circle", "needs one entry per circle");
    return [per](std::size_t i, Complex z) { return per.at(i)(z); };
  }
  const MatrixExpression m = read_matrix(j, ctx);
  return [m](std::size_t, Complex z) { return m(z); };
}

Matrix read_h(const json& p, const ExpressionContext& ctx, Eigen::Index dim) {
  if (!p.contains("h")) return Matrix::Identity(dim, dim);
  const MatrixExpression m = read_matrix(p["h"], ctx);
  if (m.depends_on_z()) bad("h", "the normalization must be a constant matrix");
  if (m.dim() != dim) bad("h", "dimension differs from the jump matrix");
  return m(Complex(0.0));
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

// Finite numbers only; anything else is listed under "omitted_nonfinite".
void put(json& report, const std::string& key, double v) {
  if (std::isfinite(v)) {
    report[key] = v;
  } else {
    report["omitted_nonfinite"].push_back(key);
  }
}

json node_counts(const ContourSystem& cs) {
  json out = json::array();
  for (const auto& c : cs.circles()) out.push_back(c.node_count);
  return out;
}

using Sampler = std::function<Matrix(Complex)>;

void write_samples(const SampleGrid& grid, const ContourSystem& cs, const Sampler& f, double margin) {
  if (grid.nx < 1 || grid.ny < 1) bad("--grid", "needs positive dimensions");
  std::array<double, 4> box{};
  if (grid.bbox) {
    box = *grid.bbox;
  } else {
    double reach = 0.0;
    for (const auto& c : cs.circles()) reach = std::max(reach, std::abs(c.center) + c.radius);
    box = {-1.5 * reach, 1.5 * reach, -1.5 * reach, 1.5 * reach};
  }
  std::ostringstream out;
  out << std::setprecision(17);
  out << "region,re_z,im_z,row,col,re_m,im_m\n";
  for (int b = 0; b < grid.ny; ++b) {
    const double im = grid.ny == 1 ? box[2] : box[2] + (box[3] - box[2]) * b / (grid.ny - 1);
    for (int a = 0; a < grid.nx; ++a) {
      const double re = grid.nx == 1 ? box[0] : box[0] + (box[1] - box[0]) * a / (grid.nx - 1);
      const Complex z(re, im);
      Matrix m;
      try {
        check_margin(cs, z, margin);
        if (cs.distance_to_contour(z) == 0.0) continue;
        m = f(z);
      } catch (const TooCloseToContourError&) {
        continue;
      } catch (const InvalidArgumentError&) {
        continue;
      }
      if (!m.allFinite()) continue;
      const char* region = to_string(cs.side_of(z));
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          out << region << ',' << re << ',' << im << ',' << r << ',' << c << ',' << m(r, c).real() << ','
              << m(r, c).imag() << '\n';
    }
  }
  write_file_atomic(grid.path, out.str());
}

struct ModeOutput {
  int exit_code = 0;
  std::string status = "ok";
};

void require_no_samples(const RunOptions& opts, const std::string& mode) {
  if (opts.samples) bad("--samples", "not available for mode " + mode);
}

ModeOutput run_generic(const std::string& mode, const json& p, const RunOptions& opts, json& report) {
  const Tolerances tol = read_tolerances(p, opts);
  const ExpressionContext ctx = read_context(p);
  const ContourPtr cs = read_contour(p, opts);
  report["node_counts"] = node_counts(*cs);
  const JumpFunction jump = read_jump(p, ctx, *cs);
  ModeOutput out;

  if (mode == "check-symmetry") {
    require_no_samples(opts, mode);
    const InversionReport rep = check_inversion_hypotheses(jump, *cs, tol.symmetry_tol);
    report["symmetric_off_circle"] = rep.symmetric_off_circle;
    put(report, "symmetry_defect", rep.symmetry_defect);
    put(report, "min_re_eig", rep.min_re_eig_on_circle);
    put(report, "hermitian_defect", rep.hermitian_defect);
    if (!rep.symmetric_off_circle || !(rep.min_re_eig_on_circle > 0.0)) {
      out.exit_code = 2;
      out.status = "hypothesis_failed";
    }
    return out;
  }

  const JumpData v = JumpData::sample(cs, jump, tol.solver.det_floor);
  const CauchyProjectors proj = build_projectors(cs);
  const Side splitting = p.value("splitting", std::string("plus")) == "minus" ? Side::minus : Side::plus;

  if (mode == "solve" || mode == "index") {
    const RHProblem prob = RHProblem::from_jump(v, splitting, read_h(p, ctx, v.v.dim()), tol.solver.det_floor);
    if (mode == "index") {
      require_no_samples(opts, mode);
      const IndexReport rep = index_diagnostics(prob, proj, tol.solver);
      report["dim_ker"] = rep.dim_ker;
      report["dim_coker"] = rep.dim_coker;
      put(report, "smallest_singular_value", rep.smallest_singular_value);
      put(report, "smallest_retained_singular_value", rep.smallest_retained);
      put(report, "largest_discarded_singular_value", rep.largest_discarded);
      report["discarded"] = rep.discarded;
      report["deflated"] = rep.deflated;
      if (rep.separation_decades) put(report, "separation_decades", *rep.separation_decades);
      return out;
    }
    const RHSolution sol = solve(prob, proj, tol.solver);
    put(report, "residual_jump", sol.residual_jump);
    put(report, "smallest_singular_value", sol.smallest_singular_value);
    put(report, "backward_error", sol.backward_error);
    report["dim_ker"] = sol.spectrum.dim_ker;
    report["dim_coker"] = sol.spectrum.dim_coker;
    report["deflated"] = sol.spectrum.deflated;
    const RangeDefect rd = range_defect(sol, proj);
    put(report, "range_defect_plus", rd.plus);
    put(report, "range_defect_minus", rd.minus);
    if (opts.samples)
      write_samples(*opts.samples, *cs, [&](Complex z) { return evaluate_m(sol, z, tol.margin); }, tol.margin);
    return out;
  }

  if (mode == "factorize-scalar") {
    std::optional<Complex> zp, zm;
    ScalarFactorization f;
    if (p.contains("factorize")) {
      const json& fj = p["factorize"];
      const Circle& c = cs->circle(0);
      const bool plus_bounded = cs->unbounded_side() == Side::minus;
      std::optional<Complex> bounded = c.center;
      zp = plus_bounded ? bounded : std::nullopt;
      zm = plus_bounded ? std::nullopt : bounded;
      if (fj.contains("z_plus")) zp = fj["z_plus"].is_null() ? std::nullopt : std::optional<Complex>(to_complex(fj["z_plus"]));
      if (fj.contains("z_minus"))
        zm = fj["z_minus"].is_null() ? std::nullopt : std::optional<Complex>(to_complex(fj["z_minus"]));
      f = scalar_factorize(v.v, proj, zp, zm);
    } else {
      f = scalar_factorize(v.v, proj);
    }
    report["index"] = f.index;
    report["z_plus"] = f.z_plus ? complex_json(*f.z_plus) : json(nullptr);
    report["z_minus"] = f.z_minus ? complex_json(*f.z_minus) : json(nullptr);
    put(report, "factorization_residual", f.identity_residual);
    if (opts.samples)
      write_samples(*opts.samples, *cs,
                    [&](Complex z) { return Matrix::Constant(1, 1, f.evaluate(z, tol.margin)); }, tol.margin);
    return out;
  }

  // factorize-hermitian
  HermitianOptions hopts;
  hopts.solver = tol.solver;
  hopts.symmetry_tol = tol.symmetry_tol;
  hopts.constancy_tol = tol.constancy_tol;
  const HermitianFactorization f = hermitian_factorize(v, proj, hopts);
  report["symmetric_off_circle"] = f.hypotheses.symmetric_off_circle;
  put(report, "min_re_eig", f.hypotheses.min_re_eig_on_circle);
  put(report, "residual_jump", f.solution.residual_jump);
  put(report, "smallest_singular_value", f.solution.smallest_singular_value);
  report["dim_ker"] = f.solution.spectrum.dim_ker;
  report["dim_coker"] = f.solution.spectrum.dim_coker;
  put(report, "c_deviation", f.c_deviation);
  put(report, "c_stddev", f.c_stddev);
  put(report, "product_residual", f.product_residual);
  report["constant_C"] = matrix_json(f.constant_C);
  report["sqrt_R"] = matrix_json(f.sqrt_R);
  if (opts.samples) {
    const Matrix r = f.sqrt_R;
    write_samples(*opts.samples, *cs, [&](Complex z) { return r * evaluate_m(f.solution, z, tol.margin); },
                  tol.margin);
  }
  return out;
}

ModeOutput run_idnls(const json& p, const RunOptions& opts, json& report) {
  const Tolerances tol = read_tolerances(p, opts);
  ExpressionContext ctx = read_context(p);
  const json& d = p["idnls"];
  const Expression r_expr = Expression::parse(d["r"].get<std::string>(), ctx);

  IdnlsSpec spec;
  spec.r = r_expr.function();
  spec.n = d.value("n", 0);
  spec.sign = d.value("sign", std::string("focusing")) == "defocusing" ? IdnlsSign::defocusing : IdnlsSign::focusing;
  spec.strict_scattering_symmetry = d.value("strict_scattering_symmetry", false);
  spec.unit_nodes = d.value("unit_nodes", 128);
  spec.pole_nodes = d.value("pole_nodes", 64);
  if (opts.nodes) spec.unit_nodes = spec.pole_nodes = *opts.nodes;
  if (d.contains("poles"))
    for (const auto& q : d["poles"])
      spec.poles.push_back({Complex(q[0].get<double>(), q[1].get<double>()), Complex(q[2].get<double>(), q[3].get<double>())});
  if (d.contains("radii"))
    for (const auto& x : d["radii"]) spec.radii.push_back(x.get<double>());
  if (spec.sign == IdnlsSign::defocusing) build_defocusing_jump(spec);  // sup|r| < 1 guard

  AugmentedProblem ap = remove_poles(spec);
  const bool conj = d.value("conjugate", false);
  if (conj) ap = conjugate(ap, d.contains("R") ? std::optional<double>(d["R"].get<double>()) : std::nullopt);
  report["node_counts"] = node_counts(*ap.system);
  report["conjugated"] = conj;
  if (conj) put(report, "R", ap.outer_radius);
  json roles = json::array();
  for (const auto& pv : ap.provenance) roles.push_back(to_string(pv.role));
  report["circle_roles"] = roles;

  ModeOutput out;
  const InversionReport hyp = check_inversion_hypotheses(ap.jump, *ap.system, 1e-12);
  report["symmetric_off_circle"] = hyp.symmetric_off_circle;
  put(report, "symmetry_defect", hyp.symmetry_defect);
  put(report, "min_re_eig", hyp.min_re_eig_on_circle);

  const CauchyProjectors proj = build_projectors(ap.system);
  const RHSolution sol = solve(to_rhp(ap, tol.solver.det_floor), proj, tol.solver);
  put(report, "residual_jump", sol.residual_jump);
  put(report, "smallest_singular_value", sol.smallest_singular_value);
  put(report, "backward_error", sol.backward_error);
  report["dim_ker"] = sol.spectrum.dim_ker;
  report["dim_coker"] = sol.spectrum.dim_coker;
  report["deflated"] = sol.spectrum.deflated;
  if (!spec.poles.empty()) put(report, "residue_defect", residue_defect(ap, sol));

  const bool reflectionless = !r_expr.depends_on_z() && r_expr(Complex(0.0)) == Complex(0.0);
  if (reflectionless && !spec.poles.empty() && spec.sign == IdnlsSign::focusing) {
    const SolitonOracle oracle(spec);
    double reach = 1.0;
    for (const auto& q : spec.poles) reach = std::max(reach, std::abs(q.z));
    double worst = 0.0;
    int probes = 0;
    for (int a = 0; a < 9; ++a) {
      for (int b = 0; b < 9; ++b) {
        const Complex z(-1.7 * reach + 3.4 * reach * (a + 0.37) / 9.0, -1.7 * reach + 3.4 * reach * (b + 0.61) / 9.0);
        try {
          check_margin(*ap.system, z, 2.0);
        } catch (const TooCloseToContourError&) {
          continue;
        }
        worst = std::max(worst, (ap.recover(sol, z, tol.margin) - oracle.evaluate(z)).norm());
        ++probes;
      }
    }
    put(report, "oracle_max_difference", worst);
    report["oracle_probes"] = probes;
  }
  if (conj && (!hyp.symmetric_off_circle || !(hyp.min_re_eig_on_circle > 0.0))) {
    out.exit_code = 2;
    out.status = "hypothesis_failed";
  }
  if (opts.samples)
    write_samples(*opts.samples, *ap.system, [&](Complex z) { return ap.recover(sol, z, tol.margin); }, tol.margin);
  return out;
}

}  // namespace

RunResult run_problem(const std::string& mode, const json& problem, const RunOptions& opts) {
  RunResult result;
  json& report = result.report;
  report["version"] = kProblemVersion;
  report["mode"] = mode;
  const auto start = std::chrono::steady_clock::now();
  try {
    validate_problem(problem);
    if (problem["mode"] != mode)
      bad("mode", "command-line mode '" + mode + "' differs from the file's mode '" +
                      problem["mode"].get<std::string>() + "'");
    const ModeOutput out = mode == "idnls" ? run_idnls(problem, opts, report) : run_generic(mode, problem, opts, report);
    result.exit_code = out.exit_code;
    report["status"] = out.status;
  } catch (const std::exception& e) {
    result.exit_code = exit_code_for(e);
    report["status"] = "error";
    report["error"] = {{"type", error_type_name(e)}, {"message", e.what()}};
    if (const auto* ns = dynamic_cast<const NearSingularOperatorError*>(&e))
      put(report, "smallest_singular_value", ns->smallest_singular_value());
    if (const auto* nc = dynamic_cast<const NonConstantCError*>(&e)) put(report, "c_deviation", nc->deviation());
  }
  report["exit_code"] = result.exit_code;
  if (opts.timing)
    report["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace rhc
