// rhc: command-line front end for the Riemann-Hilbert solver.
//
//   rhc <mode> --problem FILE --out FILE [--samples FILE --grid NxM --bbox re0,re1,im0,im1]
//       [--nodes K] [--tol name=value]... [--timing]

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rhc/errors.hpp"
#include "rhc/problem.hpp"

namespace {

rhc::SampleGrid parse_grid(const std::string& path, const std::string& grid, const std::string& bbox) {
  rhc::SampleGrid g;
  g.path = path;
  if (!grid.empty()) {
    char x = 0;
    std::istringstream in(grid);
    if (!(in >> g.nx >> x >> g.ny) || (x != 'x' && x != 'X') || !in.eof() || g.nx < 1 || g.ny < 1)
      throw rhc::InvalidArgumentError("--grid expects NxM with positive N, M, got '" + grid + "'");
  }
  if (!bbox.empty()) {
    std::array<double, 4> b{};
    std::istringstream in(bbox);
    for (int k = 0; k < 4; ++k) {
      char comma = ',';
      if ((k > 0 && !(in >> comma)) || comma != ',' || !(in >> b[static_cast<std::size_t>(k)]))
        throw rhc::InvalidArgumentError("--bbox expects re0,re1,im0,im1, got '" + bbox + "'");
    }
    if (!(b[0] < b[1]) || !(b[2] < b[3])) throw rhc::InvalidArgumentError("--bbox needs re0 < re1 and im0 < im1");
    g.bbox = b;
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann-Hilbert problems on systems of circles"};
  std::string mode, problem_path, out_path, samples_path, grid, bbox;
  std::vector<std::string> tols;
  int nodes = 0;
  bool timing = false;

  app.add_option("mode", mode, "solve | factorize-scalar | factorize-hermitian | check-symmetry | index | idnls")
      ->required()
      ->check(CLI::IsMember({"solve", "factorize-scalar", "factorize-hermitian", "check-symmetry", "index", "idnls"}));
  app.add_option("--problem", problem_path, "JSON problem file")->required();
  app.add_option("--out", out_path, "report JSON file")->required();
  auto* samples = app.add_option("--samples", samples_path, "CSV file of m sampled on a grid");
  app.add_option("--grid", grid, "sample grid NxM (default 50x50)")->needs(samples);
  app.add_option("--bbox", bbox, "sample box re0,re1,im0,im1 (default: around the contour)")->needs(samples);
  app.add_option("--nodes", nodes, "node count for every circle")->check(CLI::Range(4, 1 << 14));
  app.add_option("--tol", tols, "tolerance override name=value (repeatable)");
  app.add_flag("--timing", timing, "record wall time in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  rhc::RunOptions opts;
  rhc::RunResult result;
  try {
    if (app.count("--nodes")) opts.nodes = nodes;
    opts.timing = timing;
    for (const auto& t : tols) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw rhc::InvalidArgumentError("--tol expects name=value, got '" + t + "'");
      std::size_t used = 0;
      const std::string value = t.substr(eq + 1);
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) throw rhc::InvalidArgumentError("--tol value is not a number: '" + t + "'");
      opts.tolerances[t.substr(0, eq)] = v;
    }
    if (!samples_path.empty()) opts.samples = parse_grid(samples_path, grid, bbox);
    result = rhc::run_problem(mode, rhc::load_problem(problem_path), opts);
  } catch (const std::exception& e) {
    result.exit_code = rhc::exit_code_for(e);
    result.report = {{"version", rhc::kProblemVersion},
                     {"mode", mode},
                     {"status", "error"},
                     {"exit_code", result.exit_code},
                     {"error", {{"type", rhc::error_type_name(e)}, {"message", e.what()}}}};
  }

  try {
    rhc::write_file_atomic(out_path, result.report.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "rhc: " << e.what() << "\n";
    return 1;
  }
  if (result.report.contains("error"))
    std::cerr << "rhc: " << result.report["error"]["type"].get<std::string>() << ": "
              << result.report["error"]["message"].get<std::string>() << "\n";
  return result.exit_code;
}
