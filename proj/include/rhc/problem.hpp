#pragma once

#include <array>
#include <exception>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace rhc {

inline constexpr int kProblemVersion = 1;

/// Plot grid for --samples: nx x ny points over [re0, re1] x [im0, im1].
struct SampleGrid {
  std::string path;
  int nx = 50;
  int ny = 50;
  std::optional<std::array<double, 4>> bbox;  // re0, re1, im0, im1; default from the contour
};

struct RunOptions {
  std::optional<int> nodes;                  // overrides every node count
  std::map<std::string, double> tolerances;  // overrides the file's tolerances block
  bool timing = false;
  std::optional<SampleGrid> samples;
};

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
};

/// Reads and structurally validates a version-1 problem file. Throws InputError subclasses.
nlohmann::json load_problem(const std::string& path);
void validate_problem(const nlohmann::json& problem);

/// Runs one mode. Never throws for problem-level failures: they are reported in the
/// returned report with exit code 1 (input), 2 (hypothesis) or 3 (numerical).
RunResult run_problem(const std::string& mode, const nlohmann::json& problem, const RunOptions& opts);

int exit_code_for(const std::exception& e);
std::string error_type_name(const std::exception& e);

/// Writes via a temporary file in the same directory followed by a rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace rhc
