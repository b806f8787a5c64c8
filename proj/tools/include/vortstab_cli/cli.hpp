#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vortstab/analysis.hpp"

namespace vortstab::cli {

/// Bad config or flags; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kOk = 0, kFailed = 1, kConfig = 2 };

struct OutputSpec {
  std::filesystem::path directory;
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  SteadyState state;
  Truncation truncation;

  std::vector<cplx> lambdas;  // empty: command default
  std::vector<cplx> mus;
  std::string op = "A_lambda";
  std::string plane = "mu";
  std::vector<Rect> rects;
  double lambda_min = 0.01;
  double lambda_max = -1.0;
  int grid = 256;
  double tol = 1e-10;
  bool complex_search = false;
  std::uint64_t seed = 20240917;
  bool allow_full2d = false;
  bool dump_matrix = false;
  std::vector<int> ladder;
  std::string quantity = "lambda_star";
  double threshold = 1e-6;
  double det_lambda = 0.5;

  OutputSpec output;
};

const std::vector<std::string>& commands();
const std::vector<std::string>& operator_names();

/// Builds and validates a RunConfig from the nested config document
/// (sections state, truncation, params, output). Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& doc);

/// Parses "re" or "re,im".
cplx parse_complex(const std::string& text);
/// Parses "reMin,reMax,imMin,imMax".
Rect parse_rect(const std::string& text);

int run(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point: flags, optional --config file, dispatch.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vortstab::cli
