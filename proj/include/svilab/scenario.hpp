#pragma once

// Batch runner: a JSON config names a problem, a base point, default radii
// and a list of analyses; the runner writes report.json plus one CSV per
// tabular analysis.
//
// Exit codes: 0 every analysis matched its expected verdict, 1 some did
// not, 2 invalid config, 3 numeric failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "svilab/errors.hpp"
#include "svilab/svi_core.hpp"

namespace svilab::scenario {

inline constexpr const char* kSchemaVersion = "svi-lab/1";

enum ExitCode : int {
  kOk = 0,
  kVerdictMismatch = 1,
  kConfigError = 2,
  kNumericFailure = 3,
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
  int threads = 1;
  std::optional<std::string> only;    ///< run just this analysis kind
};

struct RunResult {
  int exit_code = kOk;
  nlohmann::json report;
  std::map<std::string, std::string> csv;  ///< file name -> contents
};

SviProblem parse_problem(const nlohmann::json& j);

/// Runs every analysis of an already-parsed config. Config and numeric
/// errors propagate as ConfigError / svilab::Error.
RunResult run_config(const nlohmann::json& config, const RunOptions& opts = {});

/// Loads `config_path`, runs it and writes report.json and CSVs into
/// out_dir. Diagnostics go to `diag`. Returns the process exit code.
int run_scenario(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 const RunOptions& opts, std::ostream& diag);

/// JSON text with every floating-point value written to 17 significant
/// digits; non-finite values become null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

std::string format_double(double v);

bool is_known_analysis(const std::string& name);

}  // namespace svilab::scenario
