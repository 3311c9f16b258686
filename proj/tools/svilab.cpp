// svilab command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svilab/problems.hpp"
#include "svilab/scenario.hpp"

namespace sc = svilab::scenario;

namespace {

int list_builtins() {
  for (const auto& b : svilab::list_builtins()) {
    std::cout << b.name << "  n_p=" << b.n_p << " n_x=" << b.n_x << " m=" << b.m_default;
    if (b.m_min != b.m_max) std::cout << " (m in " << b.m_min << ".." << b.m_max << ")";
    std::cout << "  closed_forms=" << (b.closed_forms ? "yes" : "no") << "  " << b.description
              << '\n';
  }
  return sc::kOk;
}

int run_single(const std::string& name, const std::string& config_path,
               const std::optional<std::string>& out_dir, const sc::RunOptions& base) {
  nlohmann::json config;
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config " << config_path << '\n';
    return sc::kConfigError;
  }
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: invalid JSON: " << e.what() << '\n';
    return sc::kConfigError;
  }
  sc::RunOptions opts = base;
  opts.only = name;
  sc::RunResult res;
  try {
    res = sc::run_config(config, opts);
  } catch (const sc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return sc::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return sc::kNumericFailure;
  }
  std::cout << sc::dump_json(res.report.at("analyses"));
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    for (const auto& [file, body] : res.csv) std::ofstream(std::filesystem::path(*out_dir) / file) << body;
  } else {
    for (const auto& [file, body] : res.csv) std::cout << "# " << file << '\n' << body;
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical diagnostics for parameterized set-valued inclusions"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "svilab-out";
  std::optional<std::uint64_t> seed;
  int threads = 1;

  auto* run = app.add_subcommand("run", "Run every analysis of a config and write report.json");
  run->add_option("config", config, "Config file")->required();
  run->add_option("--out", out, "Output directory")->capture_default_str();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  app.add_subcommand("list", "List builtin problems");

  const std::vector<std::string> singles = {"slope",  "sigma-nabla", "sigma-h",   "errorbound",
                                            "aubin",  "aubin-bound", "lip-lsc",   "lipschitz-rate",
                                            "gder",   "concavity",   "descent"};
  std::optional<std::string> single_out;
  for (const auto& name : singles) {
    auto* sub = app.add_subcommand(name, "Run only the '" + name + "' analysis of a config");
    sub->add_option("config", config, "Config file")->required();
    sub->add_option("--out", single_out, "Write CSV output here instead of stdout");
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sc::kConfigError;
  }

  sc::RunOptions opts;
  opts.seed = seed;
  opts.threads = threads;

  auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (name == "list") return list_builtins();
  if (name == "run") return sc::run_scenario(config, out, opts, std::cerr);
  return run_single(name, config, single_out, opts);
}
