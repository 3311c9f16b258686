#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "svilab/scenario.hpp"

using nlohmann::json;
namespace sc = svilab::scenario;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("svilab-test-" + name);
  fs::remove_all(d);
  return d;
}

int run_text(const std::string& text, const fs::path& out, std::ostream& diag) {
  const auto cfg = out.string() + ".json";
  std::ofstream(cfg) << text;
  return sc::run_scenario(cfg, out, {}, diag);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("problem parsing") {
    CHECK(sc::parse_problem("robust-affine").map.scenario_count() == 2);
    CHECK(sc::parse_problem(json{{"builtin", "paper-sec3-example"}, {"m", 3}}).map.m() == 3);
    CHECK(sc::parse_problem(json{{"kind", "builtin"}, {"name", "paper-sec3-example"}, {"m", 2}}).map.m() == 2);
    const auto aff = sc::parse_problem(json::parse(R"({
      "kind": "affine", "name": "two", "m": 2, "n_p": 1, "n_x": 2,
      "scenarios": [{"A": [[1, 0], [0, 1]], "B": [[1], [0]], "c": [0, 1]}],
      "cone": {"normals": [[1, 0], [1, 1]]}, "recession": false})"));
    CHECK(aff.name == "two");
    CHECK(aff.cone.normals().size() == 2);
    CHECK_THROWS_AS(sc::parse_problem("nope"), svilab::Error);
    CHECK_THROWS_AS(sc::parse_problem(json{{"kind", "affine"}, {"m", 1}}), sc::ConfigError);
    CHECK_THROWS_AS(sc::parse_problem(json::parse(R"({"kind": "affine", "m": 1, "n_p": 1, "n_x": 1,
      "scenarios": [{"A": [[1, 2]], "B": [[1]]}]})")),
                    sc::ConfigError);
  }

  TEST_CASE("empty analysis list") {
    const auto res = sc::run_config(json{{"problem", "robust-affine"}, {"analyses", json::array()}});
    CHECK(res.exit_code == sc::kOk);
    CHECK(res.report.at("analyses").empty());
    CHECK(res.report.at("schema") == "svi-lab/1");
    CHECK(res.csv.empty());
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(sc::run_config(json{{"problem", "robust-affine"}, {"bogus", 1}}), sc::ConfigError);
    CHECK_THROWS_AS(sc::run_config(json{{"analyses", json::array()}}), sc::ConfigError);
    CHECK_THROWS_AS(sc::run_config(json{{"problem", "robust-affine"}, {"analyses", {{{"name", "magic"}}}}}),
                    sc::ConfigError);
    CHECK_THROWS_AS(sc::run_config(json{{"problem", "robust-affine"}, {"base_point", {{"p", {1, 2}}}}}),
                    sc::ConfigError);
    CHECK_THROWS_AS(sc::run_config(json{{"problem", "robust-affine"},
                                        {"analyses", {{{"name", "slope"}, {"expect", "maybe"}}}}}),
                    sc::ConfigError);
  }

  TEST_CASE("expectations decide the exit code") {
    json cfg = {{"problem", "paper-sec3-example"}, {"analyses", {{{"name", "sigma-nabla"}}}}};
    CHECK(sc::run_config(cfg).exit_code == sc::kVerdictMismatch);
    cfg["analyses"][0]["expect"] = "fail";
    CHECK(sc::run_config(cfg).exit_code == sc::kOk);
  }

  TEST_CASE("analyses are ordered by name and CSV names are unique") {
    const json cfg = json::parse(R"({"problem": "robust-affine", "seed": 3,
      "analyses": ["sigma-nabla", {"name": "lip-lsc", "ell": 1}, {"name": "aubin"},
                   {"name": "lip-lsc", "ell": 2}]})");
    const auto res = sc::run_config(cfg);
    const auto& a = res.report.at("analyses");
    REQUIRE(a.size() == 4);
    CHECK(a[0].at("name") == "aubin");
    CHECK(a[1].at("name") == "lip-lsc");
    CHECK(a[1].at("result").at("ell") == 1.0);
    CHECK(a[2].at("result").at("ell") == 2.0);
    CHECK(a[3].at("name") == "sigma-nabla");
    CHECK(res.csv.count("lip-lsc.csv") == 1);
    CHECK(res.csv.count("lip-lsc-2.csv") == 1);
    CHECK(res.csv.at("lip-lsc.csv").rfind("p,dist,bound,verdict,ell,h\n", 0) == 0);
  }

  TEST_CASE("numbers are written with 17 significant digits") {
    CHECK(sc::format_double(0.1) == "0.10000000000000001");
    CHECK(sc::format_double(2.0) == "2");
    CHECK(sc::dump_json(json{{"a", 0.1}}, 0) == "{\"a\":0.10000000000000001}\n");
    CHECK(sc::dump_json(json{{"a", INFINITY}}, 0) == "{\"a\":null}\n");
  }

  TEST_CASE("run_scenario writes reports and returns exit codes") {
    std::ostringstream diag;
    const auto ok = temp_dir("ok");
    CHECK(run_text(R"({"problem": "robust-affine", "analyses": [{"name": "errorbound", "sigma": 1.0,
                       "zeta": 0.5, "eta": 0.5}]})",
                   ok, diag) == sc::kOk);
    CHECK(fs::exists(ok / "report.json"));
    CHECK(fs::exists(ok / "errorbound.csv"));
    const auto csv = slurp(ok / "errorbound.csv");
    CHECK(csv.rfind("p,x,merit,dist,ratio,verdict,sigma,h,feas_tol\n", 0) == 0);

    CHECK(run_text(R"({"problem": "no-such-problem"})", temp_dir("bad"), diag) == sc::kConfigError);
    CHECK(run_text("{ not json", temp_dir("broken"), diag) == sc::kConfigError);
    CHECK(sc::run_scenario(temp_dir("missing") / "absent.json", temp_dir("missing"), {}, diag) ==
          sc::kConfigError);
    // A base point off the graph makes the Aubin estimator fail numerically.
    CHECK(run_text(R"({"problem": "paper-sec3-example", "base_point": {"p": 1, "x": 0},
                       "analyses": ["aubin"]})",
                   temp_dir("numeric"), diag) == sc::kNumericFailure);
    CHECK_FALSE(diag.str().empty());
  }

  TEST_CASE("reports are byte-identical across runs and thread counts") {
    const json cfg = json::parse(R"({"problem": "paper-sec3-example", "seed": 7,
      "analyses": ["slope", {"name": "sigma-nabla", "expect": "any"}, "gder"]})");
    sc::RunOptions one, four;
    four.threads = 4;
    const auto a = sc::run_config(cfg, one);
    const auto b = sc::run_config(cfg, four);
    CHECK(sc::dump_json(a.report) == sc::dump_json(b.report));
    CHECK(a.csv == b.csv);
    sc::RunOptions other;
    other.seed = 8;
    CHECK(sc::run_config(cfg, other).report.at("seed") == 8);
  }
}
