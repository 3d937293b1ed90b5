#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "rigidgeo/scenarios.hpp"

using namespace rigidgeo::scenarios;
namespace fs = std::filesystem;

namespace {

std::string stable_json(Report r) {
  r.wall_seconds.reset();
  return r.to_json().dump(2);
}

int exit_code(const std::string& args) {
  const std::string cmd = std::string(RIGIDGEO_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rigidgeo_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

Json parse(const char* text) { return Json::parse(text); }

}  // namespace

TEST_CASE("scenario enumeration") {
  const auto& s = list_scenarios();
  REQUIRE(s.size() == 9);
  const std::vector<std::string> expected = {"model-metrics", "liouville-flatness", "killing-dim",
                                             "equivariance-symbolic", "equivariance-numeric", "wang-coframe",
                                             "orbit-volume-form", "moduli-count", "flat-search"};
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].name == expected[i]);
    CHECK_FALSE(s[i].description.empty());
  }
}

TEST_CASE("every scenario passes on defaults and is deterministic") {
  for (const auto& s : list_scenarios()) {
    CAPTURE(s.name);
    const Report a = run(s.name, Json::object());
    const Report b = run(s.name, Json::object());
    CHECK(a.passed());
    CHECK(stable_json(a) == stable_json(b));
    CHECK(a.seed == kDefaultSeed);
    for (const auto& c : a.checks) CHECK_FALSE(c.anchor.empty());
  }
}

TEST_CASE("documented examples") {
  const auto moduli = run("moduli-count", parse(R"({"genus_min": 2, "genus_max": 2})"));
  CHECK(moduli.passed());
  CHECK(moduli.checks.back().residual.at("total") == 11);

  const auto killing = run("killing-dim", Json::object());
  CHECK(killing.parameters.at("f11") == "1");
  CHECK(killing.parameters.at("f22") == "3");
  CHECK(killing.checks.back().residual.at("dimension") == 1);
  CHECK(killing.checks.back().residual.at("basis") == Json::array({"d/dz"}));

  const auto flat = run("liouville-flatness", Json::object());
  CHECK(flat.passed());
  CHECK(flat.parameters.at("f11") == "symbolic");

  const auto nongeneric = run("killing-dim", parse(R"({"f11": "1", "f22": "1"})"));
  CHECK(nongeneric.passed());
  const auto& flags = nongeneric.checks.back().residual.at("failed_flags");
  CHECK(std::find(flags.begin(), flags.end(), "f11 = f22") != flags.end());
}

TEST_CASE("seed and tolerance are recorded") {
  const auto a = run("equivariance-symbolic", Json::object(), {7, std::nullopt});
  const auto b = run("equivariance-symbolic", Json::object());
  CHECK(a.seed == 7);
  CHECK(a.to_json()["seed"] == 7);
  CHECK(a.parameters.at("gammas") != b.parameters.at("gammas"));
  CHECK(a.to_json()["tolerance"] == "exact");

  const auto n = run("equivariance-numeric", Json::object(), {std::nullopt, 1e-10});
  CHECK(n.to_json()["tolerance"] == 1e-10);
  CHECK(n.passed());
  const auto strict = run("equivariance-numeric", Json::object(), {std::nullopt, 1e-30});
  CHECK_FALSE(strict.passed());
}

TEST_CASE("schema violations") {
  CHECK_THROWS_WITH_AS(run("no-such", Json::object()), doctest::Contains("valid: model-metrics"), ConfigError);
  CHECK_THROWS_AS(run("moduli-count", Json::array()), ConfigError);
  CHECK_THROWS_WITH_AS(run("moduli-count", parse(R"({"genus": 3})")), doctest::Contains("unknown key 'genus'"),
                       ConfigError);
  CHECK_THROWS_AS(run("moduli-count", parse(R"({"genus_min": 1})")), ConfigError);
  CHECK_THROWS_AS(run("moduli-count", parse(R"({"genus_min": 5, "genus_max": 3})")), ConfigError);
  CHECK_THROWS_AS(run("killing-dim", parse(R"({"f11": "1.5"})")), ConfigError);
  CHECK_THROWS_AS(run("killing-dim", parse(R"({"f11": 1.5})")), ConfigError);
  CHECK_THROWS_AS(run("killing-dim", parse(R"({"symbols": {"f12": "nu"}})")), ConfigError);
  CHECK_THROWS_AS(run("equivariance-symbolic", parse(R"({"gammas": [["1", "1", "1", "1"]]})")), ConfigError);
  CHECK_THROWS_AS(run("equivariance-numeric", parse(R"({"gammas": [["1", "1/2", "0", "1"]]})")), ConfigError);
  CHECK_THROWS_AS(run("equivariance-numeric", parse(R"({"sample_points": [[0.5, -1]]})")), ConfigError);
  CHECK_THROWS_AS(run("model-metrics", parse(R"({"algebra": "so3"})")), ConfigError);
  CHECK_THROWS_AS(run("model-metrics", parse(R"({"algebra": "sl2", "metric": [["1","0","0"],["0","0","0"],["0","0","1"]]})")),
                  ConfigError);
  CHECK_THROWS_AS(run("flat-search", parse(R"({"values": [0, 0]})")), ConfigError);
  CHECK_THROWS_AS(run("moduli-count", Json::object(), {std::nullopt, -1.0}), ConfigError);

  // Numeric scenarios accept decimals.
  CHECK(run("equivariance-numeric", parse(R"({"f11": 0.5, "f22": "1.25-0.5i", "random_elements": 0})")).passed());
}

TEST_CASE("custom structure file and metric") {
  const auto path = scratch("affine_plus_center.txt");
  {
    std::ofstream out(path);
    out << "# [X1, X2] = X2, X3 central\ndim 3\n1 2 2 1 0\n";
  }
  const Json cfg = {{"structure_file", path.string()},
                    {"metric", Json::array({Json::array({"1", "0", "0"}), Json::array({"0", "1", "0"}),
                                            Json::array({"0", "0", "1"})})}};
  const auto r = run("model-metrics", cfg);
  CHECK(r.checks.size() >= 2);
  CHECK(r.checks[0].passed);

  const auto w = run("wang-coframe", Json{{"structure_file", path.string()}});
  CHECK_FALSE(w.passed());  // not unimodular
  CHECK(w.checks[0].passed);

  CHECK_THROWS_AS(run("model-metrics", Json{{"structure_file", path.string()}}), ConfigError);
  CHECK_THROWS_AS(run("model-metrics", Json{{"structure_file", "/nonexistent/file"}, {"metric", cfg["metric"]}}),
                  ConfigError);
}

TEST_CASE("command line: exit codes and byte-identical reports") {
  CHECK(exit_code("list") == 0);
  CHECK(exit_code("run moduli-count") == 0);
  CHECK(exit_code("run equivariance-numeric --tolerance 1e-30") == 1);
  CHECK(exit_code("run no-such-scenario") == 2);
  CHECK(exit_code("run moduli-count --tolerance -1") == 2);
  CHECK(exit_code("") == 2);

  const auto bad = scratch("bad.json");
  std::ofstream(bad) << R"({"genus_min": "two"})";
  CHECK(exit_code("run moduli-count --config " + bad.string()) == 2);
  const auto broken = scratch("broken.json");
  std::ofstream(broken) << "{";
  CHECK(exit_code("run moduli-count --config " + broken.string()) == 2);

  const auto a = scratch("a.json"), b = scratch("b.json"), t = scratch("t.json");
  for (const char* s : {"killing-dim", "equivariance-symbolic", "model-metrics"}) {
    CAPTURE(s);
    REQUIRE(exit_code(std::string("run ") + s + " --out " + a.string()) == 0);
    REQUIRE(exit_code(std::string("run ") + s + " --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("wall_seconds") == std::string::npos);
  }
  REQUIRE(exit_code("run moduli-count --timing --out " + t.string()) == 0);
  CHECK(slurp(t).find("wall_seconds") != std::string::npos);

  const auto failing = scratch("failing.json");
  CHECK(exit_code("run equivariance-numeric --tolerance 1e-30 --out " + failing.string()) == 1);
  CHECK(Json::parse(slurp(failing))["passed"] == false);
}
