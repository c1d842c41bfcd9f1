#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>

#include "diracl2/parallel.hpp"
#include "diracl2/run.hpp"

using namespace diracl2;
using nlohmann::json;

namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) {
    path = std::string("diracl2_cli_test_") + name;
  }
  ~TempPath() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

// ============================ flag parsing ============================

TEST_CASE("list parsing helpers") {
  CHECK(split("a,b,,c", ',') ==
        std::vector<std::string>{"a", "b", "", "c"});
  CHECK(parse_extent_list("33,65") == std::vector<Index>{33, 65});
  CHECK(parse_extent_list("9") == std::vector<Index>{9});
  CHECK_THROWS_AS(parse_extent_list("33,x"), config_error);

  std::vector<double> lows, highs;
  parse_domain_list("-1:1,-2:2.5", lows, highs);
  CHECK(lows == std::vector<double>{-1.0, -2.0});
  CHECK(highs == std::vector<double>{1.0, 2.5});
  CHECK_THROWS_AS(parse_domain_list("1", lows, highs), config_error);
  CHECK_THROWS_AS(parse_domain_list("2:1", lows, highs), config_error);
}

TEST_CASE("config entries validate their values") {
  RunConfig cfg;
  cfg.command = "solve";

  apply_config_entry(cfg, "n", "3");
  CHECK(cfg.n == 3);
  apply_config_entry(cfg, "grid", "17,17,9");
  CHECK(cfg.extents == std::vector<Index>{17, 17, 9});
  apply_config_entry(cfg, "tol", "1e-8");
  CHECK(cfg.tol == 1e-8);
  apply_config_entry(cfg, "rhs", "bump:e12:margin=0.3");
  CHECK(cfg.rhs == "bump:e12:margin=0.3");

  CHECK_THROWS_AS(apply_config_entry(cfg, "n", "99"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "n", "0"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "tol", "0"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "tol", "-1"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "trials", "0"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "levels", "11"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "grid", "17,two"), config_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "frobnicate", "1"), config_error);
}

TEST_CASE("precedence: defaults, then file, then flags") {
  TempPath file("precedence.cfg");
  {
    std::ofstream out(file.path);
    out << "# solver settings\n";
    out << "n = 1\n";
    out << "tol = 1e-6\n";
    out << "weight = zero\n";
  }

  const RunConfig base = resolve_config("solve", {}, file.path);
  CHECK(base.command == "solve");
  CHECK(base.n == 1);
  CHECK(base.tol == 1e-6);
  CHECK(base.weight == "zero");
  CHECK(base.rhs == "bump:e0");  // untouched default

  const RunConfig flagged =
      resolve_config("solve", {{"tol", "1e-9"}}, file.path);
  CHECK(flagged.n == 1);      // from the file
  CHECK(flagged.tol == 1e-9); // flag wins

  CHECK_THROWS_AS(resolve_config("solve", {}, "no_such_file.cfg"),
                  config_error);
  CHECK_THROWS_AS(resolve_config("bogus-command", {}, ""), config_error);
}

// ============================== commands ==============================

TEST_CASE("verify command reports every identity as passing") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.n = 2;
  cfg.trials = 40;
  const RunResult res = run_cli(cfg);
  REQUIRE(res.exitCode == 0);

  const json rep = json::parse(res.report);
  CHECK(rep.at("all_passed").get<bool>());
  CHECK(rep.at("config").at("n").get<int>() == 2);
  CHECK(rep.at("config").at("trials").get<int>() == 40);
  REQUIRE(rep.at("identities").is_array());
  CHECK(rep.at("identities").size() == 5);
  for (const auto& ident : rep.at("identities")) {
    CAPTURE(ident.at("identity").get<std::string>());
    CHECK(ident.at("passes").get<std::int64_t>() ==
          ident.at("trials").get<std::int64_t>());
    CHECK_FALSE(ident.contains("counterexample"));
  }
}

TEST_CASE("solve command meets the norm bound") {
  RunConfig cfg;
  cfg.command = "solve";
  cfg.n = 1;
  cfg.extents = {33, 33};
  cfg.rhs = "bump:e1:margin=0.25";
  const RunResult res = run_cli(cfg);
  REQUIRE(res.exitCode == 0);

  const json rep = json::parse(res.report);
  CHECK(rep.at("passed").get<bool>());
  CHECK(rep.at("report").at("converged").get<bool>());
  CHECK(rep.at("report").at("bound_ratio").get<double>() <= 1.0 + 1e-3);
  CHECK(rep.at("report").at("weak_defect").get<double>() < 1e-2);
  CHECK(rep.at("config").at("weight").get<std::string>() == "quadratic0");
}

TEST_CASE("config errors surface as exit code 2") {
  RunConfig cfg;
  cfg.command = "solve";
  cfg.n = 2;
  cfg.rhs = "bump:e123";  // needs three generators
  const RunResult res = run_cli(cfg);
  CHECK(res.exitCode == 2);
  const json rep = json::parse(res.report);
  CHECK(rep.contains("error"));
  CHECK(rep.at("exit_code").get<int>() == 2);

  cfg.rhs = "bump:e0:margin=0.9";
  CHECK(run_cli(cfg).exitCode == 2);
  cfg.rhs = "squarewave";
  CHECK(run_cli(cfg).exitCode == 2);
}

TEST_CASE("reports are deterministic across runs and worker caps") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.n = 2;
  cfg.trials = 30;
  const std::string first = run_cli(cfg).report;
  const std::string second = run_cli(cfg).report;
  CHECK(first == second);

  set_thread_cap(1);
  const std::string serial = run_cli(cfg).report;
  set_thread_cap(4);
  const std::string wide = run_cli(cfg).report;
  set_thread_cap(0);
  CHECK(serial == first);
  CHECK(wide == first);

  RunConfig solve;
  solve.command = "solve";
  solve.n = 1;
  solve.extents = {17, 17};
  const std::string s1 = run_cli(solve).report;
  set_thread_cap(1);
  const std::string s2 = run_cli(solve).report;
  set_thread_cap(0);
  CHECK(s1 == s2);
}

TEST_CASE("report lands in the output file verbatim") {
  TempPath out("report.json");
  RunConfig cfg;
  cfg.command = "verify";
  cfg.n = 1;
  cfg.trials = 10;
  cfg.output = out.path;
  const RunResult res = run_cli(cfg);
  REQUIRE(res.exitCode == 0);
  CHECK(slurp(out.path) == res.report);
}

TEST_CASE("sweep emits the pinned CSV schema") {
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.n = 1;
  cfg.extents = {17, 17};
  cfg.levels = 2;
  const RunResult res = run_cli(cfg);
  REQUIRE(res.exitCode == 0);

  const auto lines = split(res.report, '\n');
  REQUIRE(lines.size() >= 4);  // comment, header, two levels, trailing
  CHECK(lines[0].substr(0, 2) == "# ");
  const json echoed = json::parse(lines[0].substr(2));
  CHECK(echoed.at("command").get<std::string>() == "sweep");
  CHECK(lines[1] ==
        "level,h,defect_eq22,bound_ratio,weak_defect,observed_order");
  const auto row0 = split(lines[2], ',');
  REQUIRE(row0.size() == 6);
  CHECK(row0[0] == "0");
  CHECK(row0[5] == "nan");  // no previous level to compare against
  const auto row1 = split(lines[3], ',');
  REQUIRE(row1.size() == 6);
  CHECK(std::stod(row1[1]) == doctest::Approx(std::stod(row0[1]) / 2.0));
  CHECK(std::stod(row1[5]) > 0.0);  // defect is shrinking
}
