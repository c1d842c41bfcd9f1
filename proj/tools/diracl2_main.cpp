// Command-line front end: argv -> (command, key=value flags) -> run_cli.
// All value validation lives in the library so config files and flags go
// through the same checks.

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diracl2/parallel.hpp"
#include "diracl2/run.hpp"

namespace {

struct Subcommand {
  CLI::App* app = nullptr;
  std::string configPath;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(const std::string& key, const std::string& help) {
    options[key] = app->add_option("--" + key, values[key], help);
  }
};

// Axis lists legitimately start with a dash (`--domain -1:1,-1:1`), which
// argument splitting would otherwise read as an option cluster; fuse every
// value-taking flag with its argument up front.
std::vector<std::string> fuse_values(int argc, char** argv) {
  static const std::set<std::string> valueFlags = {
      "--n",     "--grid",   "--domain", "--weight",    "--rhs",
      "--tol",   "--max-iter", "--seed", "--trials",    "--levels",
      "--exclusion", "--output", "--config"};
  std::vector<std::string> out;
  for (int i = 1; i < argc; ++i) {
    std::string tok = argv[i];
    if (valueFlags.count(tok) != 0 && i + 1 < argc)
      out.push_back(tok + "=" + argv[++i]);
    else
      out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    diracl2::init_thread_cap_from_env();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"weighted-norm Dirac system verifier and solver"};
  app.require_subcommand(1);

  std::map<std::string, Subcommand> subs;

  const auto describe = [&](const std::string& name, const std::string& help,
                            const std::vector<std::string>& keys) {
    Subcommand& sc = subs[name];
    sc.app = app.add_subcommand(name, help);
    static const std::map<std::string, std::string> helpText = {
        {"n", "number of anticommuting generators (1..8)"},
        {"grid", "nodes per axis, e.g. 129,129"},
        {"domain", "axis ranges lo:hi, e.g. -1:1,-1:1"},
        {"weight", "zero | quadratic0 | aniso | axialpoly:c0,c1,..."},
        {"rhs", "zero | bump:<blade>[:margin=m][:scale=s][:center=a;b]"},
        {"tol", "solver relative-residual target"},
        {"max-iter", "solver iteration cap (0 = automatic)"},
        {"seed", "base seed for the deterministic trial streams"},
        {"trials", "random trials per identity"},
        {"levels", "refinement-ladder depth"},
        {"exclusion", "radius zeroed around the kernel singularity"},
        {"output", "also write the report to this file"},
    };
    for (const std::string& k : keys) sc.add(k, helpText.at(k));
    sc.app->add_option("--config", sc.configPath,
                       "flat key=value file; explicit flags win");
  };

  describe("verify", "run the exact identity suites and report JSON",
           {"n", "trials", "seed", "output"});
  describe("solve", "minimal-norm interior Dirac solve with bound report",
           {"n", "grid", "domain", "weight", "rhs", "tol", "max-iter",
            "output"});
  describe("kernel", "Cauchy-kernel monogenicity and weak-defect scan",
           {"n", "grid", "domain", "exclusion", "levels", "output"});
  describe("sweep", "grid-refinement ladder, CSV per level",
           {"n", "grid", "domain", "weight", "rhs", "tol", "max-iter",
            "levels", "output"});

  std::vector<std::string> args = fuse_values(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& [name, sc] : subs) {
    if (!sc.app->parsed()) continue;
    std::map<std::string, std::string> flags;
    for (const auto& [key, opt] : sc.options)
      if (opt->count() > 0) flags[key] = sc.values.at(key);
    diracl2::RunConfig cfg;
    try {
      cfg = diracl2::resolve_config(name, flags, sc.configPath);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
    const diracl2::RunResult res = diracl2::run_cli(cfg);
    std::cout << res.report;
    return res.exitCode;
  }
  std::cerr << "config error: no subcommand given\n";
  return 2;
}
