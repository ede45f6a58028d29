// sturmlab command line: run / validate scenario files, inspect bundled fixtures.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "sturmlab/cli/runner.hpp"
#include "sturmlab_fixtures.hpp"

namespace {

using namespace sturmlab;

// A scenario argument is a path if one exists, otherwise a bundled fixture name.
cli::Scenario resolve(const std::string& arg) {
  if (std::filesystem::exists(arg)) return cli::load_scenario(arg);
  for (const auto& f : fixtures::kAll)
    if (f.name == arg) return cli::load_scenario_text(std::string(f.text), "fixture:" + arg);
  throw cli::ScenarioError("no scenario file or bundled fixture named '" + arg + "' (try `fixtures list`)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillation comparison toolkit for phi' = f psi, psi' = -g phi"};
  app.set_version_flag("--version", cli::kToolVersion);
  app.require_subcommand(1);

  std::string scenario;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool summary = false, no_timings = false;

  auto* run = app.add_subcommand("run", "run every analysis of a scenario and write report.json");
  run->add_option("scenario", scenario, "scenario file or bundled fixture name")->required();
  run->add_option("--seed", seed, "seed for randomized analyses");
  run->add_option("--out", out_dir, "output directory (report.json, csv and dat files)");
  run->add_flag("--summary", summary, "print a human-readable summary instead of the JSON report");
  run->add_flag("--no-timings", no_timings, "omit timing fields so reports are byte-comparable");

  auto* validate = app.add_subcommand("validate", "parse and validate a scenario without running it");
  validate->add_option("scenario", scenario, "scenario file or bundled fixture name")->required();

  auto* fx = app.add_subcommand("fixtures", "bundled scenarios");
  fx->require_subcommand(1);
  auto* fx_list = fx->add_subcommand("list", "list bundled fixture names");
  std::string fx_name;
  auto* fx_show = fx->add_subcommand("show", "print a bundled fixture");
  fx_show->add_option("name", fx_name)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto sc = resolve(scenario);
      cli::RunOptions opt;
      opt.seed = seed;
      opt.timings = !no_timings;
      if (!out_dir.empty()) opt.out_dir = out_dir;
      const auto res = cli::run(sc, opt);
      if (summary)
        std::cout << cli::summarize(res.report);
      else
        std::cout << res.report.dump(2) << "\n";
      return res.exit_code();
    }
    if (*validate) {
      const auto sc = resolve(scenario);
      std::cout << "ok: " << sc.name << " (" << sc.systems.size() << " systems, " << sc.solutions.size()
                << " solutions, " << sc.analyses.size() << " analyses)\n";
      return 0;
    }
    if (*fx_list) {
      for (const auto& f : fixtures::kAll) std::cout << f.name << "\n";
      return 0;
    }
    if (*fx_show) {
      for (const auto& f : fixtures::kAll)
        if (f.name == fx_name) {
          std::cout << f.text;
          return 0;
        }
      std::cerr << "error: no bundled fixture '" << fx_name << "'\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
