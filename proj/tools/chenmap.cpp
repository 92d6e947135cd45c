#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "chenmap/catalog.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/runner.hpp"
#include "chenmap/scenario_io.hpp"
#include "chenmap/selftest.hpp"

namespace {

using namespace chenmap;

struct ReportArgs {
  std::string scenario;
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tolerance_scale = 1.0;
  bool timing = false;
};

void add_report_options(CLI::App* cmd, ReportArgs& a) {
  cmd->add_option("--scenario", a.scenario, "scenario JSON file")->required();
  cmd->add_option("--format", a.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", a.out, "report path (default: standard output)");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&a](std::uint64_t s) { a.seed = s; a.seed_set = true; }, "override the scenario seed");
  cmd->add_option("--tolerance-scale", a.tolerance_scale, "multiply every tolerance")->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", a.timing, "record wall time in the report");
}

int run_report(const ScenarioFile& sf, const ReportArgs& a, RunOptions opts) {
  if (a.seed_set) opts.seed = a.seed;
  opts.tolerance_scale = a.tolerance_scale;
  opts.timing = a.timing;
  const RunReport report = run_checks(sf, opts);
  emit_report(report, a.format == "csv" ? ReportFormat::Csv : ReportFormat::Json, a.out);
  const Summary s = report.summary();
  std::cerr << s.records << " records: " << s.holds << " hold, " << s.violations << " violated, " << s.errors
            << " errors, " << s.skipped << " skipped\n";
  return exit_code(report);
}

// Extras beyond the required set are marked with '+'.
int run_catalog() {
  const std::vector<CatalogListing> listings = list_builtins();
  std::size_t width = 0;
  for (const CatalogListing& l : listings) width = std::max(width, l.name.size());
  for (const CatalogListing& l : listings)
    std::cout << (l.required ? "  " : "+ ") << std::left << std::setw(static_cast<int>(width)) << l.name << "  "
              << l.description << "\n";
  return kExitOk;
}

int run_selftest(std::uint64_t seed) {
  bool ok = true;
  for (const auto& suite : {acceptance_suite(seed), property_suite(seed)}) {
    for (const auto& check : suite) {
      const CriterionResult r = check();
      ok = ok && r.passed;
      std::cout << format_result(r) << std::endl;
    }
  }
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Chen-type inequalities for Riemannian maps"};
  app.require_subcommand(1);

  ReportArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "evaluate the checks of a scenario and emit a report");
  add_report_options(verify, verify_args);

  CLI::App* catalog = app.add_subcommand("catalog", "list built-in scenarios");

  ReportArgs delta_args;
  std::string mode;
  int budget = 0;
  CLI::App* delta = app.add_subcommand("delta", "evaluate the delta-invariant bounds of a scenario");
  add_report_options(delta, delta_args);
  delta->add_option("--mode", mode, "plane search")->required()->check(CLI::IsMember({"exhaustive", "multistart"}));
  delta->add_option("--budget", budget, "grid samples per angle or number of starts")
      ->required()
      ->check(CLI::Range(1, 1 << 20));

  std::uint64_t selftest_seed = kSelftestSeed;
  CLI::App* selftest = app.add_subcommand("selftest", "run the property suite");
  selftest->add_option("--seed", selftest_seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*verify) return run_report(load_scenario(verify_args.scenario), verify_args, {});
    if (*catalog) return run_catalog();
    if (*delta) {
      RunOptions opts;
      SearchOptions search;
      search.mode = mode == "exhaustive" ? SearchMode::ExhaustiveGrid : SearchMode::MultistartLocal;
      search.mode_set = true;
      search.budget = budget;
      opts.search = search;
      const ScenarioFile sf = load_scenario(delta_args.scenario);
      std::vector<std::string> checks{"delta"};
      for (const std::string& c : sf.checks)
        if (c == "harmonic") checks.push_back(c);
      opts.checks = checks;
      return run_report(sf, delta_args, opts);
    }
    if (*selftest) return run_selftest(selftest_seed);
  } catch (const GeometryError& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_configuration_error(e.code()) ? kExitConfig : kExitEngine;
  }
  return kExitConfig;
}
