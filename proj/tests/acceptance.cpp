#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "chenmap/errors.hpp"
#include "chenmap/scenario_io.hpp"
#include "chenmap/selftest.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kCli = CHENMAP_CLI_PATH;
const std::string kScenario = std::string(CHENMAP_SCENARIO_DIR) + "/odd_sphere_contact.json";

std::string quoted(const std::string& s) { return "'" + s + "'"; }

// Runs the CLI with a thread cap and returns its exit status, or -1 when it could not run.
int run_cli(const std::string& threads, const std::string& format, const fs::path& out) {
  const std::string cmd = "CHENMAP_THREADS=" + threads + " " + quoted(kCli) + " verify --scenario " +
                          quoted(kScenario) + " --format " + format + " --seed 20240601 --out " +
                          quoted(out.string()) + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

// Two CLI runs with different thread caps must produce byte-identical reports.
chenmap::CriterionResult cli_determinism(chenmap::CriterionResult lib) {
  const fs::path dir = fs::temp_directory_path() / ("chenmap_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string detail;
  bool ok = true;
  for (const char* format : {"json", "csv"}) {
    const fs::path a = dir / (std::string("serial.") + format);
    const fs::path b = dir / (std::string("parallel.") + format);
    const int ea = run_cli("1", format, a);
    const int eb = run_cli("8", format, b);
    bool same = false;
    if (ea >= 0 && ea == eb && fs::exists(a) && fs::exists(b)) {
      try {
        same = chenmap::read_text_file(a.string()) == chenmap::read_text_file(b.string());
      } catch (const chenmap::GeometryError&) {
        same = false;
      }
    }
    ok = ok && same;
    detail += std::string("; cli ") + format + " 1 vs 8 threads " + (same ? "identical" : "DIFFERENT") +
              " (exit " + std::to_string(ea) + "/" + std::to_string(eb) + ")";
  }
  fs::remove_all(dir);
  lib.passed = lib.passed && ok;
  lib.detail += detail;
  return lib;
}

}  // namespace

int main() {
  const auto suite = chenmap::acceptance_suite();
  int failed = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    chenmap::CriterionResult r;
    try {
      r = suite[i]();
    } catch (const std::exception& e) {
      r.id = static_cast<int>(i) + 1;
      r.title = "criterion";
      r.passed = false;
      r.detail = std::string("uncaught exception: ") + e.what();
    }
    if (r.id == 9) r = cli_determinism(r);
    if (!r.passed) ++failed;
    std::cout << chenmap::format_result(r) << std::endl;
  }
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
