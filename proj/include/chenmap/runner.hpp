#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chenmap/delta.hpp"
#include "chenmap/scenario_io.hpp"

namespace chenmap {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  double tolerance_scale = 1.0;
  bool timing = false;                // record wall time in the provenance block
  std::optional<SearchOptions> search;
  std::optional<std::vector<std::string>> checks;  // replaces the scenario check list
  int threads = 0;                    // 0 = CHENMAP_THREADS or the hardware default
};

// Worker count from an explicit request, then CHENMAP_THREADS, then the hardware.
int worker_count(int requested = 0);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

RunReport run_checks(const ScenarioFile& sf, const RunOptions& opts = {});

// 0 all holds, 1 any violation, 2 configuration error, 3 engine error or skipped records.
int exit_code(const RunReport& report);

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEngine = 3;

}  // namespace chenmap
