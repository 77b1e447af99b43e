#pragma once

// Pipeline orchestration: equilibrium -> spectrum -> manifold -> experiments,
// with upstream artifacts memoised as JSON in the output directory.

#include <filesystem>
#include <string>
#include <vector>

#include "spall/continuation.hpp"

namespace spall {

struct RunConfig {
  int grid_n = 128;
  int expansion_order = 8;
  Complex tau = 0.02;
  EvolveOptions options;
  std::filesystem::path output_dir = "spall-out";
  std::vector<std::string> experiment_list;
  /// Highest pipeline stage to run when experiment_list is empty:
  /// "equilibrium", "spectrum" or "manifold".
  std::string last_stage = "spectrum";

  /// Throws UsageError with a message naming the offending field.
  void validate() const;
};

/// Applies `key = value` lines from a flat config file on top of `base`.
/// Blank lines and lines starting with '#' are ignored. Keys: n, order, tau,
/// rel_tol, dt_init, dt_min, blowup_threshold, snapshot_stride, out,
/// experiments (comma separated).
RunConfig load_config_file(const std::filesystem::path& file, RunConfig base = {});

/// Parses "re,im" or "re".
Complex parse_complex(const std::string& text);

/// Exit status: 0 when every requested experiment passes, 1 when some verdict
/// is fail, 2 when a pipeline stage throws (the stage is named on stderr).
int run(const RunConfig& config);

/// Seeds the manifold at config.tau and evolves along the path file, writing
/// trajectory.csv, one field CSV per snapshot and run.json into
/// output_dir/evolve. Same exit convention as run().
int run_evolve(const RunConfig& config, const std::filesystem::path& path_file);

}  // namespace spall
