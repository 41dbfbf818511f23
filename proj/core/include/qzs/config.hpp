#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qzs/experiments.hpp"

namespace qzs {

/// Validated run configuration. See README for the key list.
struct RunConfig {
  int stages = 2;
  ScenarioSpec scenario{};
  double tau = 0.0;
  std::size_t diagnostics_stride = 1;
  std::size_t snapshot_stride = 0;
  double fp_tol = 1e-14;
  int fp_max_iters = 30;
  NonconvergencePolicy policy = NonconvergencePolicy::abort;
  bool track_q = false;
  std::string output_dir = "out";
  /// From the config file; takes precedence over QZS_THREADS.
  std::optional<unsigned> threads;

  // Convergence studies.
  int levels = 4;
  double h0 = 1.0;
  std::vector<double> eps_list;
  int reference_stages = 3;
  double reference_tau = 1e-3;

  RunOptions run_options() const;
  SimulationOptions simulation_options() const;
};

/// Parses flat `key = value` text with `#` comments. Throws ConfigError
/// naming the offending line for unknown, duplicate, malformed or missing keys.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Config value if set, else QZS_THREADS, else 1.
unsigned effective_threads(const RunConfig& cfg);

}  // namespace qzs
