#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dpc/instance.hpp"

namespace dpc {

// Monte Carlo sweep over a grid of equal per-user rate targets.  All
// selected methods run on the identical instance per (grid point, trial),
// and output is a pure function of the config regardless of threading.
struct SweepConfig {
  int num_users = 3;
  int num_tx_antennas = 3;
  std::vector<double> rate_grid;  // strictly positive and increasing
  int trials = 1000;
  std::uint64_t master_seed = 1;
  std::vector<std::string> methods;  // subset of {random, heuristic,
                                     //  exhaustive, relaxation}
  double tol = 1e-6;
  int max_iters = 2000;
  bool record_timing = false;  // timing column emits -1 when off, keeping
                               // CSV bytes reproducible
  int threads = 1;
  std::string output_path;

  void validate() const;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::string& path);

struct SweepRow {
  double rate_target = 0.0;
  std::string method;
  int trial = 0;
  std::uint64_t seed = 0;
  double sum_power = 0.0;     // linear
  double sum_power_db = 0.0;  // 10*log10(linear)
  int iterations = 0;
  std::string termination;
  bool time_sharing = false;
  double wall_time_ms = -1.0;
};

// splitmix64 mixing of (master seed, grid index, trial index); adding
// trials or grid points never perturbs earlier seeds.
std::uint64_t derive_trial_seed(std::uint64_t master_seed,
                                std::size_t grid_index,
                                std::size_t trial_index);

std::vector<SweepRow> run_sweep(const SweepConfig& config);

// CSV: header row, comma separated, LF line endings, '.' decimal point,
// %.17g doubles.  A per-method summary block (mean linear power rendered in
// dB, mean taken before the dB map) follows the data as '#' comment lines.
std::string sweep_to_csv(const SweepConfig& config,
                         const std::vector<SweepRow>& rows);

}  // namespace dpc
