// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo harness: random cell-model channels over a sweep of support
// measures, one BoundReport per draw, written as CSV.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltv/channel.hpp"
#include "ltv/error_bounds.hpp"

namespace ltv {

struct ExperimentConfig {
  int k_grid = 10;
  std::vector<double> u_measures{0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
  int trials = 20;
  std::uint64_t seed = 1;
  ErrorConfig error;
  int subdiv = 4;
  int n_samples = 256;
  double dt = 0.0625;
  Placement placement = Placement::centered;
  int threads = 1;
  bool timing = false;  ///< fill the wall_time_s column

  /// Throws std::invalid_argument.
  void validate() const;
  /// seed + 1000 u_index + trial_index
  std::uint64_t trial_seed(std::size_t u_index, int trial_index) const;
};

struct TrialRecord {
  double u_measure = 0;
  int u_index = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  /// Empty when the trial failed; `error` then holds the reason.
  std::optional<BoundReport> report;
  std::string error;
  std::optional<double> wall_time;
};

/// Records ordered by (u_index, trial) whatever the thread count.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

/// Column names in output order.
const std::vector<std::string>& csv_columns();

std::string format_csv(const std::vector<TrialRecord>& records);
/// Throws IoError carrying the path.
void emit_csv(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> parse_csv(const std::string& text);

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ltv
