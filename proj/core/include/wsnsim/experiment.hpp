#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/simulator.hpp"

namespace wsnsim {

/// "3..7" or "5". Inclusive on both ends.
std::optional<std::vector<std::uint64_t>> parse_seed_range(std::string_view text);
/// "aodv,newaodv".
std::optional<std::vector<RoutingMode>> parse_modes(std::string_view text);

struct ExperimentRow {
  std::uint64_t seed = 0;
  RoutingMode mode = RoutingMode::newaodv;
  RunStats stats;
};

struct ModeSummary {
  RoutingMode mode = RoutingMode::newaodv;
  int runs = 0;
  double delivery_ratio = 0.0;
  double generated = 0.0;
  double delivered = 0.0;
  double avg_consumed_j = 0.0;
  double avg_idle_j = 0.0;
  double avg_tx_j = 0.0;
  double avg_rx_j = 0.0;
  double avg_sleep_j = 0.0;
  double discoveries = 0.0;
  /// Mean over runs of total consumed energy per delivered packet; runs that
  /// delivered nothing are skipped.
  double energy_per_delivered_j = 0.0;
};

struct Experiment {
  std::vector<ExperimentRow> rows;  // (seed, mode) order
  std::vector<ModeSummary> summary; // one per mode, in the requested order
};

/// Runs every (seed, mode) cell. `threads` > 1 fans cells out; results are
/// assembled in (seed, mode) order regardless.
Experiment run_experiment(const SimConfig& base, const std::vector<std::uint64_t>& seeds,
                          const std::vector<RoutingMode>& modes, unsigned threads = 1);

/// Columns: seed,mode,delivery_ratio,generated,delivered,avg_consumed_j,
/// avg_idle_j,avg_tx_j,avg_rx_j,avg_sleep_j,discoveries,route_tx_counts,
/// first_route,partition_time_s. Summary rows carry "mean" in the seed column.
std::string to_csv(const Experiment& e);

}  // namespace wsnsim
