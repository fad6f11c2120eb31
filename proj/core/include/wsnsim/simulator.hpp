#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsnsim/energy.hpp"
#include "wsnsim/linkbudget.hpp"
#include "wsnsim/routing.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim {

enum class EnergyOrder { column_major, row_major };

struct TopologyConfig {
  LatticeKind kind = LatticeKind::square;
  int rows = 3;
  int cols = 3;
  double spacing_m = 150.0;
  double jitter_m = 0.0;
  bool fig3_layout = false;
  /// Unset: every node starts with EnergyParams::initial_energy_j.
  std::optional<double> min_energy_j;
  double energy_step_j = 0.0;
  EnergyOrder energy_order = EnergyOrder::column_major;
  std::map<NodeId, double> energy_overrides;

  bool operator==(const TopologyConfig&) const = default;
};

struct BatteryModel {
  double avg_current_a = 23.5e-3;
  double hours = 80.0;

  bool operator==(const BatteryModel&) const = default;
};

struct SimConfig {
  RadioParams radio;
  EnergyParams energy;
  PacketSpec packets;
  BatteryModel battery;
  TopologyConfig topology;
  RoutingConfig routing;
  NodeId source = -1;
  NodeId sink = -1;
  double interval_s = 300.0;
  double duration_s = 105000.0;
  std::uint64_t seed = 1;
  int queue_size = 150;
  double cw_s = 0.01;
  int mac_retry_limit = 32;
  double audit_interval_s = 60.0;
  /// Every frame in decode range is received; no collisions.
  bool ideal_channel = false;
  /// Control frames (RREQ/RREP/RERR) cost no energy.
  bool zero_cost_discovery = false;
  /// End the run at the first node death anywhere in the network.
  bool stop_at_first_death = false;

  bool operator==(const SimConfig&) const = default;
};

/// Throws ValidationError (topology) or std::invalid_argument.
void validate(const SimConfig& cfg);

/// Node placement and per-node initial energies resolved from a config.
struct Scenario {
  Topology topology;
  std::vector<double> initial_energy;
};

Scenario build_scenario(const SimConfig& cfg);

/// One established route of the source, from the first reply of a discovery
/// until it is invalidated or superseded.
struct RouteRecord {
  SeqNo seq = 0;
  std::vector<NodeId> path;
  double path_energy = 0.0;
  double adopted_at = 0.0;
  std::optional<double> retired_at;
  std::string retire_reason;
  int data_sent = 0;
  int data_delivered = 0;
  /// Packets the source put on this route before any of its nodes died.
  int data_sent_before_death = 0;
  /// Earliest death among nodes of `path` while the route was current.
  std::optional<double> first_on_path_death;
};

struct PartitionCheck {
  double time = 0.0;
  bool reachable = false;
};

struct RunStats {
  int packets_generated = 0;
  int packets_delivered = 0;
  double delivery_ratio = 0.0;
  int dropped_queue = 0;
  int dropped_no_route = 0;
  int dropped_link = 0;
  int discoveries = 0;
  std::vector<std::array<double, kEnergyCategories>> node_consumed;
  std::vector<double> node_initial;
  std::vector<double> node_residual;
  std::vector<std::optional<double>> death_time;
  std::array<double, kEnergyCategories> avg_consumed{};
  double avg_consumed_total = 0.0;
  std::vector<RouteRecord> routes;
  std::optional<double> partition_time;
  /// Every time discovery retries ran out, with the offline reachability result.
  std::vector<PartitionCheck> exhaustion_checks;
  double end_time = 0.0;
  double max_conservation_error = 0.0;
  int audits = 0;

  std::vector<int> route_transmission_counts() const;
  /// "7-4-8-1-5" for the route of the first discovery, or "" if none.
  std::string first_route() const;
  double total_consumed() const;
  /// Total consumed energy over delivered packets; +inf when nothing arrived.
  double energy_per_delivered() const;
};

struct RunResult {
  RunStats stats;
  std::string trace;  // empty unless tracing was requested
};

/// Runs one simulation. Identical (config, seed) give identical results and
/// byte-identical traces.
RunResult run(const SimConfig& cfg, bool trace = false);

/// Offline reachability between two nodes over alive nodes, using the decode
/// relation of the radio.
bool reachable(const Topology& topo, const RadioParams& radio, const std::vector<bool>& alive,
               NodeId from, NodeId to);

/// True when a frame from a to b can be decoded in isolation.
bool decodable(const RadioParams& radio, double distance_m);

std::string join_path(const std::vector<NodeId>& path);

}  // namespace wsnsim
