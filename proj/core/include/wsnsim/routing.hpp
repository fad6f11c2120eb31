#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsnsim/rng.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim {

enum class RoutingMode { aodv, newaodv };

const char* to_string(RoutingMode m);
std::optional<RoutingMode> parse_routing_mode(const std::string& s);

using SeqNo = std::uint32_t;

struct RoutingConfig {
  RoutingMode mode = RoutingMode::newaodv;
  int ttl = 0;  // 0: node count - 1
  double rebroadcast_delay_newaodv_s = 0.05;
  double rebroadcast_delay_aodv_s = 0.01;
  double jitter_max_s = 0.005;
  double discovery_timeout_s = 5.0;
  int max_discovery_retries = 3;
  double ack_timeout_s = 1.0;
  int data_retries = 3;

  bool operator==(const RoutingConfig&) const = default;
};

/// Base rebroadcast delay for the mode plus uniform jitter in [0, jitter_max].
double rebroadcast_delay(RoutingMode mode, const RoutingConfig& cfg, Rng& rng);

struct Rreq {
  NodeId source = -1;
  NodeId destination = -1;
  SeqNo seq = 0;
  int hop_count = 0;
  double accumulated_energy = 0.0;
  int ttl = 0;
  /// Nodes that processed this copy, source first.
  std::vector<NodeId> traversed;
};

struct Rrep {
  NodeId source = -1;       // originator of the request
  NodeId destination = -1;  // node that answered
  SeqNo seq = 0;
  int hop_count = 0;        // hops from destination to the current holder
  double path_energy = 0.0;
  /// Nodes the reply has visited, destination first.
  std::vector<NodeId> path;
};

struct Rerr {
  NodeId unreachable_destination = -1;
  NodeId failure_origin = -1;
  NodeId source = -1;  // data source that must rediscover
};

struct RouteEntry {
  NodeId destination = -1;
  NodeId next_hop = -1;
  int hop_count = 0;
  SeqNo seq = 0;
  double path_energy = 0.0;
  bool valid = false;
  /// Full hop sequence from this node to the destination when known.
  std::vector<NodeId> path;
};

struct ReverseRouteEntry {
  NodeId origin = -1;
  NodeId previous_hop = -1;
  int hop_count = 0;
  SeqNo seq = 0;
  double path_energy = 0.0;
};

enum class DropReason { none, duplicate, stale_seq, ttl_exceeded, own_request, no_reverse_route, not_improving };

const char* to_string(DropReason r);

struct RreqDecision {
  enum class Verdict { forward, answer, drop } verdict = Verdict::drop;
  DropReason reason = DropReason::none;
  Rreq forwarded;          // valid when verdict == forward
  Rrep reply;              // valid when verdict == answer
  NodeId reply_next_hop = -1;
};

struct RrepDecision {
  enum class Verdict { relay, adopted, ignored, drop } verdict = Verdict::drop;
  DropReason reason = DropReason::none;
  Rrep relayed;            // valid when verdict == relay
  NodeId next_hop = -1;
  bool first_for_seq = false;  // adopted: first reply of this discovery
};

struct ForwardDecision {
  enum class Verdict { sent, no_route } verdict = Verdict::no_route;
  NodeId next_hop = -1;
};

struct RerrDecision {
  enum class Verdict { relay, rediscover, drop } verdict = Verdict::drop;
  NodeId next_hop = -1;
};

enum class DiscoveryTimeout { stale, retry, exhausted };

/// Route-discovery state machine of one node. Transitions are pure with
/// respect to the radio: callers supply the node's residual energy and
/// carry out the emissions.
class RoutingAgent {
 public:
  RoutingAgent(NodeId self, RoutingMode mode, int ttl);

  NodeId id() const { return self_; }
  RoutingMode mode() const { return mode_; }

  /// Starts a discovery with a fresh sequence number. The source's own
  /// residual seeds the accumulated energy.
  Rreq originate_rreq(NodeId destination, double residual_j);

  RreqDecision handle_rreq(const Rreq& rreq, NodeId previous_hop, double residual_j);
  RrepDecision handle_rrep(const Rrep& rrep, NodeId from);

  ForwardDecision forward_data(NodeId destination) const;

  /// Next hop toward `destination` failed to acknowledge. Invalidates the
  /// route and says where the error goes (upstream, or rediscover here).
  RerrDecision report_link_failure(NodeId destination, NodeId data_source);
  RerrDecision handle_rerr(const Rerr& rerr);

  void invalidate_route(NodeId destination);

  /// Discovery bookkeeping at the source.
  bool discovering(NodeId destination) const;
  DiscoveryTimeout on_discovery_timeout(NodeId destination, SeqNo seq, int max_retries);
  void reset_discovery(NodeId destination);
  int failed_discoveries(NodeId destination) const;

  const RouteEntry* route(NodeId destination) const;
  const ReverseRouteEntry* reverse(NodeId origin) const;

 private:
  struct Discovery {
    SeqNo seq = 0;
    bool in_progress = false;
    bool answered = false;
    int failures = 0;
  };

  bool improves(int hops, double energy, int stored_hops, double stored_energy) const;

  NodeId self_;
  RoutingMode mode_;
  int ttl_;
  SeqNo next_seq_ = 0;
  std::map<NodeId, RouteEntry> routes_;
  std::map<NodeId, ReverseRouteEntry> reverse_;
  std::map<NodeId, Discovery> discoveries_;
};

}  // namespace wsnsim
