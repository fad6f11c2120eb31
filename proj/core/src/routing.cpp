#include "wsnsim/routing.hpp"

#include <algorithm>

namespace wsnsim {

const char* to_string(RoutingMode m) { return m == RoutingMode::aodv ? "aodv" : "newaodv"; }

std::optional<RoutingMode> parse_routing_mode(const std::string& s) {
  if (s == "aodv") return RoutingMode::aodv;
  if (s == "newaodv") return RoutingMode::newaodv;
  return std::nullopt;
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::none: return "none";
    case DropReason::duplicate: return "duplicate";
    case DropReason::stale_seq: return "stale_seq";
    case DropReason::ttl_exceeded: return "ttl_exceeded";
    case DropReason::own_request: return "own_request";
    case DropReason::no_reverse_route: return "no_reverse_route";
    case DropReason::not_improving: return "not_improving";
  }
  return "?";
}

double rebroadcast_delay(RoutingMode mode, const RoutingConfig& cfg, Rng& rng) {
  const double base =
      mode == RoutingMode::newaodv ? cfg.rebroadcast_delay_newaodv_s : cfg.rebroadcast_delay_aodv_s;
  if (cfg.jitter_max_s <= 0.0) return base;
  return base + rng.uniform(0.0, cfg.jitter_max_s);
}

RoutingAgent::RoutingAgent(NodeId self, RoutingMode mode, int ttl) : self_(self), mode_(mode), ttl_(ttl) {}

bool RoutingAgent::improves(int hops, double energy, int stored_hops, double stored_energy) const {
  if (hops < stored_hops) return true;
  // Equal hops and equal energy keep the incumbent.
  return mode_ == RoutingMode::newaodv && hops == stored_hops && energy > stored_energy;
}

Rreq RoutingAgent::originate_rreq(NodeId destination, double residual_j) {
  auto& d = discoveries_[destination];
  d.seq = ++next_seq_;
  d.in_progress = true;
  d.answered = false;
  Rreq r;
  r.source = self_;
  r.destination = destination;
  r.seq = d.seq;
  r.hop_count = 0;
  r.accumulated_energy = residual_j;
  r.ttl = ttl_;
  r.traversed = {self_};
  return r;
}

RreqDecision RoutingAgent::handle_rreq(const Rreq& rreq, NodeId previous_hop, double residual_j) {
  RreqDecision out;
  if (rreq.source == self_) {
    out.reason = DropReason::own_request;
    return out;
  }
  const int hops = rreq.hop_count + 1;
  if (rreq.hop_count > rreq.ttl || hops > rreq.ttl) {
    out.reason = DropReason::ttl_exceeded;
    return out;
  }
  const double energy = rreq.accumulated_energy + residual_j;

  auto it = reverse_.find(rreq.source);
  if (it != reverse_.end()) {
    const auto& stored = it->second;
    if (rreq.seq < stored.seq) {
      out.reason = DropReason::stale_seq;
      return out;
    }
    if (rreq.seq == stored.seq && !improves(hops, energy, stored.hop_count, stored.path_energy)) {
      out.reason = DropReason::duplicate;
      return out;
    }
  }
  reverse_[rreq.source] = ReverseRouteEntry{rreq.source, previous_hop, hops, rreq.seq, energy};

  if (rreq.destination == self_) {
    out.verdict = RreqDecision::Verdict::answer;
    out.reply.source = rreq.source;
    out.reply.destination = self_;
    out.reply.seq = rreq.seq;
    out.reply.hop_count = 0;
    out.reply.path_energy = energy;
    out.reply.path = {self_};
    out.reply_next_hop = previous_hop;
    return out;
  }
  out.verdict = RreqDecision::Verdict::forward;
  out.forwarded = rreq;
  out.forwarded.hop_count = hops;
  out.forwarded.accumulated_energy = energy;
  out.forwarded.traversed.push_back(self_);
  return out;
}

RrepDecision RoutingAgent::handle_rrep(const Rrep& rrep, NodeId from) {
  RrepDecision out;
  const int hops = rrep.hop_count + 1;
  std::vector<NodeId> path = rrep.path;
  path.push_back(self_);
  std::vector<NodeId> forward_path(path.rbegin(), path.rend());

  auto install = [&](bool force) {
    auto& r = routes_[rrep.destination];
    const bool better = force || !r.valid || r.seq != rrep.seq ||
                        improves(hops, rrep.path_energy, r.hop_count, r.path_energy);
    if (!better) return false;
    r = RouteEntry{rrep.destination, from, hops, rrep.seq, rrep.path_energy, true, forward_path};
    return true;
  };

  if (rrep.source == self_) {
    auto dit = discoveries_.find(rrep.destination);
    if (dit == discoveries_.end() || dit->second.seq != rrep.seq) {
      out.verdict = RrepDecision::Verdict::ignored;
      out.reason = DropReason::stale_seq;
      return out;
    }
    auto& d = dit->second;
    const auto rit = routes_.find(rrep.destination);
    const bool fresh = rit == routes_.end() || !rit->second.valid || rit->second.seq != rrep.seq;
    if (!install(fresh)) {
      out.verdict = RrepDecision::Verdict::ignored;
      out.reason = DropReason::not_improving;
      return out;
    }
    out.verdict = RrepDecision::Verdict::adopted;
    out.first_for_seq = !d.answered;
    d.answered = true;
    d.in_progress = false;
    d.failures = 0;
    return out;
  }

  auto rev = reverse_.find(rrep.source);
  if (rev == reverse_.end()) {
    out.reason = DropReason::no_reverse_route;
    return out;
  }
  install(false);
  out.verdict = RrepDecision::Verdict::relay;
  out.relayed = rrep;
  out.relayed.hop_count = hops;
  out.relayed.path = std::move(path);
  out.next_hop = rev->second.previous_hop;
  return out;
}

ForwardDecision RoutingAgent::forward_data(NodeId destination) const {
  auto it = routes_.find(destination);
  if (it == routes_.end() || !it->second.valid) return {};
  return {ForwardDecision::Verdict::sent, it->second.next_hop};
}

void RoutingAgent::invalidate_route(NodeId destination) {
  auto it = routes_.find(destination);
  if (it != routes_.end()) it->second.valid = false;
}

RerrDecision RoutingAgent::report_link_failure(NodeId destination, NodeId data_source) {
  invalidate_route(destination);
  if (data_source == self_) return {RerrDecision::Verdict::rediscover, -1};
  auto rev = reverse_.find(data_source);
  if (rev == reverse_.end()) return {};
  return {RerrDecision::Verdict::relay, rev->second.previous_hop};
}

RerrDecision RoutingAgent::handle_rerr(const Rerr& rerr) {
  return report_link_failure(rerr.unreachable_destination, rerr.source);
}

bool RoutingAgent::discovering(NodeId destination) const {
  auto it = discoveries_.find(destination);
  return it != discoveries_.end() && it->second.in_progress && !it->second.answered;
}

DiscoveryTimeout RoutingAgent::on_discovery_timeout(NodeId destination, SeqNo seq, int max_retries) {
  auto it = discoveries_.find(destination);
  if (it == discoveries_.end()) return DiscoveryTimeout::stale;
  auto& d = it->second;
  if (d.seq != seq || d.answered || !d.in_progress) return DiscoveryTimeout::stale;
  d.in_progress = false;
  ++d.failures;
  return d.failures >= max_retries ? DiscoveryTimeout::exhausted : DiscoveryTimeout::retry;
}

void RoutingAgent::reset_discovery(NodeId destination) {
  auto& d = discoveries_[destination];
  d.failures = 0;
  d.in_progress = false;
}

int RoutingAgent::failed_discoveries(NodeId destination) const {
  auto it = discoveries_.find(destination);
  return it == discoveries_.end() ? 0 : it->second.failures;
}

const RouteEntry* RoutingAgent::route(NodeId destination) const {
  auto it = routes_.find(destination);
  return it == routes_.end() ? nullptr : &it->second;
}

const ReverseRouteEntry* RoutingAgent::reverse(NodeId origin) const {
  auto it = reverse_.find(origin);
  return it == reverse_.end() ? nullptr : &it->second;
}

}  // namespace wsnsim
