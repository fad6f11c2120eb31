#include "wsnsim/simulator.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>
#include <variant>

#include "wsnsim/event_queue.hpp"
#include "wsnsim/rng.hpp"

namespace wsnsim {

void validate(const SimConfig& cfg) {
  validate(cfg.radio);
  validate(cfg.energy);
  if (!(cfg.interval_s > 0.0)) throw std::invalid_argument("sim: interval_s must be positive");
  if (!(cfg.duration_s >= 0.0)) throw std::invalid_argument("sim: duration_s must be non-negative");
  if (cfg.queue_size < 1) throw std::invalid_argument("sim: queue_size must be >= 1");
  if (cfg.cw_s < 0.0) throw std::invalid_argument("sim: cw_s must be non-negative");
  if (cfg.mac_retry_limit < 0) throw std::invalid_argument("sim: mac_retry_limit must be >= 0");
  if (!(cfg.audit_interval_s > 0.0)) throw std::invalid_argument("sim: audit_interval_s must be positive");
  const auto& r = cfg.routing;
  if (r.ttl < 0) throw std::invalid_argument("routing: ttl must be >= 0");
  if (r.rebroadcast_delay_aodv_s < 0.0 || r.rebroadcast_delay_newaodv_s < 0.0 || r.jitter_max_s < 0.0) {
    throw std::invalid_argument("routing: delays must be non-negative");
  }
  if (!(r.discovery_timeout_s > 0.0)) throw std::invalid_argument("routing: discovery_timeout_s must be positive");
  if (r.max_discovery_retries < 1) throw std::invalid_argument("routing: max_discovery_retries must be >= 1");
  if (!(r.ack_timeout_s > 0.0)) throw std::invalid_argument("routing: ack_timeout_s must be positive");
  if (r.data_retries < 0) throw std::invalid_argument("routing: data_retries must be >= 0");
  const int n = cfg.topology.rows * cfg.topology.cols;
  if (cfg.source < 0 || cfg.source >= n) throw std::invalid_argument("sim: source id out of range");
  if (cfg.sink < 0 || cfg.sink >= n) throw std::invalid_argument("sim: sink id out of range");
  if (cfg.source == cfg.sink) throw std::invalid_argument("sim: source and sink must differ");
  if (cfg.topology.fig3_layout && (cfg.topology.rows != 3 || cfg.topology.cols != 3)) {
    throw ValidationError("topology: the fig3 layout needs a 3x3 square grid");
  }
  (void)build_scenario(cfg);
}

Scenario build_scenario(const SimConfig& cfg) {
  const auto& t = cfg.topology;
  GridSpec spec;
  spec.rows = t.rows;
  spec.cols = t.cols;
  spec.spacing_m = t.spacing_m;
  spec.antenna_height_m = cfg.radio.antenna_height_tx_m;
  spec.hearing_range_m = cfg.radio.decode_range_m;
  if (t.fig3_layout) spec.id_layout = fig3_layout();
  Scenario s;
  s.topology = t.kind == LatticeKind::square ? square_grid(spec) : hexagonal(spec);
  if (t.jitter_m > 0.0) s.topology = jitter(s.topology, t.jitter_m, cfg.seed);

  EnergyAssignment a;
  a.min_energy_j = t.min_energy_j.value_or(cfg.energy.initial_energy_j);
  a.step_j = t.min_energy_j ? t.energy_step_j : 0.0;
  a.ordering = t.energy_order == EnergyOrder::column_major ? column_major_order(s.topology)
                                                            : row_major_order(s.topology);
  a.overrides = t.energy_overrides;
  s.initial_energy = assign_energies(s.topology, a);
  return s;
}

bool decodable(const RadioParams& radio, double distance_m) {
  return distance_m <= radio.decode_range_m && two_ray_rx_power(radio, distance_m) >= radio.rx_threshold_w;
}

bool reachable(const Topology& topo, const RadioParams& radio, const std::vector<bool>& alive, NodeId from,
               NodeId to) {
  const auto n = topo.size();
  if (!alive.at(static_cast<std::size_t>(from)) || !alive.at(static_cast<std::size_t>(to))) return false;
  std::vector<bool> seen(n, false);
  std::queue<NodeId> q;
  q.push(from);
  seen[static_cast<std::size_t>(from)] = true;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    if (u == to) return true;
    for (std::size_t v = 0; v < n; ++v) {
      if (seen[v] || !alive[v]) continue;
      if (decodable(radio, distance(topo.at(u).position, topo.nodes[v].position))) {
        seen[v] = true;
        q.push(static_cast<NodeId>(v));
      }
    }
  }
  return false;
}

std::string join_path(const std::vector<NodeId>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(path[i]);
  }
  return s;
}

std::vector<int> RunStats::route_transmission_counts() const {
  std::vector<int> out;
  out.reserve(routes.size());
  for (const auto& r : routes) out.push_back(r.data_sent);
  return out;
}

std::string RunStats::first_route() const { return routes.empty() ? std::string() : join_path(routes.front().path); }

double RunStats::total_consumed() const {
  double s = 0.0;
  for (const auto& split : node_consumed) {
    for (double c : split) s += c;
  }
  return s;
}

double RunStats::energy_per_delivered() const {
  if (packets_delivered == 0) return std::numeric_limits<double>::infinity();
  return total_consumed() / packets_delivered;
}

namespace {

struct DataPacket {
  std::uint64_t id = 0;
  NodeId source = -1;
  NodeId sink = -1;
  double created = 0.0;
  std::vector<NodeId> hops;
  int attempts = 0;
  int route_index = -1;
};

using Body = std::variant<Rreq, Rrep, Rerr, DataPacket>;

const char* kind_name(const Body& b) {
  switch (b.index()) {
    case 0: return "RREQ";
    case 1: return "RREP";
    case 2: return "RERR";
    default: return "DATA";
  }
}

struct Frame {
  std::uint64_t uid = 0;
  NodeId sender = -1;
  NodeId receiver = -1;  // -1: broadcast
  Body body;
  bool is_control() const { return !std::holds_alternative<DataPacket>(body); }
};

struct Transmission {
  Frame frame;
  double start = 0.0;
  double end = 0.0;
  double duration = 0.0;
  bool corrupt = false;
};

struct EvTxAttempt { NodeId node; };
struct EvTxEnd { std::size_t tx; };
struct EvRxDeliver { NodeId node; std::size_t tx; };
struct EvRebroadcast { NodeId node; Rreq rreq; };
struct EvAckTimeout { NodeId node; std::uint64_t uid; };
struct EvDiscoveryTimeout { NodeId node; NodeId destination; SeqNo seq; };
struct EvTraffic {};
struct EvAudit {};

using Payload =
    std::variant<EvTxAttempt, EvTxEnd, EvRxDeliver, EvRebroadcast, EvAckTimeout, EvDiscoveryTimeout, EvTraffic, EvAudit>;

struct NodeRt {
  EnergyMeter meter;
  double last_accounted = 0.0;
  bool dead = false;
  RoutingAgent agent;
  std::deque<Frame> mac_queue;
  bool mac_busy = false;
  int backoffs = 0;
};

struct PendingAck {
  Frame frame;
  bool acked = false;
};

class Engine {
 public:
  Engine(const SimConfig& cfg, bool trace) : cfg_(cfg), tracing_(trace), rng_(cfg.seed) {
    validate(cfg_);
    scenario_ = build_scenario(cfg_);
    n_ = scenario_.topology.size();
    const int ttl = cfg_.routing.ttl > 0 ? cfg_.routing.ttl : static_cast<int>(n_) - 1;
    for (std::size_t i = 0; i < n_; ++i) {
      nodes_.push_back(NodeRt{EnergyMeter(scenario_.initial_energy[i]), 0.0, false,
                              RoutingAgent(static_cast<NodeId>(i), cfg_.routing.mode, ttl), {}, false, 0});
    }
    dist_.assign(n_ * n_, 0.0);
    power_.assign(n_ * n_, 0.0);
    decode_.assign(n_ * n_, false);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j) continue;
        const double d = distance(scenario_.topology.nodes[i].position, scenario_.topology.nodes[j].position);
        dist_[i * n_ + j] = d;
        power_[i * n_ + j] = two_ray_rx_power(cfg_.radio, d);
        decode_[i * n_ + j] = decodable(cfg_.radio, d);
      }
    }
    stats_.death_time.assign(n_, std::nullopt);
  }

  RunResult execute() {
    const auto report = neighbor_report(scenario_.topology, cfg_.radio.decode_range_m);
    if (!report.ok()) {
      emit(-1, "topology_warning",
           "max_degree=" + std::to_string(report.max_degree) + " extra_links=" +
               std::to_string(report.extra_links.size()) + " broken_links=" + std::to_string(report.broken_links.size()));
    }
    emit(-1, "run_start",
         std::string("mode=") + to_string(cfg_.routing.mode) + " seed=" + std::to_string(cfg_.seed) +
             " nodes=" + std::to_string(n_) + " source=" + std::to_string(cfg_.source) +
             " sink=" + std::to_string(cfg_.sink));
    if (cfg_.interval_s <= cfg_.duration_s) queue_.push(cfg_.interval_s, EvTraffic{});
    if (cfg_.audit_interval_s <= cfg_.duration_s) queue_.push(cfg_.audit_interval_s, EvAudit{});

    double end_time = cfg_.duration_s;
    while (!queue_.empty()) {
      if (queue_.top().time > cfg_.duration_s) break;
      auto ev = queue_.pop();
      now_ = ev.time;
      std::visit([this](auto& p) { handle(p); }, ev.payload);
      if (stop_time_) {
        end_time = *stop_time_;
        break;
      }
    }
    finish(end_time);
    RunResult out;
    out.stats = std::move(stats_);
    out.trace = std::move(trace_);
    return out;
  }

 private:
  // ---- trace -------------------------------------------------------------

  void emit(NodeId node, const char* event, const std::string& detail) { emit_at(now_, node, event, detail); }

  void emit_at(double t, NodeId node, const char* event, const std::string& detail) {
    if (!tracing_) return;
    char head[64];
    std::snprintf(head, sizeof head, "%.9f %d ", t, node);
    trace_ += head;
    trace_ += event;
    if (!detail.empty()) {
      trace_ += ' ';
      trace_ += detail;
    }
    trace_ += '\n';
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  std::string split(const EnergyMeter& m) const {
    return "residual=" + num(m.residual()) + " tx=" + num(m.consumed(EnergyCategory::tx)) +
           " rx=" + num(m.consumed(EnergyCategory::rx)) + " idle=" + num(m.consumed(EnergyCategory::idle)) +
           " sleep=" + num(m.consumed(EnergyCategory::sleep));
  }

  // ---- energy ------------------------------------------------------------

  NodeRt& node(NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }

  /// Brings the node's idle drain up to now. False if it is (or just became) dead.
  bool accrue(NodeId id) {
    auto& rt = node(id);
    if (rt.dead) return false;
    const double elapsed = now_ - rt.last_accounted;
    if (elapsed > 0.0) {
      const double from = rt.last_accounted;
      const auto out = rt.meter.accrue_idle(elapsed, cfg_.energy);
      rt.last_accounted = now_;
      if (out.result == DebitResult::died) {
        on_death(id, from + out.death_offset_s);
        return false;
      }
    }
    return true;
  }

  void on_death(NodeId id, double when) {
    auto& rt = node(id);
    if (rt.dead) return;
    rt.dead = true;
    stats_.death_time[static_cast<std::size_t>(id)] = when;
    emit(id, "node_death", "at=" + num(when) + " " + split(rt.meter));
    rt.mac_queue.clear();
    if (id == cfg_.source) pending_.clear();
    if (current_route_ >= 0) {
      auto& rec = stats_.routes[static_cast<std::size_t>(current_route_)];
      if (!rec.first_on_path_death && std::find(rec.path.begin(), rec.path.end(), id) != rec.path.end()) {
        rec.first_on_path_death = when;
      }
    }
    if (cfg_.stop_at_first_death && !stop_time_) stop_time_ = std::max(when, now_);
  }

  // ---- MAC / channel -----------------------------------------------------

  int frame_bytes(const Frame& f) const {
    return f.is_control() ? cfg_.packets.control_size() : cfg_.packets.data_size();
  }

  void enqueue(NodeId id, Frame f) {
    auto& rt = node(id);
    if (rt.dead) return;
    f.uid = next_uid_++;
    f.sender = id;
    if (static_cast<int>(rt.mac_queue.size()) >= cfg_.queue_size) {
      const Frame& old = rt.mac_queue.front();
      if (!old.is_control()) ++stats_.dropped_queue;
      emit(id, "queue_drop", std::string("kind=") + kind_name(old.body) + " uid=" + std::to_string(old.uid));
      rt.mac_queue.pop_front();
    }
    rt.mac_queue.push_back(std::move(f));
    kick(id);
  }

  void kick(NodeId id) {
    auto& rt = node(id);
    if (rt.mac_busy || rt.mac_queue.empty()) return;
    rt.mac_busy = true;
    queue_.push(now_, EvTxAttempt{id});
  }

  double sensed_power(NodeId id) const {
    double p = 0.0;
    for (std::size_t k : active_) {
      const auto& t = txs_[k];
      if (t.frame.sender == id) continue;
      const std::size_t idx = static_cast<std::size_t>(t.frame.sender) * n_ + static_cast<std::size_t>(id);
      const double prop = dist_[idx] / kSpeedOfLight;
      if (t.start + prop <= now_ && now_ < t.end + prop) p = std::max(p, power_[idx]);
    }
    return p;
  }

  void prune_active() {
    constexpr double kWindow = 1.0;
    std::erase_if(active_, [&](std::size_t k) { return txs_[k].end < now_ - kWindow; });
  }

  void handle(EvTxAttempt& ev) {
    auto& rt = node(ev.node);
    if (!accrue(ev.node) || rt.mac_queue.empty()) {
      rt.mac_busy = false;
      return;
    }
    if (!cfg_.ideal_channel && sensed_power(ev.node) >= cfg_.radio.carrier_sense_threshold_w) {
      if (++rt.backoffs > cfg_.mac_retry_limit) {
        const Frame& f = rt.mac_queue.front();
        emit(ev.node, "mac_drop", std::string("kind=") + kind_name(f.body) + " uid=" + std::to_string(f.uid));
        if (!f.is_control()) ++stats_.dropped_queue;
        rt.mac_queue.pop_front();
        rt.backoffs = 0;
        queue_.push(now_, EvTxAttempt{ev.node});
      } else {
        queue_.push(now_ + rng_.uniform(0.0, cfg_.cw_s), EvTxAttempt{ev.node});
      }
      return;
    }
    rt.backoffs = 0;
    Frame f = std::move(rt.mac_queue.front());
    rt.mac_queue.pop_front();
    start_tx(ev.node, std::move(f));
  }

  void start_tx(NodeId id, Frame f) {
    auto& rt = node(id);
    const double duration = packet_tx_time(frame_bytes(f), cfg_.radio.data_rate_bps);
    const double cost =
        (cfg_.zero_cost_discovery && f.is_control()) ? 0.0 : packet_energy(cfg_.energy.tx_power_w, duration);
    Transmission t;
    t.start = now_;
    t.end = now_ + duration;
    t.duration = duration;
    const double before = rt.meter.residual();
    bool died = false;
    if (cost > 0.0 && rt.meter.debit(cost, EnergyCategory::tx) == DebitResult::died) {
      died = true;
      t.corrupt = true;
      t.end = now_ + before / cfg_.energy.tx_power_w;
    }
    std::string detail = std::string("kind=") + kind_name(f.body) + " uid=" + std::to_string(f.uid) +
                         " to=" + std::to_string(f.receiver);
    if (const auto* d = std::get_if<DataPacket>(&f.body)) detail += " id=" + std::to_string(d->id);
    detail += " end=" + num(t.end);
    emit(id, "tx", detail);
    if (!f.is_control() && f.receiver >= 0) {
      queue_.push(t.end + cfg_.routing.ack_timeout_s, EvAckTimeout{id, f.uid});
      acks_[f.uid] = PendingAck{f, false};
    }
    t.frame = std::move(f);
    txs_.push_back(std::move(t));
    const std::size_t idx = txs_.size() - 1;
    active_.push_back(idx);
    queue_.push(txs_[idx].end, EvTxEnd{idx});
    if (died) on_death(id, txs_[idx].end);
  }

  bool transmitting_during(NodeId id, double start, double end, std::size_t except) const {
    for (std::size_t k : active_) {
      if (k == except) continue;
      const auto& t = txs_[k];
      if (t.frame.sender == id && t.start < end && t.end > start) return true;
    }
    return false;
  }

  void handle(EvTxEnd& ev) {
    prune_active();
    const Transmission& t = txs_[ev.tx];
    const NodeId s = t.frame.sender;
    auto& srt = node(s);
    srt.mac_busy = false;
    if (!srt.dead) kick(s);
    if (t.corrupt) return;
    std::vector<double> concurrent;
    for (std::size_t j = 0; j < n_; ++j) {
      const auto jid = static_cast<NodeId>(j);
      if (jid == s) continue;
      const std::size_t idx = static_cast<std::size_t>(s) * n_ + j;
      if (!decode_[idx] || nodes_[j].dead) continue;
      Reception r = Reception::received;
      if (!cfg_.ideal_channel) {
        if (transmitting_during(jid, t.start, t.end, ev.tx)) {
          r = Reception::collided;
        } else {
          concurrent.clear();
          for (std::size_t k : active_) {
            if (k == ev.tx) continue;
            const auto& o = txs_[k];
            if (o.frame.sender == jid || !(o.start < t.end && o.end > t.start)) continue;
            concurrent.push_back(power_[static_cast<std::size_t>(o.frame.sender) * n_ + j]);
          }
          r = reception_decision(power_[idx], concurrent, cfg_.radio);
        }
      }
      if (r == Reception::received || r == Reception::captured) {
        queue_.push(now_ + dist_[idx] / kSpeedOfLight, EvRxDeliver{jid, ev.tx});
      } else if (t.frame.receiver == -1 || t.frame.receiver == jid) {
        emit(jid, "rx_fail", std::string("kind=") + kind_name(t.frame.body) + " uid=" + std::to_string(t.frame.uid) +
                                 " from=" + std::to_string(s) + " reason=" + to_string(r));
      }
    }
  }

  void handle(EvRxDeliver& ev) {
    if (!accrue(ev.node)) return;
    auto& rt = node(ev.node);
    const Transmission& t = txs_[ev.tx];
    const Frame frame = t.frame;
    const double cost = (cfg_.zero_cost_discovery && frame.is_control())
                            ? 0.0
                            : packet_energy(cfg_.energy.rx_power_w, t.duration);
    if (cost > 0.0 && rt.meter.debit(cost, EnergyCategory::rx) == DebitResult::died) {
      on_death(ev.node, now_);
      return;
    }
    const bool addressed = frame.receiver == -1 || frame.receiver == ev.node;
    emit(ev.node, addressed ? "rx" : "overhear",
         std::string("kind=") + kind_name(frame.body) + " uid=" + std::to_string(frame.uid) +
             " from=" + std::to_string(frame.sender));
    if (!addressed) return;
    std::visit([&](const auto& body) { receive(ev.node, frame, body); }, frame.body);
  }

  // ---- routing glue --------------------------------------------------------

  void receive(NodeId id, const Frame& frame, const Rreq& rreq) {
    auto& rt = node(id);
    const auto d = rt.agent.handle_rreq(rreq, frame.sender, rt.meter.residual());
    const std::string base = "src=" + std::to_string(rreq.source) + " seq=" + std::to_string(rreq.seq);
    switch (d.verdict) {
      case RreqDecision::Verdict::drop:
        emit(id, "rreq_drop", base + " reason=" + to_string(d.reason));
        break;
      case RreqDecision::Verdict::forward:
        emit(id, "rreq_accept",
             base + " hops=" + std::to_string(d.forwarded.hop_count) + " energy=" +
                 num(d.forwarded.accumulated_energy) + " via=" + join_path(d.forwarded.traversed));
        queue_.push(now_ + rebroadcast_delay(cfg_.routing.mode, cfg_.routing, rng_), EvRebroadcast{id, d.forwarded});
        break;
      case RreqDecision::Verdict::answer: {
        auto via = rreq.traversed;
        via.push_back(id);
        emit(id, "rreq_answer",
             base + " hops=" + std::to_string(rreq.hop_count + 1) + " energy=" + num(d.reply.path_energy) +
                 " via=" + join_path(via));
        Frame f;
        f.receiver = d.reply_next_hop;
        f.body = d.reply;
        enqueue(id, std::move(f));
        break;
      }
    }
  }

  void receive(NodeId id, const Frame& frame, const Rrep& rrep) {
    auto& rt = node(id);
    const auto d = rt.agent.handle_rrep(rrep, frame.sender);
    const std::string base = "src=" + std::to_string(rrep.source) + " seq=" + std::to_string(rrep.seq);
    switch (d.verdict) {
      case RrepDecision::Verdict::relay: {
        Frame f;
        f.receiver = d.next_hop;
        f.body = d.relayed;
        enqueue(id, std::move(f));
        break;
      }
      case RrepDecision::Verdict::adopted:
        route_adopted(d.first_for_seq);
        break;
      case RrepDecision::Verdict::ignored:
      case RrepDecision::Verdict::drop:
        emit(id, "rrep_drop", base + " reason=" + to_string(d.reason));
        break;
    }
  }

  void receive(NodeId id, const Frame&, const Rerr& rerr) {
    auto& rt = node(id);
    const auto d = rt.agent.handle_rerr(rerr);
    emit(id, "rerr", "dst=" + std::to_string(rerr.unreachable_destination) +
                         " origin=" + std::to_string(rerr.failure_origin));
    if (d.verdict == RerrDecision::Verdict::relay) {
      Frame f;
      f.receiver = d.next_hop;
      f.body = rerr;
      enqueue(id, std::move(f));
    } else if (d.verdict == RerrDecision::Verdict::rediscover) {
      source_route_failed("rerr");
    }
  }

  void receive(NodeId id, const Frame& frame, const DataPacket& data) {
    if (auto it = acks_.find(frame.uid); it != acks_.end()) it->second.acked = true;
    DataPacket pkt = data;
    pkt.hops.push_back(id);
    pkt.attempts = 0;
    if (id == pkt.sink) {
      ++stats_.packets_delivered;
      if (pkt.route_index >= 0) ++stats_.routes[static_cast<std::size_t>(pkt.route_index)].data_delivered;
      emit(id, "data_delivered", "id=" + std::to_string(pkt.id) + " hops=" + join_path(pkt.hops));
      return;
    }
    forward_data(id, std::move(pkt));
  }

  void forward_data(NodeId id, DataPacket pkt) {
    auto& rt = node(id);
    const auto d = rt.agent.forward_data(pkt.sink);
    if (d.verdict == ForwardDecision::Verdict::sent) {
      Frame f;
      f.receiver = d.next_hop;
      f.body = std::move(pkt);
      enqueue(id, std::move(f));
      return;
    }
    if (id == cfg_.source) {
      buffer_at_source(std::move(pkt));
      start_discovery();
      return;
    }
    ++stats_.dropped_no_route;
    emit(id, "data_drop", "id=" + std::to_string(pkt.id) + " reason=no_route");
    send_rerr(id, rt.agent.report_link_failure(pkt.sink, pkt.source), pkt.sink);
  }

  void send_rerr(NodeId id, const RerrDecision& d, NodeId destination) {
    if (d.verdict == RerrDecision::Verdict::relay) {
      Frame f;
      f.receiver = d.next_hop;
      f.body = Rerr{destination, id, cfg_.source};
      enqueue(id, std::move(f));
    } else if (d.verdict == RerrDecision::Verdict::rediscover) {
      source_route_failed("link_failure");
    }
  }

  void handle(EvRebroadcast& ev) {
    if (!accrue(ev.node)) return;
    Frame f;
    f.receiver = -1;
    f.body = std::move(ev.rreq);
    enqueue(ev.node, std::move(f));
  }

  void handle(EvAckTimeout& ev) {
    auto it = acks_.find(ev.uid);
    if (it == acks_.end()) return;
    PendingAck pending = std::move(it->second);
    acks_.erase(it);
    if (pending.acked || !accrue(ev.node)) return;
    auto pkt = std::get<DataPacket>(pending.frame.body);
    if (++pkt.attempts <= cfg_.routing.data_retries) {
      emit(ev.node, "data_retry", "id=" + std::to_string(pkt.id) + " attempt=" + std::to_string(pkt.attempts));
      Frame f;
      f.receiver = pending.frame.receiver;
      f.body = std::move(pkt);
      f.uid = next_uid_++;
      f.sender = ev.node;
      auto& rt = node(ev.node);
      rt.mac_queue.push_front(std::move(f));
      kick(ev.node);
      return;
    }
    ++stats_.dropped_link;
    emit(ev.node, "link_fail",
         "id=" + std::to_string(pkt.id) + " next=" + std::to_string(pending.frame.receiver));
    send_rerr(ev.node, node(ev.node).agent.report_link_failure(pkt.sink, pkt.source), pkt.sink);
  }

  // ---- source behaviour -----------------------------------------------------

  void buffer_at_source(DataPacket pkt) {
    if (static_cast<int>(pending_.size()) >= cfg_.queue_size) {
      ++stats_.dropped_queue;
      emit(cfg_.source, "queue_drop", "id=" + std::to_string(pending_.front().id));
      pending_.pop_front();
    }
    pending_.push_back(std::move(pkt));
  }

  void send_from_source(DataPacket pkt) {
    if (current_route_ >= 0) {
      pkt.route_index = current_route_;
      auto& rec = stats_.routes[static_cast<std::size_t>(current_route_)];
      ++rec.data_sent;
      if (!rec.first_on_path_death) ++rec.data_sent_before_death;
    }
    forward_data(cfg_.source, std::move(pkt));
  }

  void handle(EvTraffic&) {
    if (partitioned_ || !accrue(cfg_.source)) return;
    DataPacket pkt;
    pkt.id = next_data_id_++;
    pkt.source = cfg_.source;
    pkt.sink = cfg_.sink;
    pkt.created = now_;
    pkt.hops = {cfg_.source};
    ++stats_.packets_generated;
    emit(cfg_.source, "data_gen", "id=" + std::to_string(pkt.id));
    auto& agent = node(cfg_.source).agent;
    if (agent.forward_data(cfg_.sink).verdict == ForwardDecision::Verdict::sent) {
      send_from_source(std::move(pkt));
    } else {
      buffer_at_source(std::move(pkt));
      start_discovery();
    }
    if (now_ + cfg_.interval_s <= cfg_.duration_s) queue_.push(now_ + cfg_.interval_s, EvTraffic{});
  }

  void start_discovery() {
    const NodeId src = cfg_.source;
    auto& rt = node(src);
    if (partitioned_ || !accrue(src) || rt.agent.discovering(cfg_.sink)) return;
    const Rreq rreq = rt.agent.originate_rreq(cfg_.sink, rt.meter.residual());
    ++stats_.discoveries;
    emit(src, "rreq_originate",
         "dst=" + std::to_string(cfg_.sink) + " seq=" + std::to_string(rreq.seq) + " energy=" +
             num(rreq.accumulated_energy));
    Frame f;
    f.receiver = -1;
    f.body = rreq;
    enqueue(src, std::move(f));
    queue_.push(now_ + cfg_.routing.discovery_timeout_s, EvDiscoveryTimeout{src, cfg_.sink, rreq.seq});
  }

  void retire_current(const char* reason) {
    if (current_route_ < 0) return;
    auto& rec = stats_.routes[static_cast<std::size_t>(current_route_)];
    rec.retired_at = now_;
    rec.retire_reason = reason;
    emit(cfg_.source, "route_retire",
         "seq=" + std::to_string(rec.seq) + " path=" + join_path(rec.path) + " sent=" +
             std::to_string(rec.data_sent) + " delivered=" + std::to_string(rec.data_delivered) +
             " before_death=" + std::to_string(rec.data_sent_before_death) + " reason=" + reason);
    current_route_ = -1;
  }

  void source_route_failed(const char* reason) {
    retire_current(reason);
    node(cfg_.source).agent.invalidate_route(cfg_.sink);
    start_discovery();
  }

  void route_adopted(bool first_for_seq) {
    const auto* entry = node(cfg_.source).agent.route(cfg_.sink);
    if (first_for_seq || current_route_ < 0) {
      retire_current("superseded");
      RouteRecord rec;
      rec.seq = entry->seq;
      rec.path = entry->path;
      rec.path_energy = entry->path_energy;
      rec.adopted_at = now_;
      stats_.routes.push_back(std::move(rec));
      current_route_ = static_cast<int>(stats_.routes.size()) - 1;
      emit(cfg_.source, "route_adopt",
           "seq=" + std::to_string(entry->seq) + " path=" + join_path(entry->path) +
               " hops=" + std::to_string(entry->hop_count) + " energy=" + num(entry->path_energy));
    } else {
      auto& rec = stats_.routes[static_cast<std::size_t>(current_route_)];
      rec.path = entry->path;
      rec.path_energy = entry->path_energy;
      emit(cfg_.source, "route_update",
           "seq=" + std::to_string(entry->seq) + " path=" + join_path(entry->path) +
               " hops=" + std::to_string(entry->hop_count) + " energy=" + num(entry->path_energy));
    }
    auto& rec = stats_.routes[static_cast<std::size_t>(current_route_)];
    for (NodeId v : rec.path) {
      const auto& dt = stats_.death_time[static_cast<std::size_t>(v)];
      if (dt && (!rec.first_on_path_death || *dt < *rec.first_on_path_death)) rec.first_on_path_death = dt;
    }
    while (!pending_.empty() && current_route_ >= 0) {
      DataPacket pkt = std::move(pending_.front());
      pending_.pop_front();
      send_from_source(std::move(pkt));
    }
  }

  void handle(EvDiscoveryTimeout& ev) {
    auto& agent = node(ev.node).agent;
    const auto r = agent.on_discovery_timeout(ev.destination, ev.seq, cfg_.routing.max_discovery_retries);
    if (r == DiscoveryTimeout::stale) return;
    emit(ev.node, "discovery_timeout",
         "seq=" + std::to_string(ev.seq) + " failures=" + std::to_string(agent.failed_discoveries(ev.destination)));
    if (r == DiscoveryTimeout::retry) {
      start_discovery();
      return;
    }
    std::vector<bool> alive(n_);
    for (std::size_t i = 0; i < n_; ++i) alive[i] = accrue(static_cast<NodeId>(i));
    const bool reach = reachable(scenario_.topology, cfg_.radio, alive, cfg_.source, cfg_.sink);
    stats_.exhaustion_checks.push_back(PartitionCheck{now_, reach});
    if (!reach) {
      partitioned_ = true;
      stats_.partition_time = now_;
      emit(-1, "partition", "source=" + std::to_string(cfg_.source) + " sink=" + std::to_string(cfg_.sink));
      if (!stop_time_) stop_time_ = now_;
      return;
    }
    emit(ev.node, "discovery_exhausted", "reachable=1");
    agent.reset_discovery(ev.destination);
  }

  void handle(EvAudit&) {
    audit();
    if (now_ + cfg_.audit_interval_s <= cfg_.duration_s) queue_.push(now_ + cfg_.audit_interval_s, EvAudit{});
  }

  void audit() {
    for (std::size_t i = 0; i < n_; ++i) {
      accrue(static_cast<NodeId>(i));
      stats_.max_conservation_error = std::max(stats_.max_conservation_error, nodes_[i].meter.conservation_error());
    }
    ++stats_.audits;
  }

  void finish(double end_time) {
    now_ = std::max(now_, end_time);
    now_ = end_time;
    audit();
    if (current_route_ >= 0) {
      auto& rec = stats_.routes[static_cast<std::size_t>(current_route_)];
      emit(cfg_.source, "route_final",
           "seq=" + std::to_string(rec.seq) + " path=" + join_path(rec.path) + " sent=" +
               std::to_string(rec.data_sent) + " delivered=" + std::to_string(rec.data_delivered) +
               " before_death=" + std::to_string(rec.data_sent_before_death));
    }
    stats_.end_time = end_time;
    stats_.delivery_ratio = stats_.packets_generated > 0
                                ? static_cast<double>(stats_.packets_delivered) / stats_.packets_generated
                                : 0.0;
    stats_.node_consumed.resize(n_);
    stats_.node_initial.resize(n_);
    stats_.node_residual.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& m = nodes_[i].meter;
      double total = 0.0;
      for (std::size_t c = 0; c < kEnergyCategories; ++c) {
        const double v = m.consumed(static_cast<EnergyCategory>(c));
        stats_.node_consumed[i][c] = v;
        stats_.avg_consumed[c] += v / static_cast<double>(n_);
        total += v;
      }
      stats_.avg_consumed_total += total / static_cast<double>(n_);
      stats_.node_initial[i] = m.initial();
      stats_.node_residual[i] = m.residual();
      emit(static_cast<NodeId>(i), "node_final", "initial=" + num(m.initial()) + " " + split(m));
    }
    std::string pt = stats_.partition_time ? num(*stats_.partition_time) : std::string("none");
    emit(-1, "run_end",
         "generated=" + std::to_string(stats_.packets_generated) + " delivered=" +
             std::to_string(stats_.packets_delivered) + " discoveries=" + std::to_string(stats_.discoveries) +
             " partition=" + pt);
  }

  SimConfig cfg_;
  bool tracing_;
  Rng rng_;
  Scenario scenario_;
  std::size_t n_ = 0;
  std::vector<NodeRt> nodes_;
  std::vector<double> dist_;
  std::vector<double> power_;
  std::vector<bool> decode_;
  EventQueue<Payload> queue_;
  std::vector<Transmission> txs_;
  std::vector<std::size_t> active_;
  std::map<std::uint64_t, PendingAck> acks_;
  std::deque<DataPacket> pending_;
  RunStats stats_;
  std::string trace_;
  double now_ = 0.0;
  std::optional<double> stop_time_;
  bool partitioned_ = false;
  int current_route_ = -1;
  std::uint64_t next_uid_ = 1;
  std::uint64_t next_data_id_ = 1;
};

}  // namespace

RunResult run(const SimConfig& cfg, bool trace) { return Engine(cfg, trace).execute(); }

}  // namespace wsnsim
