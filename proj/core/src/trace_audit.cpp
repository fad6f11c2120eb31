#include "wsnsim/trace_audit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace wsnsim {

namespace {

struct Line {
  double time = 0.0;
  NodeId node = -1;
  std::string event;
  std::map<std::string, std::string, std::less<>> kv;

  const std::string* get(std::string_view k) const {
    auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  }
};

std::optional<double> to_double(const std::string* s) {
  if (!s) return std::nullopt;
  double v = 0.0;
  const auto r = std::from_chars(s->data(), s->data() + s->size(), v);
  if (r.ec != std::errc() || r.ptr != s->data() + s->size()) return std::nullopt;
  return v;
}

std::optional<long long> to_int(const std::string* s) {
  if (!s) return std::nullopt;
  long long v = 0;
  const auto r = std::from_chars(s->data(), s->data() + s->size(), v);
  if (r.ec != std::errc() || r.ptr != s->data() + s->size()) return std::nullopt;
  return v;
}

std::vector<NodeId> to_path(const std::string* s) {
  std::vector<NodeId> out;
  if (!s || s->empty()) return out;
  std::size_t pos = 0;
  while (pos <= s->size()) {
    const auto dash = s->find('-', pos);
    const auto part = s->substr(pos, dash == std::string::npos ? std::string::npos : dash - pos);
    out.push_back(static_cast<NodeId>(std::stoi(part)));
    if (dash == std::string::npos) break;
    pos = dash + 1;
  }
  return out;
}

bool simple(const std::vector<NodeId>& p) {
  std::set<NodeId> seen(p.begin(), p.end());
  return seen.size() == p.size();
}

bool parse_line(const std::string& raw, Line& out) {
  std::istringstream in(raw);
  std::string t;
  std::string n;
  if (!(in >> t >> n >> out.event)) return false;
  const auto tv = to_double(&t);
  const auto nv = to_int(&n);
  if (!tv || !nv) return false;
  out.time = *tv;
  out.node = static_cast<NodeId>(*nv);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) return false;
    out.kv.emplace(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return true;
}

bool is_activity(std::string_view ev) {
  return ev == "tx" || ev == "rx" || ev == "overhear" || ev == "rreq_accept" || ev == "rreq_answer" ||
         ev == "rreq_originate" || ev == "data_gen" || ev == "data_delivered" || ev == "rerr";
}

}  // namespace

TraceAudit audit_trace(std::string_view trace) {
  TraceAudit a;
  auto& st = a.stats;
  auto bad = [&](std::size_t line_no, const std::string& what) {
    a.violations.push_back("line " + std::to_string(line_no) + ": " + what);
  };

  NodeId source = -1;
  NodeId sink = -1;
  std::size_t nodes = 0;
  double last_time = -1.0;
  std::map<NodeId, double> dead;  // node -> detection time
  std::map<NodeId, double> tx_end;  // node -> end of its latest frame
  std::map<long long, double> generated;
  std::set<long long> delivered;
  std::map<long long, std::vector<std::pair<NodeId, double>>> data_tx;  // id -> (sender, time)
  std::vector<std::pair<std::vector<NodeId>, double>> deliveries;        // hops, time
  std::vector<long long> delivery_ids;
  int current_route = -1;
  bool saw_end = false;
  std::optional<long long> end_generated, end_delivered, end_discoveries;
  std::string end_partition;

  std::istringstream in{std::string(trace)};
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (raw.empty()) continue;
    Line l;
    if (!parse_line(raw, l)) {
      bad(no, "unparseable line");
      continue;
    }
    ++a.lines;
    if (l.time < last_time) bad(no, "time goes backwards");
    last_time = l.time;
    if (saw_end) bad(no, "event after run_end");

    if (l.node >= 0 && dead.count(l.node) && is_activity(l.event)) {
      bad(no, "dead node " + std::to_string(l.node) + " is active (" + l.event + ")");
    }

    const auto& ev = l.event;
    if (ev == "run_start") {
      source = static_cast<NodeId>(to_int(l.get("source")).value_or(-1));
      sink = static_cast<NodeId>(to_int(l.get("sink")).value_or(-1));
      nodes = static_cast<std::size_t>(to_int(l.get("nodes")).value_or(0));
      st.death_time.assign(nodes, std::nullopt);
      st.node_consumed.assign(nodes, {});
      st.node_initial.assign(nodes, 0.0);
      st.node_residual.assign(nodes, 0.0);
    } else if (ev == "data_gen") {
      const auto id = to_int(l.get("id"));
      if (!id || generated.count(*id)) bad(no, "bad or repeated data id");
      else generated[*id] = l.time;
      ++st.packets_generated;
    } else if (ev == "tx") {
      if (const auto end = to_double(l.get("end"))) tx_end[l.node] = *end;
      if (l.get("kind") && *l.get("kind") == "DATA") {
        if (const auto id = to_int(l.get("id"))) data_tx[*id].push_back({l.node, l.time});
      }
    } else if (ev == "data_delivered") {
      const auto id = to_int(l.get("id"));
      if (!id || !generated.count(*id)) {
        bad(no, "delivery of a packet never generated");
      } else if (!delivered.insert(*id).second) {
        bad(no, "packet delivered twice");
      } else {
        ++st.packets_delivered;
        const auto hops = to_path(l.get("hops"));
        if (hops.empty() || hops.front() != source || hops.back() != sink || l.node != sink) {
          bad(no, "delivered hops do not run source to sink");
        }
        if (!simple(hops)) bad(no, "delivered packet looped");
        deliveries.push_back({hops, l.time});
        delivery_ids.push_back(*id);
      }
    } else if (ev == "rreq_originate") {
      ++st.discoveries;
    } else if (ev == "rreq_accept" || ev == "rreq_answer") {
      if (!simple(to_path(l.get("via")))) bad(no, "request copy traversed a loop");
    } else if (ev == "route_adopt" || ev == "route_update") {
      const auto path = to_path(l.get("path"));
      if (!simple(path)) bad(no, "route contains a loop");
      if (ev == "route_adopt" || current_route < 0) {
        RouteRecord r;
        r.seq = static_cast<SeqNo>(to_int(l.get("seq")).value_or(0));
        r.adopted_at = l.time;
        st.routes.push_back(r);
        current_route = static_cast<int>(st.routes.size()) - 1;
      }
      auto& r = st.routes[static_cast<std::size_t>(current_route)];
      r.path = path;
      r.path_energy = to_double(l.get("energy")).value_or(0.0);
      for (NodeId v : path) {
        if (v >= 0 && static_cast<std::size_t>(v) < st.death_time.size()) {
          const auto& dt = st.death_time[static_cast<std::size_t>(v)];
          if (dt && (!r.first_on_path_death || *dt < *r.first_on_path_death)) r.first_on_path_death = dt;
        }
      }
    } else if (ev == "route_retire" || ev == "route_final") {
      if (current_route < 0) {
        bad(no, ev + " without a current route");
      } else {
        auto& r = st.routes[static_cast<std::size_t>(current_route)];
        r.data_sent = static_cast<int>(to_int(l.get("sent")).value_or(0));
        r.data_delivered = static_cast<int>(to_int(l.get("delivered")).value_or(0));
        r.data_sent_before_death = static_cast<int>(to_int(l.get("before_death")).value_or(0));
        if (ev == "route_retire") {
          r.retired_at = l.time;
          r.retire_reason = l.get("reason") ? *l.get("reason") : "";
          current_route = -1;
        }
      }
    } else if (ev == "node_death") {
      const auto at = to_double(l.get("at"));
      // A frame's energy is charged when it starts, so a node can run dry
      // partway through a transmission that is already on the air.
      double latest = l.time;
      if (auto e = tx_end.find(l.node); e != tx_end.end()) latest = std::max(latest, e->second);
      if (!at || *at > latest + 1e-9) bad(no, "death time after its detection");
      if (dead.count(l.node)) bad(no, "node died twice");
      dead[l.node] = l.time;
      if (l.node >= 0 && static_cast<std::size_t>(l.node) < st.death_time.size()) {
        st.death_time[static_cast<std::size_t>(l.node)] = at;
      }
      if (current_route >= 0) {
        auto& r = st.routes[static_cast<std::size_t>(current_route)];
        if (!r.first_on_path_death && std::find(r.path.begin(), r.path.end(), l.node) != r.path.end()) {
          r.first_on_path_death = at;
        }
      }
    } else if (ev == "queue_drop" || ev == "mac_drop") {
      const auto* kind = l.get("kind");
      if (!kind || *kind == "DATA") ++st.dropped_queue;
    } else if (ev == "data_drop") {
      ++st.dropped_no_route;
    } else if (ev == "link_fail") {
      ++st.dropped_link;
    } else if (ev == "discovery_exhausted") {
      st.exhaustion_checks.push_back({l.time, true});
    } else if (ev == "partition") {
      st.exhaustion_checks.push_back({l.time, false});
      st.partition_time = l.time;
    } else if (ev == "node_final") {
      const auto idx = static_cast<std::size_t>(l.node);
      if (l.node < 0 || idx >= nodes) {
        bad(no, "node_final for unknown node");
        continue;
      }
      const double initial = to_double(l.get("initial")).value_or(0.0);
      const double residual = to_double(l.get("residual")).value_or(0.0);
      double consumed = 0.0;
      const char* names[] = {"tx", "rx", "idle", "sleep"};
      for (std::size_t c = 0; c < kEnergyCategories; ++c) {
        const double v = to_double(l.get(names[c])).value_or(0.0);
        st.node_consumed[idx][c] = v;
        consumed += v;
      }
      st.node_initial[idx] = initial;
      st.node_residual[idx] = residual;
      if (residual < 0.0) bad(no, "negative residual");
      if (initial > 0.0 && std::abs(initial - residual - consumed) / initial > 1e-9) {
        bad(no, "energy not conserved at node " + std::to_string(l.node));
      }
    } else if (ev == "run_end") {
      saw_end = true;
      st.end_time = l.time;
      end_generated = to_int(l.get("generated"));
      end_delivered = to_int(l.get("delivered"));
      end_discoveries = to_int(l.get("discoveries"));
      end_partition = l.get("partition") ? *l.get("partition") : "";
    }
  }

  if (!saw_end) {
    a.violations.push_back("trace has no run_end line");
  } else {
    if (end_generated != st.packets_generated) a.violations.push_back("run_end generated count disagrees");
    if (end_delivered != st.packets_delivered) a.violations.push_back("run_end delivered count disagrees");
    if (end_discoveries != st.discoveries) a.violations.push_back("run_end discovery count disagrees");
    if ((end_partition == "none") != !st.partition_time.has_value()) {
      a.violations.push_back("run_end partition disagrees with partition lines");
    }
  }

  // Every relay on a delivered path must have sent that packet while alive.
  for (std::size_t k = 0; k < deliveries.size(); ++k) {
    const auto& [hops, t_del] = deliveries[k];
    const auto& sends = data_tx[delivery_ids[k]];
    const double t_gen = generated[delivery_ids[k]];
    for (std::size_t h = 0; h + 1 < hops.size(); ++h) {
      const NodeId v = hops[h];
      const bool sent = std::any_of(sends.begin(), sends.end(), [&](const auto& s) {
        return s.first == v && s.second >= t_gen && s.second <= t_del;
      });
      if (!sent) {
        a.violations.push_back("packet " + std::to_string(delivery_ids[k]) + " hop " + std::to_string(v) +
                               " never transmitted it");
      }
    }
  }

  st.delivery_ratio = st.packets_generated > 0 ? static_cast<double>(st.packets_delivered) / st.packets_generated
                                                : 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    double total = 0.0;
    for (std::size_t c = 0; c < kEnergyCategories; ++c) {
      st.avg_consumed[c] += st.node_consumed[i][c] / static_cast<double>(nodes);
      total += st.node_consumed[i][c];
    }
    st.avg_consumed_total += total / static_cast<double>(nodes);
  }
  return a;
}

}  // namespace wsnsim
