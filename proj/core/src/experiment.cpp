#include "wsnsim/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>

namespace wsnsim {

namespace {

bool parse_u64(std::string_view s, std::uint64_t& out) {
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc() && r.ptr == end && !s.empty();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::optional<std::vector<std::uint64_t>> parse_seed_range(std::string_view text) {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    if (!parse_u64(text.substr(0, dots), a) || !parse_u64(text.substr(dots + 2), b) || b < a) return std::nullopt;
  } else {
    if (!parse_u64(text, a)) return std::nullopt;
    b = a;
  }
  if (b - a >= 1000000) return std::nullopt;
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
  return out;
}

std::optional<std::vector<RoutingMode>> parse_modes(std::string_view text) {
  std::vector<RoutingMode> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto m = parse_routing_mode(std::string(item));
    if (!m) return std::nullopt;
    out.push_back(*m);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

Experiment run_experiment(const SimConfig& base, const std::vector<std::uint64_t>& seeds,
                          const std::vector<RoutingMode>& modes, unsigned threads) {
  Experiment e;
  e.rows.resize(seeds.size() * modes.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = 0; j < modes.size(); ++j) {
      auto& row = e.rows[i * modes.size() + j];
      row.seed = seeds[i];
      row.mode = modes[j];
    }
  }
  auto cell = [&](std::size_t idx) {
    SimConfig cfg = base;
    cfg.seed = e.rows[idx].seed;
    cfg.routing.mode = e.rows[idx].mode;
    e.rows[idx].stats = run(cfg).stats;
  };
  if (threads <= 1 || e.rows.size() <= 1) {
    for (std::size_t i = 0; i < e.rows.size(); ++i) cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < e.rows.size(); i = next++) cell(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  for (RoutingMode m : modes) {
    ModeSummary s;
    s.mode = m;
    int per_delivered_runs = 0;
    for (const auto& r : e.rows) {
      if (r.mode != m) continue;
      ++s.runs;
      s.delivery_ratio += r.stats.delivery_ratio;
      s.generated += r.stats.packets_generated;
      s.delivered += r.stats.packets_delivered;
      s.avg_consumed_j += r.stats.avg_consumed_total;
      s.avg_idle_j += r.stats.avg_consumed[static_cast<std::size_t>(EnergyCategory::idle)];
      s.avg_tx_j += r.stats.avg_consumed[static_cast<std::size_t>(EnergyCategory::tx)];
      s.avg_rx_j += r.stats.avg_consumed[static_cast<std::size_t>(EnergyCategory::rx)];
      s.avg_sleep_j += r.stats.avg_consumed[static_cast<std::size_t>(EnergyCategory::sleep)];
      s.discoveries += r.stats.discoveries;
      if (r.stats.packets_delivered > 0) {
        s.energy_per_delivered_j += r.stats.energy_per_delivered();
        ++per_delivered_runs;
      }
    }
    if (s.runs > 0) {
      const double n = s.runs;
      s.delivery_ratio /= n;
      s.generated /= n;
      s.delivered /= n;
      s.avg_consumed_j /= n;
      s.avg_idle_j /= n;
      s.avg_tx_j /= n;
      s.avg_rx_j /= n;
      s.avg_sleep_j /= n;
      s.discoveries /= n;
    }
    s.energy_per_delivered_j = per_delivered_runs > 0 ? s.energy_per_delivered_j / per_delivered_runs
                                                      : std::numeric_limits<double>::infinity();
    e.summary.push_back(s);
  }
  return e;
}

std::string to_csv(const Experiment& e) {
  std::string out =
      "seed,mode,delivery_ratio,generated,delivered,avg_consumed_j,avg_idle_j,avg_tx_j,avg_rx_j,avg_sleep_j,"
      "discoveries,route_tx_counts,first_route,partition_time_s\n";
  auto cat = [](const RunStats& s, EnergyCategory c) { return s.avg_consumed[static_cast<std::size_t>(c)]; };
  for (const auto& r : e.rows) {
    const auto& s = r.stats;
    std::string counts;
    for (int c : s.route_transmission_counts()) {
      if (!counts.empty()) counts += ';';
      counts += std::to_string(c);
    }
    out += std::to_string(r.seed) + "," + to_string(r.mode) + "," + fmt(s.delivery_ratio) + "," +
           std::to_string(s.packets_generated) + "," + std::to_string(s.packets_delivered) + "," +
           fmt(s.avg_consumed_total) + "," + fmt(cat(s, EnergyCategory::idle)) + "," +
           fmt(cat(s, EnergyCategory::tx)) + "," + fmt(cat(s, EnergyCategory::rx)) + "," +
           fmt(cat(s, EnergyCategory::sleep)) + "," + std::to_string(s.discoveries) + "," + counts + "," +
           s.first_route() + "," + (s.partition_time ? fmt(*s.partition_time) : std::string()) + "\n";
  }
  for (const auto& m : e.summary) {
    out += std::string("mean,") + to_string(m.mode) + "," + fmt(m.delivery_ratio) + "," + fmt(m.generated) + "," +
           fmt(m.delivered) + "," + fmt(m.avg_consumed_j) + "," + fmt(m.avg_idle_j) + "," + fmt(m.avg_tx_j) + "," +
           fmt(m.avg_rx_j) + "," + fmt(m.avg_sleep_j) + "," + fmt(m.discoveries) + ",,,\n";
  }
  return out;
}

}  // namespace wsnsim
