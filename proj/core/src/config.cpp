#include "wsnsim/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace wsnsim {

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

struct Ctx {
  int line = 0;
  bool initial_explicit = false;
  bool battery_given = false;
  std::optional<double> source_energy;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double number(std::string_view v, const Ctx& ctx) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError(ctx.line, "expected a number, got '" + std::string(v) + "'");
  return out;
}

long long integer(std::string_view v, const Ctx& ctx) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) {
    throw ConfigError(ctx.line, "expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool boolean(std::string_view v, const Ctx& ctx) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(ctx.line, "expected true or false, got '" + std::string(v) + "'");
}

double positive(std::string_view v, const Ctx& ctx, const char* key) {
  const double x = number(v, ctx);
  if (!(x > 0.0)) throw ConfigError(ctx.line, std::string(key) + " must be positive");
  return x;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(SimConfig&, std::string_view, Ctx&)>;
using Getter = std::function<std::string(const SimConfig&)>;

struct Key {
  const char* section;
  const char* name;
  Setter set;
  Getter get;  // empty: alias that is never written back
};

template <typename Member>
Key real(const char* section, const char* name, Member member) {
  return {section, name,
          [member](SimConfig& c, std::string_view v, Ctx& ctx) { member(c) = number(v, ctx); },
          [member](const SimConfig& c) { return fmt(member(c)); }};
}

template <typename Member>
Key count(const char* section, const char* name, Member member) {
  return {section, name,
          [member](SimConfig& c, std::string_view v, Ctx& ctx) {
            member(c) = static_cast<std::remove_cvref_t<decltype(member(c))>>(integer(v, ctx));
          },
          [member](const SimConfig& c) { return std::to_string(member(c)); }};
}

template <typename Member>
Key flag(const char* section, const char* name, Member member) {
  return {section, name, [member](SimConfig& c, std::string_view v, Ctx& ctx) { member(c) = boolean(v, ctx); },
          [member](const SimConfig& c) { return std::string(member(c) ? "true" : "false"); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    // radio
    k.push_back(real("radio", "frequency_hz", [](auto& c) -> auto& { return c.radio.frequency_hz; }));
    k.push_back(real("radio", "tx_power_w", [](auto& c) -> auto& { return c.radio.tx_power_w; }));
    k.push_back({"radio", "tx_power_dbm",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) { c.radio.tx_power_w = dbm_to_watts(number(v, ctx)); },
                 {}});
    k.push_back(real("radio", "rx_threshold_w", [](auto& c) -> auto& { return c.radio.rx_threshold_w; }));
    k.push_back({"radio", "rx_threshold_dbm",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   c.radio.rx_threshold_w = dbm_to_watts(number(v, ctx));
                 },
                 {}});
    k.push_back(real("radio", "carrier_sense_threshold_w",
                     [](auto& c) -> auto& { return c.radio.carrier_sense_threshold_w; }));
    k.push_back({"radio", "carrier_sense_threshold_dbm",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   c.radio.carrier_sense_threshold_w = dbm_to_watts(number(v, ctx));
                 },
                 {}});
    k.push_back(real("radio", "capture_ratio", [](auto& c) -> auto& { return c.radio.capture_ratio; }));
    k.push_back({"radio", "antenna_height_m",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   c.radio.antenna_height_tx_m = c.radio.antenna_height_rx_m = number(v, ctx);
                 },
                 {}});
    k.push_back(real("radio", "antenna_height_tx_m", [](auto& c) -> auto& { return c.radio.antenna_height_tx_m; }));
    k.push_back(real("radio", "antenna_height_rx_m", [](auto& c) -> auto& { return c.radio.antenna_height_rx_m; }));
    k.push_back(real("radio", "gain_tx", [](auto& c) -> auto& { return c.radio.gain_tx; }));
    k.push_back(real("radio", "gain_rx", [](auto& c) -> auto& { return c.radio.gain_rx; }));
    k.push_back(real("radio", "path_loss", [](auto& c) -> auto& { return c.radio.path_loss; }));
    k.push_back(real("radio", "data_rate_bps", [](auto& c) -> auto& { return c.radio.data_rate_bps; }));
    k.push_back(real("radio", "decode_range_m", [](auto& c) -> auto& { return c.radio.decode_range_m; }));
    // energy
    k.push_back(real("energy", "tx_power_w", [](auto& c) -> auto& { return c.energy.tx_power_w; }));
    k.push_back(real("energy", "rx_power_w", [](auto& c) -> auto& { return c.energy.rx_power_w; }));
    k.push_back(real("energy", "idle_power_w", [](auto& c) -> auto& { return c.energy.idle_power_w; }));
    k.push_back(real("energy", "sleep_power_w", [](auto& c) -> auto& { return c.energy.sleep_power_w; }));
    k.push_back(real("energy", "supply_voltage_v", [](auto& c) -> auto& { return c.energy.supply_voltage_v; }));
    k.push_back({"energy", "initial_energy_j",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   c.energy.initial_energy_j = number(v, ctx);
                   ctx.initial_explicit = true;
                 },
                 [](const SimConfig& c) { return fmt(c.energy.initial_energy_j); }});
    k.push_back({"energy", "battery_current_a",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   c.battery.avg_current_a = number(v, ctx);
                   ctx.battery_given = true;
                 },
                 [](const SimConfig& c) { return fmt(c.battery.avg_current_a); }});
    k.push_back({"energy", "battery_hours_h",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   c.battery.hours = number(v, ctx);
                   ctx.battery_given = true;
                 },
                 [](const SimConfig& c) { return fmt(c.battery.hours); }});
    k.push_back(count("energy", "mac_header_bytes", [](auto& c) -> auto& { return c.packets.mac_header; }));
    k.push_back(count("energy", "ip_header_bytes", [](auto& c) -> auto& { return c.packets.ip_header; }));
    k.push_back(count("energy", "common_header_bytes", [](auto& c) -> auto& { return c.packets.common_header; }));
    k.push_back(count("energy", "data_payload_bytes", [](auto& c) -> auto& { return c.packets.data_payload; }));
    k.push_back(count("energy", "control_payload_bytes", [](auto& c) -> auto& { return c.packets.control_payload; }));
    k.push_back(flag("energy", "zero_cost_discovery", [](auto& c) -> auto& { return c.zero_cost_discovery; }));
    // topology
    k.push_back({"topology", "kind",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   if (v == "square") c.topology.kind = LatticeKind::square;
                   else if (v == "hexagonal") c.topology.kind = LatticeKind::hexagonal;
                   else throw ConfigError(ctx.line, "kind must be square or hexagonal");
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.topology.kind)); }});
    k.push_back(count("topology", "rows", [](auto& c) -> auto& { return c.topology.rows; }));
    k.push_back(count("topology", "cols", [](auto& c) -> auto& { return c.topology.cols; }));
    k.push_back(real("topology", "spacing_m", [](auto& c) -> auto& { return c.topology.spacing_m; }));
    k.push_back(real("topology", "jitter_m", [](auto& c) -> auto& { return c.topology.jitter_m; }));
    k.push_back({"topology", "layout",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   if (v == "fig3") c.topology.fig3_layout = true;
                   else if (v == "row_major") c.topology.fig3_layout = false;
                   else throw ConfigError(ctx.line, "layout must be fig3 or row_major");
                 },
                 [](const SimConfig& c) { return std::string(c.topology.fig3_layout ? "fig3" : "row_major"); }});
    k.push_back({"topology", "min_energy_j",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   c.topology.min_energy_j = positive(v, ctx, "min_energy_j");
                 },
                 [](const SimConfig& c) {
                   return c.topology.min_energy_j ? fmt(*c.topology.min_energy_j) : std::string();
                 }});
    k.push_back(real("topology", "energy_step_j", [](auto& c) -> auto& { return c.topology.energy_step_j; }));
    k.push_back({"topology", "energy_order",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   if (v == "column_major") c.topology.energy_order = EnergyOrder::column_major;
                   else if (v == "row_major") c.topology.energy_order = EnergyOrder::row_major;
                   else throw ConfigError(ctx.line, "energy_order must be column_major or row_major");
                 },
                 [](const SimConfig& c) {
                   return std::string(c.topology.energy_order == EnergyOrder::column_major ? "column_major"
                                                                                          : "row_major");
                 }});
    k.push_back({"topology", "source_energy_j",
                 [](SimConfig&, std::string_view v, Ctx& ctx) {
                   ctx.source_energy = positive(v, ctx, "source_energy_j");
                 },
                 {}});
    k.push_back({"topology", "energy_override",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   const auto colon = v.find(':');
                   if (colon == std::string_view::npos) throw ConfigError(ctx.line, "energy_override needs id:joules");
                   const auto id = integer(trim(v.substr(0, colon)), ctx);
                   c.topology.energy_overrides[static_cast<NodeId>(id)] =
                       positive(trim(v.substr(colon + 1)), ctx, "energy_override");
                 },
                 {}});
    // routing
    k.push_back({"routing", "mode",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   const auto m = parse_routing_mode(std::string(v));
                   if (!m) throw ConfigError(ctx.line, "mode must be aodv or newaodv");
                   c.routing.mode = *m;
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.routing.mode)); }});
    k.push_back(count("routing", "ttl", [](auto& c) -> auto& { return c.routing.ttl; }));
    k.push_back(real("routing", "rebroadcast_delay_newaodv_s",
                     [](auto& c) -> auto& { return c.routing.rebroadcast_delay_newaodv_s; }));
    k.push_back(real("routing", "rebroadcast_delay_aodv_s",
                     [](auto& c) -> auto& { return c.routing.rebroadcast_delay_aodv_s; }));
    k.push_back(real("routing", "jitter_max_s", [](auto& c) -> auto& { return c.routing.jitter_max_s; }));
    k.push_back(real("routing", "discovery_timeout_s",
                     [](auto& c) -> auto& { return c.routing.discovery_timeout_s; }));
    k.push_back(count("routing", "max_discovery_retries",
                      [](auto& c) -> auto& { return c.routing.max_discovery_retries; }));
    k.push_back(real("routing", "ack_timeout_s", [](auto& c) -> auto& { return c.routing.ack_timeout_s; }));
    k.push_back(count("routing", "data_retries", [](auto& c) -> auto& { return c.routing.data_retries; }));
    // sim
    k.push_back(count("sim", "source", [](auto& c) -> auto& { return c.source; }));
    k.push_back(count("sim", "sink", [](auto& c) -> auto& { return c.sink; }));
    k.push_back({"sim", "interval_s",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) { c.interval_s = positive(v, ctx, "interval_s"); },
                 [](const SimConfig& c) { return fmt(c.interval_s); }});
    k.push_back(real("sim", "duration_s", [](auto& c) -> auto& { return c.duration_s; }));
    k.push_back({"sim", "seed",
                 [](SimConfig& c, std::string_view v, Ctx& ctx) {
                   std::uint64_t out = 0;
                   const auto* end = v.data() + v.size();
                   const auto r = std::from_chars(v.data(), end, out);
                   if (r.ec != std::errc() || r.ptr != end) throw ConfigError(ctx.line, "seed must be an unsigned integer");
                   c.seed = out;
                 },
                 [](const SimConfig& c) { return std::to_string(c.seed); }});
    k.push_back(count("sim", "queue_size", [](auto& c) -> auto& { return c.queue_size; }));
    k.push_back(real("sim", "cw_s", [](auto& c) -> auto& { return c.cw_s; }));
    k.push_back(count("sim", "mac_retry_limit", [](auto& c) -> auto& { return c.mac_retry_limit; }));
    k.push_back(real("sim", "audit_interval_s", [](auto& c) -> auto& { return c.audit_interval_s; }));
    k.push_back(flag("sim", "ideal_channel", [](auto& c) -> auto& { return c.ideal_channel; }));
    k.push_back(flag("sim", "stop_at_first_death", [](auto& c) -> auto& { return c.stop_at_first_death; }));
    return k;
  }();
  return table;
}

const char* const kSuffixes[] = {"_dbm", "_dbw", "_mw", "_w",   "_km",  "_cm",  "_m",    "_ms",   "_us",
                                 "_min", "_s",   "_mj", "_j",   "_khz", "_mhz", "_ghz",  "_hz",   "_kbps",
                                 "_bps", "_mv",  "_v",  "_ma",  "_a",   "_mah", "_h",    "_bits", "_bytes"};

std::string_view strip_suffix(std::string_view key) {
  for (std::string_view s : kSuffixes) {
    if (key.size() > s.size() && key.substr(key.size() - s.size()) == s) return key.substr(0, key.size() - s.size());
  }
  return key;
}

[[noreturn]] void unknown_key(std::string_view section, std::string_view key, const Ctx& ctx) {
  const auto base = strip_suffix(key);
  std::string expected;
  for (const auto& k : keys()) {
    if (section != k.section) continue;
    if (strip_suffix(k.name) == base && key != k.name) {
      if (!expected.empty()) expected += " or ";
      expected += k.name;
    }
  }
  if (!expected.empty()) {
    throw ConfigError(ctx.line, "unit suffix mismatch for '" + std::string(key) + "': expected " + expected);
  }
  throw ConfigError(ctx.line, "unknown key '" + std::string(key) + "' in [" + std::string(section) + "]");
}

SimConfig scenario_base() {
  SimConfig c;
  c.energy.idle_power_w = 3e-6;
  c.interval_s = 300.0;
  c.duration_s = 105000.0;
  return c;
}

SimConfig grid3(double min_j, double step_j, bool boost_source) {
  SimConfig c = scenario_base();
  c.topology.rows = c.topology.cols = 3;
  c.topology.fig3_layout = true;
  c.topology.min_energy_j = min_j;
  c.topology.energy_step_j = step_j;
  c.topology.energy_order = EnergyOrder::column_major;
  c.source = 7;
  c.sink = 5;
  if (boost_source) c.topology.energy_overrides[7] = 1.5 * (min_j + 8 * step_j);
  return c;
}

SimConfig grid5(double min_j, double step_j, NodeId source, NodeId sink, double duration_s) {
  SimConfig c = scenario_base();
  c.topology.rows = c.topology.cols = 5;
  c.topology.fig3_layout = false;
  c.topology.min_energy_j = min_j;
  c.topology.energy_step_j = step_j;
  c.topology.energy_order = EnergyOrder::row_major;
  c.source = source;
  c.sink = sink;
  c.duration_s = duration_s;
  c.topology.energy_overrides[source] = 1.5 * (min_j + 24 * step_j);
  return c;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig3", "case1", "case2", "fig5", "case3", "case4", "case5"}; }

std::optional<SimConfig> preset(std::string_view name) {
  if (name == "fig3") return grid3(0.2, 0.1, false);
  if (name == "case1") return grid3(0.2, 0.1, true);
  if (name == "case2") return grid3(0.3, 0.08, true);
  if (name == "fig5") return grid5(0.2, 0.1, 23, 21, 105000.0);
  if (name == "case3") return grid5(0.02, 0.01, 23, 21, 105000.0);
  if (name == "case4") return grid5(0.2, 0.2, 19, 17, 10500.0);
  if (name == "case5") return grid5(0.2, 0.06, 19, 17, 10500.0);
  return std::nullopt;
}

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  Ctx ctx;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++ctx.line;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(ctx.line, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "radio" && section != "energy" && section != "topology" && section != "routing" &&
          section != "sim") {
        throw ConfigError(ctx.line, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(ctx.line, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(ctx.line, "missing key");
    if (value.empty()) throw ConfigError(ctx.line, "missing value for '" + std::string(key) + "'");
    if (key == "preset") {
      auto p = preset(value);
      if (!p) throw ConfigError(ctx.line, "unknown preset '" + std::string(value) + "'");
      cfg = *p;
      ctx.initial_explicit = false;
      ctx.battery_given = false;
      ctx.source_energy.reset();
      continue;
    }
    if (section.empty()) throw ConfigError(ctx.line, "key '" + std::string(key) + "' outside any section");
    const Key* match = nullptr;
    for (const auto& k : keys()) {
      if (section == k.section && key == k.name) {
        match = &k;
        break;
      }
    }
    if (!match) unknown_key(section, key, ctx);
    match->set(cfg, value, ctx);
  }
  ctx.line = 0;
  if (ctx.battery_given && !ctx.initial_explicit) {
    cfg.energy.initial_energy_j =
        battery_energy(cfg.energy.supply_voltage_v, cfg.battery.avg_current_a, cfg.battery.hours);
  }
  if (cfg.source < 0) throw ConfigError(0, "missing required key 'source' in [sim]");
  if (cfg.sink < 0) throw ConfigError(0, "missing required key 'sink' in [sim]");
  if (ctx.source_energy) cfg.topology.energy_overrides[cfg.source] = *ctx.source_energy;
  try {
    validate(cfg);
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    if (!k.get) continue;
    const std::string v = k.get(cfg);
    if (v.empty()) continue;
    if (section != k.section) {
      if (!section.empty()) out += '\n';
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += k.name;
    out += " = ";
    out += v;
    out += '\n';
    if (section == "topology" && std::string_view(k.name) == "energy_order") {
      for (const auto& [id, j] : cfg.topology.energy_overrides) {
        out += "energy_override = " + std::to_string(id) + ":" + fmt(j) + "\n";
      }
    }
  }
  return out;
}

}  // namespace wsnsim
