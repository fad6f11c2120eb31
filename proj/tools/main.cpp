// wsnsim: command-line front end.
//
//   wsnsim simulate <config> [--trace FILE] [--seed N] [--mode aodv|newaodv]
//   wsnsim compare  <config> --seeds a..b --modes aodv,newaodv [--threads N] [--out FILE]
//   wsnsim derive   <config>
//   wsnsim audit    <trace>
//
// Exit codes: 0 ok, 1 config error, 2 runtime validation failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wsnsim/config.hpp"
#include "wsnsim/derive.hpp"
#include "wsnsim/experiment.hpp"
#include "wsnsim/trace_audit.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kValidationFailure = 2;
constexpr double kConservationTolerance = 1e-9;

void line(const char* key, double value, const char* unit) { std::printf("%-28s %.9g %s\n", key, value, unit); }

int cmd_simulate(const std::string& path, const std::string& trace_path, std::optional<std::uint64_t> seed,
                 const std::string& mode) {
  auto cfg = wsnsim::load_config(path);
  if (seed) cfg.seed = *seed;
  if (!mode.empty()) {
    auto m = wsnsim::parse_routing_mode(mode);
    if (!m) throw wsnsim::ConfigError(0, "unknown mode '" + mode + "'");
    cfg.routing.mode = *m;
  }
  const auto result = wsnsim::run(cfg, !trace_path.empty());
  const auto& s = result.stats;
  std::printf("mode                         %s\n", wsnsim::to_string(cfg.routing.mode));
  std::printf("seed                         %llu\n", static_cast<unsigned long long>(cfg.seed));
  std::printf("packets_generated            %d\n", s.packets_generated);
  std::printf("packets_delivered            %d\n", s.packets_delivered);
  line("delivery_ratio", s.delivery_ratio, "");
  std::printf("discoveries                  %d\n", s.discoveries);
  line("avg_consumed", s.avg_consumed_total, "J");
  line("avg_idle", s.avg_consumed[static_cast<std::size_t>(wsnsim::EnergyCategory::idle)], "J");
  line("avg_tx", s.avg_consumed[static_cast<std::size_t>(wsnsim::EnergyCategory::tx)], "J");
  line("avg_rx", s.avg_consumed[static_cast<std::size_t>(wsnsim::EnergyCategory::rx)], "J");
  line("avg_sleep", s.avg_consumed[static_cast<std::size_t>(wsnsim::EnergyCategory::sleep)], "J");
  std::printf("first_route                  %s\n", s.first_route().c_str());
  for (std::size_t i = 0; i < s.routes.size(); ++i) {
    const auto& r = s.routes[i];
    std::printf("route[%zu]                     %s sent=%d delivered=%d\n", i, wsnsim::join_path(r.path).c_str(),
                r.data_sent, r.data_delivered);
  }
  if (s.partition_time) line("partition_time", *s.partition_time, "s");
  else std::printf("partition_time               none\n");
  line("end_time", s.end_time, "s");
  line("max_conservation_error", s.max_conservation_error, "");

  if (!trace_path.empty()) {
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << trace_path << "\n";
      return kValidationFailure;
    }
    out << result.trace;
  }
  if (s.max_conservation_error > kConservationTolerance) {
    std::cerr << "energy conservation audit failed\n";
    return kValidationFailure;
  }
  return kOk;
}

int cmd_compare(const std::string& path, const std::string& seeds_text, const std::string& modes_text,
                unsigned threads, const std::string& out_path) {
  const auto cfg = wsnsim::load_config(path);
  const auto seeds = wsnsim::parse_seed_range(seeds_text);
  if (!seeds) throw wsnsim::ConfigError(0, "bad --seeds '" + seeds_text + "' (expected a..b)");
  const auto modes = wsnsim::parse_modes(modes_text);
  if (!modes) throw wsnsim::ConfigError(0, "bad --modes '" + modes_text + "'");
  const auto e = wsnsim::run_experiment(cfg, *seeds, *modes, threads);
  const auto csv = wsnsim::to_csv(e);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return kValidationFailure;
    }
    out << csv;
  }
  for (const auto& r : e.rows) {
    if (r.stats.max_conservation_error > kConservationTolerance) {
      std::cerr << "energy conservation audit failed for seed " << r.seed << "\n";
      return kValidationFailure;
    }
  }
  return kOk;
}

int cmd_derive(const std::string& path) {
  std::fputs(wsnsim::format(wsnsim::derive(wsnsim::load_config(path))).c_str(), stdout);
  return kOk;
}

int cmd_audit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return kConfigError;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto a = wsnsim::audit_trace(buf.str());
  std::printf("lines                        %zu\n", a.lines);
  std::printf("packets_generated            %d\n", a.stats.packets_generated);
  std::printf("packets_delivered            %d\n", a.stats.packets_delivered);
  std::printf("discoveries                  %d\n", a.stats.discoveries);
  std::printf("routes                       %zu\n", a.stats.routes.size());
  std::printf("violations                   %zu\n", a.violations.size());
  for (const auto& v : a.violations) std::printf("  %s\n", v.c_str());
  return a.ok() ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless sensor network routing simulator (AODV / NEWAODV)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_path;
  std::string mode;
  std::optional<std::uint64_t> seed;
  auto* sim = app.add_subcommand("simulate", "Run one simulation and print its statistics");
  sim->add_option("config", config_path, "Config file")->required();
  sim->add_option("--trace", trace_path, "Write the event trace to this file");
  sim->add_option("--seed", seed, "Override the configured seed");
  sim->add_option("--mode", mode, "Override the routing mode (aodv|newaodv)");

  std::string seeds_text = "1..10";
  std::string modes_text = "aodv,newaodv";
  unsigned threads = 1;
  std::string out_path;
  auto* cmp = app.add_subcommand("compare", "Seed sweep over routing modes, CSV output");
  cmp->add_option("config", config_path, "Config file")->required();
  cmp->add_option("--seeds", seeds_text, "Inclusive seed range a..b");
  cmp->add_option("--modes", modes_text, "Comma-separated modes");
  cmp->add_option("--threads", threads, "Worker threads");
  cmp->add_option("--out", out_path, "Write CSV here instead of stdout");

  auto* der = app.add_subcommand("derive", "Print the link-budget and energy derivation sheet");
  der->add_option("config", config_path, "Config file")->required();

  std::string audit_path;
  auto* aud = app.add_subcommand("audit", "Check a trace file and rebuild its statistics");
  aud->add_option("trace", audit_path, "Trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kConfigError;
  }

  try {
    if (*sim) return cmd_simulate(config_path, trace_path, seed, mode);
    if (*cmp) return cmd_compare(config_path, seeds_text, modes_text, threads, out_path);
    if (*der) return cmd_derive(config_path);
    if (*aud) return cmd_audit(audit_path);
  } catch (const wsnsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const wsnsim::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kOk;
}
