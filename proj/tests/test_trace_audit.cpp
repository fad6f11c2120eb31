#include <gtest/gtest.h>

#include <cstdio>
#include <regex>
#include <sstream>

#include "support/scenarios.hpp"
#include "wsnsim/trace_audit.hpp"

using namespace wsnsim;

namespace {

RunResult traced(RoutingMode mode, std::uint64_t seed) {
  auto cfg = scenarios::fig3();
  cfg.routing.mode = mode;
  cfg.seed = seed;
  return run(cfg, true);
}

bool mentions(const TraceAudit& a, const std::string& word) {
  for (const auto& v : a.violations) {
    if (v.find(word) != std::string::npos) return true;
  }
  return false;
}

std::string replace_first(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  if (at == std::string::npos) return s;
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST(Replay, RebuildsRunStats) {
  for (auto mode : {RoutingMode::aodv, RoutingMode::newaodv}) {
    const auto res = traced(mode, 3);
    const auto audit = audit_trace(res.trace);
    ASSERT_TRUE(audit.ok()) << audit.violations.front();
    const auto& a = audit.stats;
    const auto& s = res.stats;
    EXPECT_EQ(a.packets_generated, s.packets_generated);
    EXPECT_EQ(a.packets_delivered, s.packets_delivered);
    EXPECT_EQ(a.dropped_queue, s.dropped_queue);
    EXPECT_EQ(a.dropped_no_route, s.dropped_no_route);
    EXPECT_EQ(a.dropped_link, s.dropped_link);
    EXPECT_EQ(a.discoveries, s.discoveries);
    EXPECT_EQ(a.partition_time, s.partition_time);
    EXPECT_DOUBLE_EQ(a.end_time, s.end_time);
    ASSERT_EQ(a.routes.size(), s.routes.size());
    for (std::size_t i = 0; i < a.routes.size(); ++i) {
      EXPECT_EQ(a.routes[i].path, s.routes[i].path);
      EXPECT_EQ(a.routes[i].data_sent, s.routes[i].data_sent);
      EXPECT_EQ(a.routes[i].data_delivered, s.routes[i].data_delivered);
      EXPECT_EQ(a.routes[i].data_sent_before_death, s.routes[i].data_sent_before_death);
    }
    ASSERT_EQ(a.node_residual.size(), s.node_residual.size());
    for (std::size_t i = 0; i < s.node_residual.size(); ++i) {
      EXPECT_DOUBLE_EQ(a.node_residual[i], s.node_residual[i]);
      EXPECT_DOUBLE_EQ(a.node_initial[i], s.node_initial[i]);
      for (std::size_t c = 0; c < kEnergyCategories; ++c) {
        EXPECT_DOUBLE_EQ(a.node_consumed[i][c], s.node_consumed[i][c]);
      }
      EXPECT_EQ(a.death_time[i].has_value(), s.death_time[i].has_value());
    }
    EXPECT_NEAR(a.avg_consumed_total, s.avg_consumed_total, 1e-12);
  }
}

TEST(Tamper, ActivityAfterDeath) {
  const auto res = traced(RoutingMode::newaodv, 1);
  std::smatch m;
  const std::regex death(R"(^(\S+) (\d+) node_death)");
  std::istringstream in(res.trace);
  std::string line, node;
  double when = 0.0;
  while (std::getline(in, line)) {
    if (std::regex_search(line, m, death)) {
      when = std::stod(m[1]);
      node = m[2];
      break;
    }
  }
  ASSERT_FALSE(node.empty());
  // splice a transmission by the dead node right after its death line
  const auto at = res.trace.find(line) + line.size() + 1;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f %s tx kind=rreq uid=999999 to=-1\n", when, node.c_str());
  auto bad = res.trace;
  bad.insert(at, buf);
  EXPECT_TRUE(mentions(audit_trace(bad), "dead"));
}

TEST(Tamper, TimeGoesBackwards) {
  auto bad = traced(RoutingMode::aodv, 1).trace;
  bad += "0.000000000 7 data_gen id=99999\n";
  EXPECT_FALSE(audit_trace(bad).ok());
}

TEST(Tamper, DuplicateDelivery) {
  const auto res = traced(RoutingMode::aodv, 2);
  const std::regex deliver(R"(\n(\S+ \d+ data_delivered [^\n]*)\n)");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(res.trace, m, deliver));
  const auto bad = replace_first(res.trace, m[1].str() + "\n", m[1].str() + "\n" + m[1].str() + "\n");
  EXPECT_FALSE(audit_trace(bad).ok());
}

TEST(Tamper, ConservationBroken) {
  const auto res = traced(RoutingMode::newaodv, 2);
  const std::regex final_line(R"(\n\S+ 0 node_final initial=(\S+))");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(res.trace, m, final_line));
  const auto bad = replace_first(res.trace, "initial=" + m[1].str(), "initial=" + std::to_string(std::stod(m[1]) + 0.01));
  EXPECT_TRUE(mentions(audit_trace(bad), "conserved"));
}

TEST(Tamper, Garbage) {
  EXPECT_FALSE(audit_trace("not a trace\n").ok());
  EXPECT_FALSE(audit_trace("").ok());
}
