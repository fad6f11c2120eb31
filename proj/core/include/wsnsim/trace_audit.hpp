#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/simulator.hpp"

namespace wsnsim {

struct TraceAudit {
  std::size_t lines = 0;
  std::vector<std::string> violations;
  /// Statistics rebuilt from the trace alone. Fields the trace does not
  /// carry (audits, max_conservation_error) stay at their defaults.
  RunStats stats;

  bool ok() const { return violations.empty(); }
};

/// Replays a trace and checks ordering, causality of deliveries, silence of
/// dead nodes, loop-free paths and per-node energy conservation.
TraceAudit audit_trace(std::string_view trace);

}  // namespace wsnsim
