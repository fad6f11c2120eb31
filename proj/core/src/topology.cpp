#include "wsnsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "wsnsim/rng.hpp"

namespace wsnsim {

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

const char* to_string(LatticeKind k) {
  return k == LatticeKind::square ? "square" : "hexagonal";
}

NodeId Topology::id_at(int row, int col) const {
  for (const auto& n : nodes) {
    if (n.row == row && n.col == col) return n.id;
  }
  return -1;
}

namespace {

std::vector<NodeId> resolve_layout(const GridSpec& spec) {
  const int n = spec.rows * spec.cols;
  if (spec.id_layout.empty()) {
    std::vector<NodeId> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    return ids;
  }
  if (static_cast<int>(spec.id_layout.size()) != n) {
    throw ValidationError("topology: id layout has " + std::to_string(spec.id_layout.size()) +
                          " entries, expected " + std::to_string(n));
  }
  std::vector<NodeId> sorted = spec.id_layout;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i) {
    if (sorted[static_cast<std::size_t>(i)] != i) {
      throw ValidationError("topology: id layout must be a permutation of 0.." + std::to_string(n - 1));
    }
  }
  return spec.id_layout;
}

void check_spec(const GridSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw ValidationError("topology: rows and cols must be >= 1");
  if (!(spec.spacing_m > 0.0)) throw ValidationError("topology: spacing must be positive");
  if (!(spec.antenna_height_m > 0.0)) throw ValidationError("topology: antenna height must be positive");
}

template <typename PlaceFn>
Topology build(const GridSpec& spec, LatticeKind kind, PlaceFn place) {
  check_spec(spec);
  const auto layout = resolve_layout(spec);
  Topology topo;
  topo.kind = kind;
  topo.spacing_m = spec.spacing_m;
  topo.rows = spec.rows;
  topo.cols = spec.cols;
  topo.nodes.resize(layout.size());
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const NodeId id = layout[static_cast<std::size_t>(r * spec.cols + c)];
      auto& node = topo.nodes[static_cast<std::size_t>(id)];
      node.id = id;
      node.row = r;
      node.col = c;
      node.position = place(r, c);
      node.position.z = spec.antenna_height_m;
    }
  }
  const auto report = neighbor_report(topo, spec.hearing_range_m);
  if (!report.ok()) {
    std::string msg = std::string("topology: ") + to_string(kind) + " spacing " +
                      std::to_string(spec.spacing_m) + " m with hearing range " +
                      std::to_string(spec.hearing_range_m) + " m";
    if (!report.broken_links.empty()) msg += " leaves lattice neighbours out of range";
    if (!report.extra_links.empty()) msg += " lets non-adjacent nodes hear each other";
    throw ValidationError(msg);
  }
  return topo;
}

}  // namespace

Topology square_grid(const GridSpec& spec) {
  return build(spec, LatticeKind::square, [&](int r, int c) {
    return Position{c * spec.spacing_m, r * spec.spacing_m, 0.0};
  });
}

Topology hexagonal(const GridSpec& spec) {
  const double s = spec.spacing_m;
  return build(spec, LatticeKind::hexagonal, [&](int r, int c) {
    const double lift = ((r + c) % 2 == 0) ? 0.5 * s : 0.0;
    return Position{c * s * std::sqrt(3.0) / 2.0, r * 1.5 * s + lift, 0.0};
  });
}

std::vector<std::pair<NodeId, NodeId>> lattice_links(const Topology& topo) {
  std::vector<std::pair<NodeId, NodeId>> links;
  auto add = [&](int r1, int c1, int r2, int c2) {
    if (r2 >= topo.rows || c2 >= topo.cols) return;
    NodeId a = topo.id_at(r1, c1);
    NodeId b = topo.id_at(r2, c2);
    links.emplace_back(std::min(a, b), std::max(a, b));
  };
  for (int r = 0; r < topo.rows; ++r) {
    for (int c = 0; c < topo.cols; ++c) {
      add(r, c, r, c + 1);
      if (topo.kind == LatticeKind::square || (r + c) % 2 == 0) add(r, c, r + 1, c);
    }
  }
  std::sort(links.begin(), links.end());
  return links;
}

std::vector<std::vector<NodeId>> neighbor_lists(const Topology& topo, double range_m) {
  std::vector<std::vector<NodeId>> out(topo.size());
  for (std::size_t i = 0; i < topo.size(); ++i) {
    for (std::size_t j = i + 1; j < topo.size(); ++j) {
      if (distance(topo.nodes[i].position, topo.nodes[j].position) <= range_m) {
        out[i].push_back(static_cast<NodeId>(j));
        out[j].push_back(static_cast<NodeId>(i));
      }
    }
  }
  for (auto& l : out) std::sort(l.begin(), l.end());
  return out;
}

NeighborReport neighbor_report(const Topology& topo, double range_m) {
  NeighborReport report;
  report.degree_limit = topo.kind == LatticeKind::square ? 4 : 3;
  const auto nbrs = neighbor_lists(topo, range_m);
  std::set<std::pair<NodeId, NodeId>> in_range;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const int deg = static_cast<int>(nbrs[i].size());
    report.max_degree = std::max(report.max_degree, deg);
    if (deg > report.degree_limit) report.over_limit.push_back(static_cast<NodeId>(i));
    for (NodeId j : nbrs[i]) {
      if (static_cast<NodeId>(i) < j) in_range.emplace(static_cast<NodeId>(i), j);
    }
  }
  const auto lattice = lattice_links(topo);
  const std::set<std::pair<NodeId, NodeId>> lattice_set(lattice.begin(), lattice.end());
  for (const auto& l : lattice) {
    if (!in_range.contains(l)) report.broken_links.push_back(l);
  }
  for (const auto& l : in_range) {
    if (!lattice_set.contains(l)) report.extra_links.push_back(l);
  }
  return report;
}

Topology jitter(const Topology& topo, double max_offset_m, std::uint64_t seed) {
  if (max_offset_m < 0.0) throw std::invalid_argument("jitter: max offset must be non-negative");
  Topology out = topo;
  if (max_offset_m == 0.0) return out;
  Rng rng(seed);
  for (auto& n : out.nodes) {
    n.position.x += rng.uniform(-max_offset_m, max_offset_m);
    n.position.y += rng.uniform(-max_offset_m, max_offset_m);
  }
  return out;
}

std::vector<double> assign_energies(const Topology& topo, const EnergyAssignment& a) {
  const std::size_t n = topo.size();
  if (a.ordering.size() != n) {
    throw ValidationError("energy assignment: ordering has " + std::to_string(a.ordering.size()) +
                          " ids, topology has " + std::to_string(n));
  }
  std::vector<double> energy(n, -1.0);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const NodeId id = a.ordering[rank];
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      throw ValidationError("energy assignment: unknown node id " + std::to_string(id));
    }
    if (energy[static_cast<std::size_t>(id)] >= 0.0) {
      throw ValidationError("energy assignment: duplicate node id " + std::to_string(id));
    }
    energy[static_cast<std::size_t>(id)] = a.min_energy_j + static_cast<double>(rank) * a.step_j;
  }
  for (const auto& [id, joules] : a.overrides) {
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      throw ValidationError("energy assignment: override for unknown node id " + std::to_string(id));
    }
    energy[static_cast<std::size_t>(id)] = joules;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(energy[i] > 0.0)) {
      throw ValidationError("energy assignment: node " + std::to_string(i) + " gets non-positive energy");
    }
  }
  return energy;
}

std::vector<NodeId> column_major_order(const Topology& topo) {
  std::vector<NodeId> ids;
  for (int c = 0; c < topo.cols; ++c) {
    for (int r = 0; r < topo.rows; ++r) ids.push_back(topo.id_at(r, c));
  }
  return ids;
}

std::vector<NodeId> row_major_order(const Topology& topo) {
  std::vector<NodeId> ids;
  for (int r = 0; r < topo.rows; ++r) {
    for (int c = 0; c < topo.cols; ++c) ids.push_back(topo.id_at(r, c));
  }
  return ids;
}

std::vector<NodeId> fig3_layout() {
  // row 0 (bottom) .. row 2 (top)
  return {7, 4, 8,
          3, 0, 1,
          6, 2, 5};
}

}  // namespace wsnsim
