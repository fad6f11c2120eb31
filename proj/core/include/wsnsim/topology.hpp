#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsnsim {

using NodeId = int;

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Position&) const = default;
};

double distance(const Position& a, const Position& b);

enum class LatticeKind { square, hexagonal };

const char* to_string(LatticeKind k);

struct Node {
  NodeId id = 0;
  Position position;
  int row = 0;  // lattice coordinates, row 0 at the bottom
  int col = 0;

  bool operator==(const Node&) const = default;
};

/// Node placement. `nodes[i].id == i` always holds.
struct Topology {
  std::vector<Node> nodes;
  LatticeKind kind = LatticeKind::square;
  double spacing_m = 0.0;
  int rows = 0;
  int cols = 0;

  std::size_t size() const { return nodes.size(); }
  const Node& at(NodeId id) const { return nodes.at(static_cast<std::size_t>(id)); }
  NodeId id_at(int row, int col) const;

  bool operator==(const Topology&) const = default;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int rows = 3;
  int cols = 3;
  double spacing_m = 150.0;
  double antenna_height_m = 1.0;
  double hearing_range_m = 200.0;
  /// Row-major ids starting at the bottom row. Empty means id = row*cols+col.
  std::vector<NodeId> id_layout;
};

/// Square lattice. Throws ValidationError when the hearing range does not
/// give exactly the orthogonal 4-neighborhood.
Topology square_grid(const GridSpec& spec);

/// Honeycomb lattice (zigzag rows), so every node has at most 3 neighbours.
/// Throws ValidationError when the hearing range breaks that.
Topology hexagonal(const GridSpec& spec);

/// Lattice-adjacent id pairs (a < b) implied by the lattice kind.
std::vector<std::pair<NodeId, NodeId>> lattice_links(const Topology& topo);

/// Symmetric neighbour lists under a pure distance threshold.
std::vector<std::vector<NodeId>> neighbor_lists(const Topology& topo, double range_m);

struct NeighborReport {
  int max_degree = 0;
  int degree_limit = 0;
  std::vector<NodeId> over_limit;                       // degree > limit
  std::vector<std::pair<NodeId, NodeId>> broken_links;  // lattice links out of range
  std::vector<std::pair<NodeId, NodeId>> extra_links;   // in range but not lattice links
  bool ok() const { return over_limit.empty() && broken_links.empty() && extra_links.empty(); }
};

NeighborReport neighbor_report(const Topology& topo, double range_m);

/// Uniform x/y perturbation in [-max_offset, +max_offset]. The neighbour
/// invariants are not enforced; call neighbor_report on the result.
Topology jitter(const Topology& topo, double max_offset_m, std::uint64_t seed);

struct EnergyAssignment {
  double min_energy_j = 0.2;
  double step_j = 0.1;
  std::vector<NodeId> ordering;  // rank 0 gets min_energy_j
  std::map<NodeId, double> overrides;
};

/// Energies indexed by node id.
std::vector<double> assign_energies(const Topology& topo, const EnergyAssignment& assignment);

/// Ids ordered bottom-to-top within each column, columns left-to-right.
std::vector<NodeId> column_major_order(const Topology& topo);
std::vector<NodeId> row_major_order(const Topology& topo);

/// 3x3 numbering that matches every minimum-hop path listed for the
/// nine-node energy example: columns bottom-to-top [7,3,6], [4,0,2], [8,1,5].
std::vector<NodeId> fig3_layout();

}  // namespace wsnsim
