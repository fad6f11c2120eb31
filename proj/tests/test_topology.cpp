#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "support/path_oracle.hpp"
#include "wsnsim/topology.hpp"

using namespace wsnsim;

namespace {

std::vector<oracle::Point> points(const Topology& t) {
  std::vector<oracle::Point> out;
  for (const auto& n : t.nodes) out.push_back({n.position.x, n.position.y});
  return out;
}

GridSpec fig3_spec() {
  GridSpec s;
  s.id_layout = fig3_layout();
  return s;
}

}  // namespace

TEST(SquareGrid, ThreeByThreeHasFourNeighbourhood) {
  const auto t = square_grid(GridSpec{});
  ASSERT_EQ(t.size(), 9u);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t.nodes[i].id, static_cast<NodeId>(i));
  const auto rep = neighbor_report(t, 200.0);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.max_degree, 4);
  // 150 * sqrt(2) = 212.13 > 200
  EXPECT_GT(distance(t.at(0).position, t.at(4).position), 200.0);
  const auto nb = neighbor_lists(t, 200.0);
  EXPECT_EQ(nb[4].size(), 4u);
  EXPECT_EQ(nb[0].size(), 2u);
}

TEST(SquareGrid, AntennaHeightIsZ) {
  GridSpec s;
  s.antenna_height_m = 1.0;
  for (const auto& n : square_grid(s).nodes) EXPECT_EQ(n.position.z, 1.0);
}

TEST(SquareGrid, SingleNode) {
  GridSpec s;
  s.rows = s.cols = 1;
  const auto t = square_grid(s);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_TRUE(neighbor_lists(t, 200.0)[0].empty());
}

TEST(SquareGrid, RejectsSpacingThatAddsDiagonals) {
  GridSpec s;
  s.spacing_m = 120.0;  // diagonal 169.7 m is inside 200 m
  EXPECT_THROW(square_grid(s), ValidationError);
  s.spacing_m = 250.0;  // orthogonal neighbours out of range
  EXPECT_THROW(square_grid(s), ValidationError);
  s.spacing_m = 0.0;
  EXPECT_THROW(square_grid(s), ValidationError);
}

TEST(SquareGrid, Fig3Layout) {
  const auto t = square_grid(fig3_spec());
  // columns bottom-to-top: [7,3,6], [4,0,2], [8,1,5]
  const int cols[3][3] = {{7, 3, 6}, {4, 0, 2}, {8, 1, 5}};
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) EXPECT_EQ(t.id_at(r, c), cols[c][r]) << r << "," << c;
  }
}

TEST(SquareGrid, Fig3AdmitsEveryListedPath) {
  const auto t = square_grid(fig3_spec());
  const auto adj = oracle::unit_disk(points(t), 200.0);
  const std::vector<oracle::Path> listed = {{7, 3, 6, 2, 5}, {7, 3, 0, 2, 5}, {7, 3, 0, 1, 5},
                                            {7, 4, 0, 2, 5}, {7, 4, 0, 1, 5}, {7, 4, 8, 1, 5}};
  for (const auto& p : listed) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const auto& n = adj[static_cast<std::size_t>(p[i])];
      EXPECT_NE(std::find(n.begin(), n.end(), p[i + 1]), n.end()) << p[i] << "->" << p[i + 1];
    }
  }
  auto found = oracle::min_hop_paths(adj, 7, 5);
  std::sort(found.begin(), found.end());
  auto want = listed;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(found, want);
}

TEST(Hexagonal, SixRingHasDegreeTwo) {
  GridSpec s;
  s.rows = 2;
  s.cols = 3;
  const auto t = hexagonal(s);
  for (const auto& nb : neighbor_lists(t, 200.0)) EXPECT_EQ(nb.size(), 2u);
}

TEST(Hexagonal, SingleNode) {
  GridSpec s;
  s.rows = s.cols = 1;
  EXPECT_TRUE(neighbor_lists(hexagonal(s), 200.0)[0].empty());
}

TEST(Hexagonal, ThreeByThreeMaxDegreeThree) {
  const auto t = hexagonal(GridSpec{});
  const auto rep = neighbor_report(t, 200.0);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.max_degree, 3);
  EXPECT_EQ(rep.degree_limit, 3);
  // every lattice bond is exactly one spacing long
  for (auto [a, b] : lattice_links(t)) EXPECT_NEAR(distance(t.at(a).position, t.at(b).position), 150.0, 1e-9);
}

TEST(Hexagonal, LargerLatticeKeepsDegreeThree) {
  GridSpec s;
  s.rows = 6;
  s.cols = 7;
  EXPECT_EQ(neighbor_report(hexagonal(s), 200.0).max_degree, 3);
}

TEST(Neighbours, Symmetric) {
  GridSpec s;
  s.rows = 4;
  s.cols = 5;
  const auto nb = neighbor_lists(jitter(square_grid(s), 30.0, 9), 200.0);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (NodeId j : nb[i]) {
      const auto& back = nb[static_cast<std::size_t>(j)];
      EXPECT_NE(std::find(back.begin(), back.end(), static_cast<NodeId>(i)), back.end());
    }
  }
}

TEST(Jitter, ZeroOffsetIsIdentity) {
  const auto t = square_grid(GridSpec{});
  EXPECT_EQ(jitter(t, 0.0, 42), t);
}

TEST(Jitter, DeterministicPerSeed) {
  const auto t = square_grid(GridSpec{});
  EXPECT_EQ(jitter(t, 10.0, 5), jitter(t, 10.0, 5));
  EXPECT_NE(jitter(t, 10.0, 5), jitter(t, 10.0, 6));
}

TEST(Jitter, OffsetsStayInBox) {
  const auto t = square_grid(GridSpec{});
  const auto j = jitter(t, 10.0, 3);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_LE(std::abs(j.nodes[i].position.x - t.nodes[i].position.x), 10.0);
    EXPECT_LE(std::abs(j.nodes[i].position.y - t.nodes[i].position.y), 10.0);
    EXPECT_EQ(j.nodes[i].position.z, t.nodes[i].position.z);
  }
}

TEST(Jitter, TenMetresKeepsOrthogonalLinks) {
  // Orthogonal pairs stay within 150 + 20*sqrt(2) = 178.3 m < 200 m.
  // Diagonals can shrink to 212.1 - 28.3 = 183.8 m, so they may join.
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto rep = neighbor_report(jitter(square_grid(GridSpec{}), 10.0, seed), 200.0);
    EXPECT_TRUE(rep.broken_links.empty()) << seed;
    for (auto [a, b] : rep.extra_links) {
      const auto t = square_grid(GridSpec{});
      EXPECT_NE(t.at(a).row, t.at(b).row);
      EXPECT_NE(t.at(a).col, t.at(b).col);
    }
  }
}

TEST(Jitter, FourMetresKeepsAdjacencyExactly) {
  // (212.13 - 200) / (2 sqrt 2) = 4.29 m is the largest offset that cannot add a diagonal.
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    EXPECT_TRUE(neighbor_report(jitter(square_grid(GridSpec{}), 4.0, seed), 200.0).ok()) << seed;
  }
}

TEST(Energies, Fig3Ladder) {
  const auto t = square_grid(fig3_spec());
  EnergyAssignment a;
  a.ordering = column_major_order(t);
  const auto e = assign_energies(t, a);
  const double want[9] = {0.6, 0.9, 0.7, 0.3, 0.5, 1.0, 0.4, 0.2, 0.8};
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(e[static_cast<std::size_t>(i)], want[i], 1e-12) << i;
}

TEST(Energies, StepZeroIsUniform) {
  const auto t = square_grid(GridSpec{});
  EnergyAssignment a;
  a.min_energy_j = 0.7;
  a.step_j = 0.0;
  a.ordering = row_major_order(t);
  for (double x : assign_energies(t, a)) EXPECT_EQ(x, 0.7);
}

TEST(Energies, CaseTwoLadderIsABijection) {
  const auto t = square_grid(fig3_spec());
  EnergyAssignment a;
  a.min_energy_j = 0.3;
  a.step_j = 0.08;
  a.ordering = column_major_order(t);
  auto e = assign_energies(t, a);
  std::sort(e.begin(), e.end());
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(e[static_cast<std::size_t>(k)], 0.3 + 0.08 * k, 1e-12);
}

TEST(Energies, OverridesApplyAfterLadder) {
  const auto t = square_grid(fig3_spec());
  EnergyAssignment a;
  a.ordering = column_major_order(t);
  a.overrides[7] = 1.5;
  EXPECT_EQ(assign_energies(t, a)[7], 1.5);
}

TEST(Energies, RejectsBadOrderings) {
  const auto t = square_grid(GridSpec{});
  EnergyAssignment a;
  a.ordering = {0, 1, 2, 3, 4, 5, 6, 7, 7};
  EXPECT_THROW(assign_energies(t, a), ValidationError);
  a.ordering = {0, 1, 2, 3, 4, 5, 6, 7};
  EXPECT_THROW(assign_energies(t, a), ValidationError);
  a.ordering = row_major_order(t);
  a.min_energy_j = 0.0;
  a.step_j = 0.0;
  EXPECT_THROW(assign_energies(t, a), ValidationError);
  a.min_energy_j = 0.2;
  a.overrides[42] = 1.0;
  EXPECT_THROW(assign_energies(t, a), ValidationError);
}
