#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "veerflow/graphs.hpp"

using namespace veerflow;

TEST(Graphs, DualGraphIsTwoInTwoOut) {
  for (const auto& f : fixtures::all()) {
    const Context& c = fixtures::context(f.sig);
    const LabeledDigraph& g = c.g.gamma;
    ASSERT_EQ(g.num_vertices, c.vt.n) << f.sig;
    ASSERT_EQ(static_cast<int>(g.edges.size()), 2 * c.vt.n) << f.sig;
    for (int d : g.out_degrees()) EXPECT_EQ(d, 2) << f.sig;
    for (int d : g.in_degrees()) EXPECT_EQ(d, 2) << f.sig;
    EXPECT_TRUE(strongly_connected(g)) << f.sig;
  }
}

TEST(Graphs, FlowGraphHasThreeEdgesPerTetrahedron) {
  for (const auto& f : fixtures::all()) {
    const Context& c = fixtures::context(f.sig);
    const LabeledDigraph& phi = c.g.phi;
    ASSERT_EQ(phi.num_vertices, c.vt.n);
    ASSERT_EQ(static_cast<int>(phi.edges.size()), 3 * c.vt.n);
    for (int t = 0; t < c.vt.n; ++t)
      for (int k = 0; k < 3; ++k) {
        const auto& e = phi.edges[3 * t + k];
        EXPECT_EQ(e.tet, t);
        EXPECT_EQ(e.slot, k);
        EXPECT_EQ(e.tail, phi.edges[3 * t].tail);
      }
    for (int d : phi.out_degrees()) EXPECT_EQ(d, 3) << f.sig;
  }
}

TEST(Graphs, FlowEdgeChainsAreCycles) {
  // Closed Φ-walks give closed chains in the dual complex.
  for (const auto& f : fixtures::all()) {
    const Context& c = fixtures::context(f.sig);
    for (const auto& cyc : simple_cycles(c.g.phi, 2000))
      EXPECT_TRUE(c.h.is_cycle(chain_of_edges(c.g.phi, cyc))) << f.sig;
  }
}

TEST(Graphs, EachIncomingFaceHasOneTurnOfEachKind) {
  for (const auto& f : fixtures::all()) {
    const Context& c = fixtures::context(f.sig);
    const TurnTable& tt = c.g.turns;
    for (int fc = 0; fc < c.vt.num_faces(); ++fc) {
      std::multiset<TurnKind> kinds(tt.kind[fc].begin(), tt.kind[fc].end());
      EXPECT_EQ(kinds.count(TurnKind::AB), 1u) << f.sig << " face " << fc;
      EXPECT_EQ(kinds.count(TurnKind::Branching), 1u) << f.sig << " face " << fc;
      EXPECT_EQ(tt.turn(fc, tt.branch_next[fc]), TurnKind::Branching);
      EXPECT_EQ(tt.turn(fc, tt.ab_next[fc]), TurnKind::AB);
    }
  }
}

TEST(Graphs, SectorSidesAreBranchingThenAB) {
  for (const auto& f : fixtures::all()) {
    const Context& c = fixtures::context(f.sig);
    for (const auto& s : c.g.secs)
      for (int k = 0; k < 2; ++k) {
        const auto& es = s.side_edges[k];
        ASSERT_GE(es.size(), 2u);
        for (std::size_t i = 0; i + 1 < es.size(); ++i)
          EXPECT_EQ(c.g.turns.turn(es[i], es[i + 1]), i + 2 == es.size() ? TurnKind::AB : TurnKind::Branching)
              << f.sig << " sector " << s.edge << " side " << k;
      }
  }
}

TEST(Graphs, SpecialCyclesPartitionTheFaces) {
  for (const auto& f : fixtures::all()) {
    const Context& c = fixtures::context(f.sig);
    const SpecialCycles sc = special_cycles(c.vt, c.g.turns);
    for (const auto* family : {&sc.branch, &sc.ab}) {
      std::set<int> seen;
      for (const auto& cyc : *family) {
        EXPECT_TRUE(is_gamma_cycle(c.vt, cyc.faces));
        for (int fc : cyc.faces) EXPECT_TRUE(seen.insert(fc).second) << f.sig;
      }
      EXPECT_EQ(static_cast<int>(seen.size()), c.vt.num_faces()) << f.sig;
    }
    for (const auto& cyc : sc.branch) EXPECT_EQ(cyc.ab_turns, 0);
    for (const auto& cyc : sc.ab) EXPECT_EQ(cyc.ab_turns, static_cast<int>(cyc.faces.size()));
  }
}

TEST(Graphs, SimpleGammaCyclesAreGammaCycles) {
  const Context& c = fixtures::context("cPcbbbiht_12");
  const auto cycles = simple_gamma_cycles(c.vt);
  EXPECT_FALSE(cycles.empty());
  for (const auto& g : cycles) EXPECT_TRUE(is_gamma_cycle(c.vt, g));
  EXPECT_THROW(simple_gamma_cycles(c.vt, 1), Error);
}
