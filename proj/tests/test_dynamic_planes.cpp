#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "veerflow/dynamic_planes.hpp"

using namespace veerflow;

namespace {

const char* kSmall[] = {"cPcbbbiht_12", "dLQacccjsnk_200", "eLAkbccddhhsqs_1220"};

}  // namespace

TEST(DynamicPlanes, DepthOneIsTheSeed) {
  const auto& c = fixtures::context("cPcbbbiht_12");
  for (int seed = 0; seed < c.vt.n; ++seed) {
    PlanePatch p = descending_patch(c, seed, 1);
    const PatchReport rep = check_patch(p, c.g.turns);
    EXPECT_EQ(rep.sectors, 1);
    EXPECT_EQ(rep.euler, 1);
  }
}

TEST(DynamicPlanes, PreconditionsEnforced) {
  const auto& c = fixtures::context("cPcbbbiht_12");
  EXPECT_THROW(descending_patch(c, c.vt.n, 2), Error);
  try {
    descending_patch(c, 0, kDefaultPatchDepth + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(DynamicPlanes, PatchChecksPass) {
  for (const char* sig : kSmall) {
    const auto& c = fixtures::context(sig);
    for (int seed = 0; seed < c.vt.n; ++seed) {
      PlanePatch p = descending_patch(c, seed, 6);
      const PatchReport rep = check_patch(p, c.g.turns);
      for (const auto& k : rep.checks) EXPECT_TRUE(k.ok) << sig << " seed " << seed << " " << k.name << ": " << k.witness;
      EXPECT_GT(rep.interior_vertices, 0);
      EXPECT_EQ(rep.euler, 1);
    }
  }
}

TEST(DynamicPlanes, PatchesGrowWithDepth) {
  const auto& c = fixtures::context("dLQacccjsnk_200");
  int prev = 0;
  for (int k = 1; k <= 5; ++k) {
    PlanePatch p = descending_patch(c, 0, k);
    const int n = check_patch(p, c.g.turns).sectors;
    EXPECT_GT(n, prev);
    prev = n;
  }
}

TEST(DynamicPlanes, ChainsShorterThanDelta) {
  for (const char* sig : kSmall) {
    const auto& c = fixtures::context(sig);
    const int delta = delta_tau(c.vt);
    for (int seed = 0; seed < c.vt.n; ++seed) {
      PlanePatch p = descending_patch(c, seed, 6);
      const auto ch = chains(p);
      EXPECT_FALSE(ch.empty());
      for (const auto& x : ch) {
        EXPECT_LT(x.length(), delta) << sig;
        EXPECT_TRUE(x.uniform_veer) << sig;
        EXPECT_GE(x.length(), 1);
      }
    }
  }
}

TEST(DynamicPlanes, BranchCyclesResolveToFlowCycles) {
  const auto& c = fixtures::context("cPcbbbiht_12");
  const auto sc = special_cycles(c.vt, c.g.turns);
  ASSERT_FALSE(sc.branch.empty());
  for (const auto& b : sc.branch) {
    const Resolution r = resolve_dual_cycle(c, b.faces, 6);
    EXPECT_TRUE(r.branch_cycle);
    EXPECT_EQ(r.kind, ResolutionKind::FlowCycle);
    EXPECT_TRUE(r.class_match);
    EXPECT_EQ(r.result_class, r.gamma_class);
  }
}

TEST(DynamicPlanes, OddABCycleResolvesToItself) {
  bool seen = false;
  for (const auto& f : fixtures::all()) {
    const auto& c = fixtures::context(f.sig);
    if (c.vt.n > 5) continue;
    for (const auto& a : special_cycles(c.vt, c.g.turns).ab) {
      if (a.faces.size() % 2 == 0) continue;
      seen = true;
      const Resolution r = resolve_dual_cycle(c, a.faces, 6);
      EXPECT_EQ(r.kind, ResolutionKind::OddABCycle) << f.sig;
      EXPECT_EQ(r.ab_cycle, a.faces);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(DynamicPlanes, SimpleCyclesResolveWithMatchingClass) {
  const auto& c = fixtures::context("dLQacccjsnk_200");
  const int delta = delta_tau(c.vt);
  for (const auto& g : simple_gamma_cycles(c.vt)) {
    if (g.size() > 6) continue;
    const Resolution r = resolve_dual_cycle(c, g, 6);
    ASSERT_NE(r.kind, ResolutionKind::DepthExceeded) << r.note;
    if (r.kind == ResolutionKind::FlowCycle) {
      EXPECT_TRUE(r.class_match);
      EXPECT_EQ(sum_labels(c.phi_labels, r.phi_cycle, c.betti()), detail::gamma_class(c, g));
    }
    const StripWidth sw = strip_width(c, g, 6);
    ASSERT_FALSE(sw.exceeded);
    EXPECT_GE(sw.width, 1);
    EXPECT_LE(sw.width, delta);
    EXPECT_TRUE(sw.parity_consistent);
  }
}

TEST(DynamicPlanes, NotACycleRejected) {
  const auto& c = fixtures::context("cPcbbbiht_12");
  EXPECT_THROW(resolve_dual_cycle(c, {0, 0, 0, 1}, 4), Error);
}
