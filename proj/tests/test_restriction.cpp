#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "veerflow/cones.hpp"
#include "veerflow/restriction.hpp"

using namespace veerflow;

namespace {

Cocycle carried_class(const Context& c, const std::vector<std::int64_t>& cls) {
  const CarriedResult r = carried_representative(c.vt, cocycle_from_class(c.h, cls));
  EXPECT_TRUE(r.found);
  return r.weights;
}

}  // namespace

TEST(Restriction, ZeroClassKeepsEverything) {
  for (const auto& f : fixtures::all()) {
    const auto& c = fixtures::context(f.sig);
    const RestrictedPolys r = restricted_polynomials(c, Cocycle(c.vt.num_faces(), 0));
    EXPECT_TRUE(r.equal);
    EXPECT_EQ(r.restricted, veering_polynomial_raw(c)) << f.sig;
  }
}

TEST(Restriction, NegativeWeightsRejected) {
  const auto& c = fixtures::context("gLLPQccdfeffhggaagb_201022");
  const Cocycle w = cocycle_from_class(c.h, {1, -1});
  bool negative = false;
  for (auto x : w) negative = negative || x < 0;
  if (!negative) GTEST_SKIP();
  try {
    restricted_polynomials(c, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NegativeWeight");
  }
}

struct Case {
  const char* sig;
  std::vector<std::int64_t> eta;
  std::size_t components;
};

TEST(Restriction, BoundaryClassesOfFixtures) {
  const std::vector<Case> cases = {
      {"gLLPQccdfeffhggaagb_201022", {1, 0}, 1},  {"gLLPQccdfeffhggaagb_201022", {0, 1}, 1},
      {"fLLQcbecdeepuwsua_20102", {2, 1}, 2},     {"gLLAQcdecfffhsermws_122201", {0, 1}, 2},
      {"hLALMkbcbefggghhwsemws_2112201", {-1, 0}, 3}, {"gvLQQcdeffeffffaafa_201102", {-1, 0, -1}, 1},
      {"gvLQQcdeffeffffaafa_201102", {0, 1, 1}, 1}, {"eLMkbcddddedde_2100", {0, 1}, 1},
  };
  for (const auto& k : cases) {
    const auto& c = fixtures::context(k.sig);
    const RestrictedPolys r = restricted_polynomials(c, carried_class(c, k.eta));
    EXPECT_TRUE(r.equal) << k.sig;
    EXPECT_TRUE(r.product_ok) << k.sig;
    EXPECT_EQ(r.graph.components.size(), k.components) << k.sig;
    for (int e : r.graph.edges) EXPECT_EQ(r.weights[e], 0);
  }
}

TEST(Restriction, RecurrentSubgraphDropsTransientEdges) {
  LabeledDigraph g;
  g.num_vertices = 3;
  g.add_edge(0, 0, {});
  g.add_edge(0, 1, {});
  g.add_edge(1, 2, {});
  g.add_edge(2, 1, {});
  const RestrictedGraph r = recurrent_subgraph(g, [](int) { return true; });
  EXPECT_EQ(r.edges, (std::vector<int>{0, 2, 3}));
  ASSERT_EQ(r.components.size(), 2u);
  const RestrictedGraph none = recurrent_subgraph(g, [](int i) { return i == 1; });
  EXPECT_TRUE(none.empty());
}

TEST(Restriction, NonLayeredBoundaryClassVanishesInH1Grading) {
  // Φ|η carries a cycle of class 0 in H1/torsion, so P_{Φ|η} = 1 - 1 = 0 in this grading.
  const auto& c = fixtures::context("gLLAQbecdfffhhnkqnc_120012");
  const RestrictedPolys r = restricted_polynomials(c, carried_class(c, {1}));
  EXPECT_TRUE(r.equal);
  EXPECT_TRUE(r.restricted.is_zero());
}
