#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "veerflow/veering_poly.hpp"

using namespace veerflow;

namespace {

struct Labeled {
  LabeledDigraph g;
  std::vector<Exponent> labels;
};

Labeled random_graph(std::mt19937& rng, int nvars) {
  Labeled r;
  r.g.num_vertices = 1 + rng() % 8;
  const int ne = rng() % 17;
  for (int i = 0; i < ne; ++i) {
    r.g.add_edge(rng() % r.g.num_vertices, rng() % r.g.num_vertices, {});
    Exponent e(nvars);
    for (auto& x : e) x = static_cast<int>(rng() % 5) - 2;
    r.labels.push_back(e);
  }
  return r;
}

LaurentPoly invert_variable(const LaurentPoly& p) {
  LaurentPoly r(p.nvars());
  for (const auto& [e, c] : p.terms()) r.add_term({-e[0]}, c);
  return r;
}

}  // namespace

TEST(VeeringPoly, AcyclicGraphGivesOne) {
  LabeledDigraph g;
  g.num_vertices = 3;
  g.add_edge(0, 1, {});
  g.add_edge(1, 2, {});
  EXPECT_TRUE(perron(g, {{1}, {2}}, 1).is_one());
  EXPECT_TRUE(clique_oracle(g, {{1}, {2}}, 1).is_one());
}

TEST(VeeringPoly, SelfLoopAndTwoLoops) {
  LabeledDigraph g;
  g.num_vertices = 2;
  g.add_edge(0, 0, {});
  const LaurentPoly one = LaurentPoly::one(2), t1 = LaurentPoly::monomial({1, 0}), t2 = LaurentPoly::monomial({0, 1});
  EXPECT_EQ(perron(g, {{1, 0}}, 2), one - t1);
  g.add_edge(1, 1, {});
  EXPECT_EQ(clique_oracle(g, {{1, 0}, {0, 1}}, 2), one - t1 - t2 + t1 * t2);
  EXPECT_EQ(perron(g, {{1, 0}, {0, 1}}, 2), one - t1 - t2 + t1 * t2);
  LabeledDigraph s;
  s.num_vertices = 1;
  s.add_edge(0, 0, {});
  s.add_edge(0, 0, {});
  EXPECT_EQ(clique_oracle(s, {{1, 0}, {0, 1}}, 2), one - t1 - t2);
  EXPECT_EQ(perron(s, {{1, 0}, {0, 1}}, 2), one - t1 - t2);
}

TEST(VeeringPoly, PerronEqualsCliqueOnRandomGraphs) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const Labeled r = random_graph(rng, 2);
    EXPECT_EQ(perron(r.g, r.labels, 2), clique_oracle(r.g, r.labels, 2)) << "trial " << trial;
  }
}

TEST(VeeringPoly, FrozenFixturePolynomials) {
  for (const auto& f : fixtures::all()) {
    const auto& c = fixtures::context(f.sig);
    ASSERT_TRUE(fixtures::polys().count(f.sig)) << f.sig;
    EXPECT_EQ(veering_polynomial(c).to_string(), fixtures::polys().at(f.sig)) << f.sig;
    // Zero-class multicycles can cancel the constant term when there is no positive class.
    if (f.layered) EXPECT_EQ(veering_polynomial_raw(c).coeff(Exponent(c.betti(), 0)), 1) << f.sig;
  }
}

TEST(VeeringPoly, FigureEightKnotValue) {
  // (1 - t)(1 - 3t + t^2)
  const LaurentPoly t = LaurentPoly::monomial({1});
  const LaurentPoly one = LaurentPoly::one(1);
  const LaurentPoly want = (one - t) * (one - LaurentPoly::monomial({1}, 3) + t * t);
  EXPECT_EQ(veering_polynomial(fixtures::context("cPcbbbiht_12")), want);
}

TEST(VeeringPoly, SupportWitnessesRealizeTerms) {
  const auto& c = fixtures::context("gLLPQccdfeffhggaagb_201022");
  const LaurentPoly p = veering_polynomial_raw(c);
  const auto w = support_witnesses(c.g.phi, c.phi_labels, c.betti(), p);
  EXPECT_EQ(w.size(), p.size() - 1);
  for (const auto& [cls, m] : w) EXPECT_EQ(sum_labels(c.phi_labels, m.edges, c.betti()), cls);
}

TEST(VeeringPoly, RelabellingInvariance) {
  std::mt19937 rng(1);
  const auto perms = isosig::all_perms();
  for (const auto& f : fixtures::all()) {
    if (f.betti() != 1) continue;
    const RawTriangulation raw = parse_taut_isosig(f.sig);
    std::vector<int> image(raw.num_tetrahedra);
    std::iota(image.begin(), image.end(), 0);
    std::shuffle(image.begin(), image.end(), rng);
    std::vector<Perm4> vmap;
    for (int t = 0; t < raw.num_tetrahedra; ++t) vmap.push_back(perms[rng() % perms.size()]);
    const LaurentPoly a = veering_polynomial(fixtures::context(f.sig));
    const LaurentPoly b = veering_polynomial(make_context(relabel(raw, image, vmap)));
    // H1/torsion = Z; its generator is fixed only up to sign.
    EXPECT_TRUE(a == b || a == invert_variable(b).normalized()) << f.sig;
  }
}

TEST(VeeringPoly, CliqueOracleRefusesLargeGraphs) {
  LabeledDigraph g;
  g.num_vertices = 65;
  EXPECT_THROW(clique_oracle(g, {}, 1), Error);
}
