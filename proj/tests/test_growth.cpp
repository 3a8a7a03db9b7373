#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "veerflow/cones.hpp"
#include "veerflow/growth.hpp"

using namespace veerflow;

namespace {

Specialization spec(std::initializer_list<std::pair<std::int64_t, int>> terms) {
  Specialization s;
  for (auto [e, c] : terms) s.add(e, c);
  return s;
}

std::vector<std::int64_t> certificate(const Context& c) {
  return is_layered(cone_generators(c, ConeMode::GammaCycles), c.h).cls;
}

}  // namespace

TEST(Growth, SpecializationExamples) {
  const LaurentPoly one = LaurentPoly::one(1), g = LaurentPoly::monomial({1});
  EXPECT_EQ(specialize(one - g, {3}), spec({{0, 1}, {3, -1}}));
  EXPECT_EQ(specialize(one - g - g * g, {0}).total(), -1);
}

TEST(Growth, RootExamples) {
  const RootResult a = smallest_positive_root(spec({{0, 1}, {1, -1}}));
  EXPECT_TRUE(a.found);
  EXPECT_NEAR(a.root, 1.0, 1e-12);
  const RootResult b = smallest_positive_root(spec({{0, 1}, {1, -2}}));
  EXPECT_NEAR(b.root, 0.5, 1e-12);
  const RootResult c = smallest_positive_root(spec({{0, 1}, {1, -1}, {2, -1}}));
  EXPECT_NEAR(1.0 / c.root, (1 + std::sqrt(5.0)) / 2, 1e-11);
  EXPECT_FALSE(smallest_positive_root(spec({{0, 1}, {1, 1}})).found);
  EXPECT_THROW(smallest_positive_root(Specialization{}), Error);
}

TEST(Growth, SturmCountsRoots) {
  // (1 - 2u)(1 - 3u)(1 + u): two roots in (0, 1].
  const upoly::Poly p = {1, -4, 1, 6};
  const auto seq = upoly::sturm_sequence(p);
  EXPECT_EQ(upoly::variations_at(seq, 0, 0) - upoly::variations_at(seq, 1, 0), 2);
}

TEST(Growth, CycleCountSingleLoop) {
  LabeledDigraph g;
  g.num_vertices = 1;
  g.add_edge(0, 0, {});
  const auto N = cycle_count_oracle(g, {3}, 9);
  // N_L sums w(e_1) over closed sequences: L/k per cycle, i.e. the period 3 at every multiple of 3.
  for (int L = 1; L <= 9; ++L) EXPECT_EQ(N[L], L % 3 == 0 ? 3 : 0) << L;
}

TEST(Growth, CycleCountsAdditiveOverDisjointLoops) {
  LabeledDigraph a, b, both;
  a.num_vertices = b.num_vertices = 1;
  both.num_vertices = 2;
  a.add_edge(0, 0, {});
  b.add_edge(0, 0, {});
  both.add_edge(0, 0, {});
  both.add_edge(1, 1, {});
  const auto Na = cycle_count_oracle(a, {2}, 12), Nb = cycle_count_oracle(b, {3}, 12),
             Nab = cycle_count_oracle(both, {2, 3}, 12);
  for (int L = 0; L <= 12; ++L) EXPECT_EQ(Nab[L], Na[L] + Nb[L]);
}

TEST(Growth, CycleCountsMatchGeneratingFunction) {
  // For the figure-eight Φ with weight 1 on t, N_L is the u^L coefficient of -u P'(u)/P(u).
  const auto& c = fixtures::context("cPcbbbiht_12");
  const auto xi = certificate(c);
  const auto w = class_weights(c.phi_labels, xi);
  const auto N = cycle_count_oracle(c.g.phi, w, 12);
  const Specialization s = specialize(veering_polynomial_raw(c), xi);
  std::vector<long double> p(40, 0), q(40, 0);
  for (const auto& [e, co] : s.terms) p[e] = static_cast<long double>(co);
  // q = -u p'(u) / p(u), p(0) = 1.
  std::vector<long double> num(40, 0);
  for (int k = 1; k < 40; ++k) num[k] = -k * p[k];
  for (int k = 0; k < 13; ++k) {
    long double v = num[k];
    for (int j = 1; j <= k; ++j) v -= p[j] * q[k - j];
    q[k] = v;
  }
  for (int L = 1; L <= 12; ++L) EXPECT_NEAR(static_cast<double>(N[L]), static_cast<double>(q[L]), 1e-6) << L;
}

TEST(Growth, DegreeMinusOne) {
  for (const auto& f : fixtures::all()) {
    if (!f.layered) continue;
    const auto& c = fixtures::context(f.sig);
    const auto xi = certificate(c);
    const LaurentPoly p = veering_polynomial_raw(c);
    const double g1 = growth_rate(c, std::nullopt, xi).rate;
    for (int n : {2, 3, 5}) {
      std::vector<std::int64_t> nxi = xi;
      for (auto& x : nxi) x *= n;
      EXPECT_EQ(specialize(p, nxi), specialize(p, xi).compose_power(n));
      EXPECT_NEAR(growth_rate(c, std::nullopt, nxi).rate, std::pow(g1, 1.0 / n), 1e-9) << f.sig;
    }
  }
}

TEST(Growth, SpectralCrossCheck) {
  for (const auto& f : fixtures::all()) {
    if (!f.layered) continue;
    const auto& c = fixtures::context(f.sig);
    const auto xi = certificate(c);
    const auto w = class_weights(c.phi_labels, xi);
    bool all_positive = true;
    for (auto x : w) all_positive = all_positive && x >= 1;
    if (!all_positive) continue;
    EXPECT_NEAR(spectral_growth(c.g.phi, w, 1e-13), growth_rate(c, std::nullopt, xi).rate, 1e-8) << f.sig;
  }
}

TEST(Growth, NonPositiveClassRejected) {
  const auto& c = fixtures::context("cPcbbbiht_12");
  try {
    growth_rate(c, std::nullopt, {-1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotPositive");
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(Growth, EmptyRestrictionGivesOne) {
  const auto& c = fixtures::context("cPcbbbiht_12");
  const auto xi = certificate(c);
  const Cocycle eta = carried_representative(c.vt, cocycle_from_class(c.h, xi)).weights;
  EXPECT_EQ(growth_rate(c, eta, xi).rate, 1.0);
}

TEST(Growth, RestrictionIsMonotone) {
  const auto& c = fixtures::context("gLLPQccdfeffhggaagb_201022");
  const auto xi = certificate(c);
  for (const std::vector<std::int64_t>& eta : {std::vector<std::int64_t>{1, 0}, std::vector<std::int64_t>{0, 1}}) {
    const Cocycle w = carried_representative(c.vt, cocycle_from_class(c.h, eta)).weights;
    EXPECT_LE(growth_rate(c, w, xi).rate, growth_rate(c, std::nullopt, xi).rate + 1e-12);
    EXPECT_GT(growth_rate(c, w, xi).rate, 1.0);
  }
}

TEST(Growth, ScanConvexAndScaling) {
  const auto& c = fixtures::context("gLLPQccdfeffhggaagb_201022");
  const ScanResult sr = entropy_scan(c, std::nullopt, {2, 1}, {1, 2}, 8);
  EXPECT_TRUE(sr.convex);
  EXPECT_EQ(sr.rows.size(), 9u);
  const ScanResult ray = entropy_scan(c, std::nullopt, {1, 1}, {1, 1}, 4);
  for (const auto& r : ray.rows) EXPECT_NEAR(r.entropy, ray.rows[0].entropy, 1e-12);
  const double e1 = growth_rate(c, std::nullopt, {1, 1}).rate, e3 = growth_rate(c, std::nullopt, {3, 3}).rate;
  EXPECT_NEAR(std::log(e3), std::log(e1) / 3, 1e-10);
}

TEST(Growth, AccumulationWithZeroCut) {
  const auto& c = fixtures::context("gLLPQccdfeffhggaagb_201022");
  const AccumulationResult ar = accumulation_experiment(c, {1, 1}, Cocycle(c.vt.num_faces(), 0), 5);
  for (double v : ar.sequence) EXPECT_NEAR(v, ar.sequence[0], 1e-12);
  EXPECT_NEAR(ar.limit, ar.sequence[0], 1e-12);
}

TEST(Growth, AccumulationConverges) {
  const auto& c = fixtures::context("gLLPQccdfeffhggaagb_201022");
  const Cocycle eta = carried_representative(c.vt, cocycle_from_class(c.h, {1, 0})).weights;
  const AccumulationResult ar = accumulation_experiment(c, {1, 1}, eta, 30);
  EXPECT_GE(ar.settled_from, 0);
  for (int i = 1; i <= 30; ++i) EXPECT_LE(ar.sequence[i], ar.sequence[i - 1] + 1e-12);
  EXPECT_LT(ar.final_gap, 1e-2);
}
