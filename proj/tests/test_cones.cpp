#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "veerflow/cones.hpp"

using namespace veerflow;

namespace {

std::vector<std::vector<std::int64_t>> box(int b, int r) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> c(b, -r);
  while (true) {
    out.push_back(c);
    int i = 0;
    while (i < b && c[i] == r) c[i++] = -r;
    if (i == b) break;
    c[i]++;
  }
  return out;
}

}  // namespace

TEST(Cones, LayerednessMatchesCensus) {
  for (const auto& f : fixtures::all()) {
    const auto& c = fixtures::context(f.sig);
    const LayeredResult lr = is_layered(cone_generators(c, ConeMode::GammaCycles), c.h);
    EXPECT_EQ(lr.layered, f.layered) << f.sig;
  }
}

TEST(Cones, CertificatesAreValid) {
  for (const auto& f : fixtures::all()) {
    const auto& c = fixtures::context(f.sig);
    const ConeModel cm = cone_generators(c, ConeMode::GammaCycles);
    const LayeredResult lr = is_layered(cm, c.h);
    if (lr.layered) {
      for (const auto& g : cm.generators) EXPECT_GE(evaluate(lr.cls, g.cls), 1) << f.sig;
      EXPECT_EQ(cohomology_class(c.h, lr.cocycle), lr.cls);
    } else {
      std::vector<BigInt> sum(c.betti(), 0);
      BigInt total = 0;
      for (std::size_t j = 0; j < lr.classes.size(); ++j) {
        EXPECT_GE(lr.obstruction[j], 0);
        total += lr.obstruction[j];
        for (int i = 0; i < c.betti(); ++i) sum[i] += lr.obstruction[j] * lr.classes[j][i];
      }
      EXPECT_GT(total, 0);
      for (const auto& s : sum) EXPECT_EQ(s, 0) << f.sig;
    }
  }
}

TEST(Cones, GeneratorClassesMatchWitnessChains) {
  for (const auto& f : fixtures::all()) {
    const auto& c = fixtures::context(f.sig);
    for (ConeMode m : {ConeMode::GammaCycles, ConeMode::PhiCycles}) {
      const ConeModel cm = cone_generators(c, m);
      for (const auto& g : cm.generators) {
        EXPECT_TRUE(c.h.is_cycle(g.chain));
        EXPECT_EQ(c.h.project(g.chain), g.cls);
      }
    }
  }
}

TEST(Cones, DualConeAgreesWithGammaPairing) {
  for (const auto& f : fixtures::all()) {
    const auto& c = fixtures::context(f.sig);
    const ConeModel phi = cone_generators(c, ConeMode::PhiCycles);
    const auto cycles = simple_gamma_cycles(c.vt);
    for (const auto& cls : box(c.betti(), 2)) {
      const Cocycle w = cocycle_from_class(c.h, cls);
      std::int64_t lo = std::numeric_limits<std::int64_t>::max();
      for (const auto& g : cycles) lo = std::min(lo, pair(w, face_chain(c.vt.num_faces(), g)));
      const ConeVerdict want = lo > 0 ? ConeVerdict::Interior : lo == 0 ? ConeVerdict::Boundary : ConeVerdict::Outside;
      EXPECT_EQ(in_dual_cone(phi, c.h, w).verdict, want) << f.sig;
      EXPECT_EQ(carried_representative(c.vt, w).found, want != ConeVerdict::Outside) << f.sig;
    }
  }
}

TEST(Cones, CarriedRepresentativeIsCohomologousAndNonnegative) {
  for (const auto& f : fixtures::all()) {
    const auto& c = fixtures::context(f.sig);
    for (const auto& cls : box(c.betti(), 2)) {
      const CarriedResult r = carried_representative(c.vt, cocycle_from_class(c.h, cls));
      if (!r.found) {
        ASSERT_TRUE(is_gamma_cycle(c.vt, r.obstruction));
        EXPECT_LT(pair(cocycle_from_class(c.h, cls), face_chain(c.vt.num_faces(), r.obstruction)), 0);
        continue;
      }
      for (auto x : r.weights) EXPECT_GE(x, 0);
      EXPECT_NO_THROW(check_cocycle(c.h, r.weights));
      EXPECT_EQ(cohomology_class(c.h, r.weights), cls);
    }
  }
}

TEST(Cones, FaceOfRejectsOutsideClasses) {
  const auto& c = fixtures::context("cPcbbbiht_12");
  const ConeModel cm = cone_generators(c);
  const LayeredResult lr = is_layered(cm, c.h);
  ASSERT_TRUE(lr.layered);
  std::vector<std::int64_t> neg = lr.cls;
  for (auto& x : neg) x = -x;
  try {
    face_of(cm, c.h, cocycle_from_class(c.h, neg));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotInCone");
  }
  EXPECT_TRUE(face_of(cm, c.h, lr.cocycle).empty());
}

TEST(Cones, GeneratorsLieInPrimalCone) {
  const auto& c = fixtures::context("gvLQQcdeffeffffaafa_201102");
  const ConeModel cm = cone_generators(c, ConeMode::GammaCycles);
  for (const auto& g : cm.generators) EXPECT_TRUE(in_primal_cone(cm, g.cls));
  const LayeredResult lr = is_layered(cm, c.h);
  std::vector<std::int64_t> neg;
  for (const auto& g : cm.generators) {
    neg = g.cls;
    break;
  }
  for (auto& x : neg) x = -x;
  EXPECT_FALSE(in_primal_cone(cm, neg));
}
