#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "veerflow/homology.hpp"

using namespace veerflow;

namespace {

bool is_identity(const IntMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      if (m[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

}  // namespace

TEST(Homology, SmithFormProperties) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + rng() % 6, c = 1 + rng() % 6;
    IntMatrix A = zero_matrix(r, c);
    for (auto& row : A)
      for (auto& x : row) x = static_cast<int>(rng() % 9) - 4;
    const SmithForm s = smith_normal_form(A, r, c);
    EXPECT_EQ(mat_mul(mat_mul(s.U, A), s.V), s.S);
    EXPECT_TRUE(is_identity(mat_mul(s.U, s.Uinv)));
    EXPECT_TRUE(is_identity(mat_mul(s.V, s.Vinv)));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (i != j) EXPECT_EQ(s.S[i][j], 0);
    const auto d = s.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_GT(d[i], 0);
      if (i + 1 < d.size()) EXPECT_EQ(d[i + 1] % d[i], 0);
    }
  }
}

TEST(Homology, KnownSmithForm) {
  const IntMatrix A = {{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  const SmithForm s = smith_normal_form(A, 3, 3);
  const auto d = s.diagonal();
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0], 2);
  EXPECT_EQ(d[1], 6);
  EXPECT_EQ(d[2], 12);
}

TEST(Homology, MatchesCensusH1) {
  for (const auto& f : fixtures::all()) {
    const auto& h = fixtures::context(f.sig).h;
    EXPECT_EQ(h.betti, f.betti()) << f.sig;
    const auto want = f.torsion();
    ASSERT_EQ(h.torsion.size(), want.size()) << f.sig;
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(h.torsion[i], want[i]) << f.sig;
  }
}

TEST(Homology, ProjectionAndSection) {
  for (const auto& f : fixtures::all()) {
    const auto& h = fixtures::context(f.sig).h;
    for (int j = 0; j < h.betti; ++j) {
      std::vector<std::int64_t> col(h.num_faces);
      for (int fc = 0; fc < h.num_faces; ++fc) col[fc] = h.section[fc][j];
      EXPECT_TRUE(h.is_cycle(col));
      const auto p = h.project(col);
      for (int i = 0; i < h.betti; ++i) EXPECT_EQ(p[i], i == j ? 1 : 0);
    }
    // Boundaries of sectors project to zero.
    for (int e = 0; e < h.num_sectors; ++e) {
      std::vector<std::int64_t> b(h.num_faces);
      for (int fc = 0; fc < h.num_faces; ++fc) b[fc] = static_cast<std::int64_t>(h.d2[fc][e]);
      for (auto x : h.project(b)) EXPECT_EQ(x, 0);
    }
  }
}

TEST(Homology, CocycleClassRoundTrip) {
  std::mt19937 rng(3);
  for (const auto& f : fixtures::all()) {
    const auto& h = fixtures::context(f.sig).h;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::int64_t> cls(h.betti);
      for (auto& x : cls) x = static_cast<int>(rng() % 7) - 3;
      const Cocycle w = cocycle_from_class(h, cls);
      EXPECT_NO_THROW(check_cocycle(h, w));
      EXPECT_EQ(cohomology_class(h, w), cls);
      for (int j = 0; j < h.betti; ++j) {
        std::vector<std::int64_t> col(h.num_faces);
        for (int fc = 0; fc < h.num_faces; ++fc) col[fc] = h.section[fc][j];
        EXPECT_EQ(pair(w, col), cls[j]);
      }
    }
  }
}

TEST(Homology, InvalidCocycleRejected) {
  const auto& h = fixtures::context("cPcbbbiht_12").h;
  Cocycle w(h.num_faces, 0);
  w[0] = 1;
  try {
    check_cocycle(h, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "InvalidCocycle");
  }
  EXPECT_THROW(check_cocycle(h, Cocycle(3, 0)), Error);
}

TEST(Homology, ClassOfChainNeedsCycle) {
  const auto& h = fixtures::context("cPcbbbiht_12").h;
  std::vector<std::int64_t> c(h.num_faces, 0);
  c[0] = 1;
  EXPECT_THROW(class_of_chain(h, c), Error);
}
