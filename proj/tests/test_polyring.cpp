#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "veerflow/polyring.hpp"

using namespace veerflow;

namespace {

LaurentPoly mono(std::initializer_list<std::int64_t> e, int c = 1) { return LaurentPoly::monomial(Exponent(e), c); }

LaurentPoly random_poly(std::mt19937& rng, int nvars, int terms) {
  LaurentPoly p(nvars);
  for (int i = 0; i < terms; ++i) {
    Exponent e(nvars);
    for (auto& x : e) x = static_cast<int>(rng() % 7) - 3;
    p.add_term(e, static_cast<int>(rng() % 11) - 5);
  }
  return p;
}

LaurentPoly naive_product(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r(a.nvars());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Exponent e(a.nvars());
      for (int i = 0; i < a.nvars(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

LaurentPoly leibniz(const SquareMatrix<LaurentPoly>& A, int nvars) {
  const int n = static_cast<int>(A.size());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  LaurentPoly total(nvars);
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inv;
    LaurentPoly term = LaurentPoly::one(nvars);
    for (int i = 0; i < n; ++i) term = term * A[i][p[i]];
    if (inv % 2) term = -term;
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace

TEST(Polyring, RingBasics) {
  const LaurentPoly one = LaurentPoly::one(2);
  const LaurentPoly g = mono({1, 0}), h = mono({0, 1});
  EXPECT_EQ((one - g) * (one - h), one - g - h + g * h);
  EXPECT_TRUE(((one - g) * LaurentPoly::zero(2)).is_zero());
  EXPECT_TRUE((g - g).is_zero());
  EXPECT_EQ((one - g) * (one - h), (one - h) * (one - g));
}

TEST(Polyring, NoZeroCoefficientsStored) {
  LaurentPoly p(1);
  p.add_term({2}, 3);
  p.add_term({2}, -3);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.size(), 0u);
}

TEST(Polyring, ProductsMatchNaiveOracle) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const LaurentPoly a = random_poly(rng, 3, 20), b = random_poly(rng, 3, 20);
    EXPECT_EQ(a * b, naive_product(a, b));
    EXPECT_EQ(a * (b + a), a * b + a * a);
  }
}

TEST(Polyring, TextForm) {
  const LaurentPoly p = LaurentPoly::one(2) - mono({1, 0}, 2) + mono({-1, 3}, -1) + mono({0, 0}, 0);
  EXPECT_EQ(p.to_string(), "1 - 2*t1 - t1^-1*t2^3");
  EXPECT_EQ(LaurentPoly::zero(1).to_string(), "0");
}

TEST(Polyring, GradedLexOrder) {
  GradedLex lt;
  EXPECT_TRUE(lt({0, 0}, {1, 0}));
  EXPECT_TRUE(lt({1, 0}, {1, 1}));
  EXPECT_FALSE(lt({1, 1}, {1, 1}));
}

TEST(Polyring, Normalization) {
  const LaurentPoly p = -(mono({2}) - mono({3}, 4));
  const LaurentPoly n = p.normalized();
  EXPECT_EQ(n, LaurentPoly::one(1) - mono({1}, 4));
  EXPECT_EQ(n.normalized(), n);
}

TEST(Polyring, DeterminantSmallCases) {
  const LaurentPoly one = LaurentPoly::one(2);
  const LaurentPoly g = mono({1, 0}), h = mono({0, 1});
  SquareMatrix<LaurentPoly> I = {{one, LaurentPoly::zero(2)}, {LaurentPoly::zero(2), one}};
  EXPECT_EQ(det(I, 2), one);
  SquareMatrix<LaurentPoly> D = {{one - g, LaurentPoly::zero(2)}, {LaurentPoly::zero(2), one - h}};
  EXPECT_EQ(det(D, 2), (one - g) * (one - h));
  SquareMatrix<LaurentPoly> bad = {{one, one}};
  EXPECT_THROW(det(bad, 2), Error);
}

TEST(Polyring, DeterminantMatchesLeibniz) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 5;
    SquareMatrix<LaurentPoly> A(n, std::vector<LaurentPoly>(n, LaurentPoly::zero(2)));
    for (auto& row : A)
      for (auto& x : row) x = random_poly(rng, 2, rng() % 3);
    EXPECT_EQ(det(A, 2), leibniz(A, 2));
  }
}

TEST(Polyring, DeterminantPermutationInvariant) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5;
    SquareMatrix<LaurentPoly> A(n, std::vector<LaurentPoly>(n, LaurentPoly::zero(2)));
    for (auto& row : A)
      for (auto& x : row) x = random_poly(rng, 2, rng() % 3);
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    SquareMatrix<LaurentPoly> B = A;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B[i][j] = A[p[i]][p[j]];
    EXPECT_EQ(det(A, 2), det(B, 2));
  }
}

TEST(Polyring, DeterminantBlockMultiplicative) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int a = 2, b = 3;
    SquareMatrix<LaurentPoly> X(a + b, std::vector<LaurentPoly>(a + b, LaurentPoly::zero(1)));
    SquareMatrix<LaurentPoly> A(a, std::vector<LaurentPoly>(a, LaurentPoly::zero(1)));
    SquareMatrix<LaurentPoly> B(b, std::vector<LaurentPoly>(b, LaurentPoly::zero(1)));
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < a; ++j) X[i][j] = A[i][j] = random_poly(rng, 1, 2);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) X[a + i][a + j] = B[i][j] = random_poly(rng, 1, 2);
    EXPECT_EQ(det(X, 1), det(A, 1) * det(B, 1));
  }
}
