#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "veerflow/error.hpp"

namespace veerflow {

using BigInt = boost::multiprecision::cpp_int;
using Exponent = std::vector<std::int64_t>;

/// Graded-lex order: total degree first, then lexicographic.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const {
    std::int64_t da = 0, db = 0;
    for (auto x : a) da += x;
    for (auto x : b) db += x;
    if (da != db) return da < db;
    return a < b;
  }
};

/// Sparse Laurent polynomial in `nvars` variables with big-integer coefficients.
class LaurentPoly {
 public:
  using Terms = std::map<Exponent, BigInt, GradedLex>;

  LaurentPoly() = default;
  explicit LaurentPoly(int nvars) : nvars_(nvars) {}
  static LaurentPoly constant(int nvars, const BigInt& c) {
    LaurentPoly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }
  static LaurentPoly monomial(const Exponent& e, const BigInt& c = 1) {
    LaurentPoly p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }
  static LaurentPoly one(int nvars) { return constant(nvars, 1); }
  static LaurentPoly zero(int nvars) { return LaurentPoly(nvars); }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const { return terms_.size() == 1 && terms_.begin()->second == 1 && is_zero_exp(terms_.begin()->first); }

  BigInt coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  void add_term(const Exponent& e, const BigInt& c) {
    if (static_cast<int>(e.size()) != nvars_) fail(ErrorKind::Usage, "DimensionMismatch", "exponent length differs from variable count");
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.check_dim(b);
    LaurentPoly r(a.nvars_);
    Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  /// Multiplies by the unit sign * t^shift that makes the least term positive with exponent 0.
  LaurentPoly normalized() const {
    if (terms_.empty()) return *this;
    const auto& [e0, c0] = *terms_.begin();
    LaurentPoly r(nvars_);
    const int s = c0 > 0 ? 1 : -1;
    Exponent e(nvars_);
    for (const auto& [ea, ca] : terms_) {
      for (int i = 0; i < nvars_; ++i) e[i] = ea[i] - e0[i];
      r.add_term(e, s * ca);
    }
    return r;
  }

  /// Keeps the terms whose exponent satisfies pred.
  template <class Pred>
  LaurentPoly filter(Pred pred) const {
    LaurentPoly r(nvars_);
    for (const auto& [e, c] : terms_)
      if (pred(e)) r.terms_.emplace(e, c);
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      BigInt mag = c < 0 ? BigInt(-c) : c;
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool unit_exp = is_zero_exp(e);
      if (mag != 1 || unit_exp) os << mag;
      bool need_star = (mag != 1 || unit_exp);
      for (int i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        if (need_star) os << "*";
        need_star = true;
        os << "t" << (i + 1);
        if (e[i] != 1) os << "^" << e[i];
      }
    }
    return os.str();
  }

 private:
  static bool is_zero_exp(const Exponent& e) {
    for (auto x : e)
      if (x) return false;
    return true;
  }
  void check_dim(const LaurentPoly& o) const {
    if (o.nvars_ != nvars_) fail(ErrorKind::Usage, "DimensionMismatch", "polynomials live in different rings");
  }

  int nvars_ = 0;
  Terms terms_;
};

template <class T>
using SquareMatrix = std::vector<std::vector<T>>;

/// Berkowitz: coefficients of det(x I - A), leading coefficient first. Division free.
template <class T>
std::vector<T> charpoly_berkowitz(const SquareMatrix<T>& A, const T& zero, const T& one) {
  const int n = static_cast<int>(A.size());
  std::vector<T> C{one};
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(A[r].size()) != n) fail(ErrorKind::Usage, "DimensionMismatch", "matrix is not square");
    // Toeplitz column: 1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C
    std::vector<T> Tcol{one, zero - A[r][r]};
    std::vector<T> v(r, zero);
    for (int i = 0; i < r; ++i) v[i] = A[i][r];
    for (int k = 0; k < r; ++k) {
      T s = zero;
      for (int i = 0; i < r; ++i) s += A[r][i] * v[i];
      Tcol.push_back(zero - s);
      if (k + 1 < r) {
        std::vector<T> w(r, zero);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) w[i] += A[i][j] * v[j];
        v = std::move(w);
      }
    }
    std::vector<T> next(r + 2, zero);
    for (int i = 0; i < r + 2; ++i)
      for (int j = 0; j <= i && j < static_cast<int>(C.size()); ++j) next[i] += Tcol[i - j] * C[j];
    C = std::move(next);
  }
  return C;
}

template <class T>
T determinant(const SquareMatrix<T>& A, const T& zero, const T& one) {
  const int n = static_cast<int>(A.size());
  if (n == 0) return one;
  auto C = charpoly_berkowitz(A, zero, one);
  return (n % 2 == 0) ? C[n] : zero - C[n];
}

inline constexpr int kDefaultDetBound = 64;

inline LaurentPoly det(const SquareMatrix<LaurentPoly>& A, int nvars, int bound = kDefaultDetBound) {
  if (static_cast<int>(A.size()) > bound)
    fail(ErrorKind::Precondition, "TooLarge", "matrix dimension " + std::to_string(A.size()) + " exceeds bound " + std::to_string(bound));
  for (const auto& row : A)
    if (row.size() != A.size()) fail(ErrorKind::Usage, "DimensionMismatch", "matrix is not square");
  return determinant(A, LaurentPoly::zero(nvars), LaurentPoly::one(nvars));
}

}  // namespace veerflow
