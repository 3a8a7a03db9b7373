#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "veerflow/error.hpp"

namespace veerflow {

/// Permutation of {0,1,2,3}; maps i to img[i].
struct Perm4 {
  std::array<std::uint8_t, 4> img{0, 1, 2, 3};

  constexpr Perm4() = default;
  constexpr Perm4(int a, int b, int c, int d)
      : img{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c),
            static_cast<std::uint8_t>(d)} {}

  constexpr int operator[](int i) const { return img[i]; }

  constexpr int pre_image(int j) const {
    for (int i = 0; i < 4; ++i)
      if (img[i] == j) return i;
    return -1;
  }

  constexpr Perm4 inverse() const {
    Perm4 r;
    for (int i = 0; i < 4; ++i) r.img[img[i]] = static_cast<std::uint8_t>(i);
    return r;
  }

  /// Composition: (p * q)[i] = p[q[i]].
  friend constexpr Perm4 operator*(const Perm4& p, const Perm4& q) {
    Perm4 r;
    for (int i = 0; i < 4; ++i) r.img[i] = p.img[q.img[i]];
    return r;
  }

  friend constexpr bool operator==(const Perm4& a, const Perm4& b) { return a.img == b.img; }
  friend constexpr bool operator<(const Perm4& a, const Perm4& b) { return a.img < b.img; }

  constexpr int sign() const {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (img[i] > img[j]) ++inv;
    return (inv % 2) ? -1 : 1;
  }

  constexpr bool is_identity() const { return img == std::array<std::uint8_t, 4>{0, 1, 2, 3}; }

  /// Index of this permutation in lexicographic order of image words (0..23).
  int ordered_index() const {
    static constexpr int fact[4] = {6, 2, 1, 1};
    int idx = 0;
    for (int i = 0; i < 4; ++i) {
      int smaller = 0;
      for (int j = i + 1; j < 4; ++j)
        if (img[j] < img[i]) ++smaller;
      idx += smaller * fact[i];
    }
    return idx;
  }

  static Perm4 from_ordered_index(int idx) {
    static constexpr int fact[4] = {6, 2, 1, 1};
    std::array<int, 4> avail{0, 1, 2, 3};
    int navail = 4;
    Perm4 p;
    for (int i = 0; i < 4; ++i) {
      int k = idx / fact[i];
      idx %= fact[i];
      p.img[i] = static_cast<std::uint8_t>(avail[k]);
      for (int j = k; j + 1 < navail; ++j) avail[j] = avail[j + 1];
      --navail;
    }
    return p;
  }

  std::string word() const {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) s[i] = static_cast<char>('0' + img[i]);
    return s;
  }

  /// Parses a 4-character word such as "1203"; returns false if it is not a permutation.
  static bool parse(const std::string& w, Perm4& out) {
    if (w.size() != 4) return false;
    bool seen[4] = {false, false, false, false};
    for (int i = 0; i < 4; ++i) {
      int v = w[i] - '0';
      if (v < 0 || v > 3 || seen[v]) return false;
      seen[v] = true;
      out.img[i] = static_cast<std::uint8_t>(v);
    }
    return true;
  }
};

/// Local edge numbering inside a tetrahedron: 0=01 1=02 2=03 3=12 4=13 5=23.
inline constexpr int kEdgeVerts[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

constexpr int edge_index(int a, int b) {
  if (a > b) {
    int t = a;
    a = b;
    b = t;
  }
  if (a == 0) return b - 1;
  if (a == 1) return b + 1;
  return 5;
}

/// pi-pair index p in {0,1,2} consists of local edges p and 5-p.
constexpr int pair_of_edge(int e) { return e < 3 ? e : 5 - e; }

}  // namespace veerflow
