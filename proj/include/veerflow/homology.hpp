#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "veerflow/error.hpp"
#include "veerflow/graphs.hpp"
#include "veerflow/kernel.hpp"

namespace veerflow {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<BigInt>>;

inline IntMatrix zero_matrix(int r, int c) { return IntMatrix(r, std::vector<BigInt>(c, 0)); }

inline IntMatrix identity_matrix(int n) {
  IntMatrix m = zero_matrix(n, n);
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  const int r = static_cast<int>(a.size()), k = r ? static_cast<int>(a[0].size()) : 0;
  const int c = b.empty() ? 0 : static_cast<int>(b[0].size());
  IntMatrix out = zero_matrix(r, c);
  for (int i = 0; i < r; ++i)
    for (int l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (int j = 0; j < c; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

/// U * A * V = S with U, V unimodular and S diagonal, S[i][i] | S[i+1][i+1], positive.
struct SmithForm {
  IntMatrix S, U, Uinv, V, Vinv;
  int rank = 0;
  std::vector<BigInt> diagonal() const {
    std::vector<BigInt> d;
    for (int i = 0; i < rank; ++i) d.push_back(S[i][i]);
    return d;
  }
};

inline SmithForm smith_normal_form(const IntMatrix& A, int rows, int cols) {
  SmithForm sf;
  sf.S = A;
  sf.U = identity_matrix(rows);
  sf.Uinv = identity_matrix(rows);
  sf.V = identity_matrix(cols);
  sf.Vinv = identity_matrix(cols);
  IntMatrix& S = sf.S;

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    std::swap(S[i], S[j]);
    std::swap(sf.U[i], sf.U[j]);
    for (auto& row : sf.Uinv) std::swap(row[i], row[j]);
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (auto& row : S) std::swap(row[i], row[j]);
    for (auto& row : sf.V) std::swap(row[i], row[j]);
    std::swap(sf.Vinv[i], sf.Vinv[j]);
  };
  // row_i += c * row_j
  auto add_row = [&](int i, int j, const BigInt& c) {
    for (int k = 0; k < cols; ++k) S[i][k] += c * S[j][k];
    for (int k = 0; k < rows; ++k) sf.U[i][k] += c * sf.U[j][k];
    for (int k = 0; k < rows; ++k) sf.Uinv[k][j] -= c * sf.Uinv[k][i];
  };
  // col_i += c * col_j
  auto add_col = [&](int i, int j, const BigInt& c) {
    for (int k = 0; k < rows; ++k) S[k][i] += c * S[k][j];
    for (int k = 0; k < cols; ++k) sf.V[k][i] += c * sf.V[k][j];
    for (int k = 0; k < cols; ++k) sf.Vinv[j][k] -= c * sf.Vinv[i][k];
  };
  auto negate_row = [&](int i) {
    for (auto& x : S[i]) x = -x;
    for (auto& x : sf.U[i]) x = -x;
    for (auto& row : sf.Uinv) row[i] = -row[i];
  };

  int k = 0;
  while (k < rows && k < cols) {
    // Pivot: nonzero entry of least absolute value.
    int pi = -1, pj = -1;
    for (int i = k; i < rows; ++i)
      for (int j = k; j < cols; ++j)
        if (S[i][j] != 0 && (pi < 0 || abs(S[i][j]) < abs(S[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    swap_rows(k, pi);
    swap_cols(k, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = k + 1; i < rows; ++i)
        if (S[i][k] != 0) {
          BigInt q = S[i][k] / S[k][k];
          add_row(i, k, -q);
          if (S[i][k] != 0) {
            swap_rows(i, k);
            clean = false;
          }
        }
      for (int j = k + 1; j < cols; ++j)
        if (S[k][j] != 0) {
          BigInt q = S[k][j] / S[k][k];
          add_col(j, k, -q);
          if (S[k][j] != 0) {
            swap_cols(j, k);
            clean = false;
          }
        }
      if (!clean) continue;
      // Divisibility of the remaining block.
      for (int i = k + 1; i < rows && clean; ++i)
        for (int j = k + 1; j < cols; ++j)
          if (S[i][j] % S[k][k] != 0) {
            add_row(k, i, 1);
            clean = false;
            break;
          }
    }
    if (S[k][k] < 0) negate_row(k);
    ++k;
  }
  sf.rank = k;
  return sf;
}

/// Chain complex of the dual 2-complex and the projection of 1-cycles onto G = H_1 / torsion.
struct HomologyModel {
  int num_tets = 0, num_faces = 0, num_sectors = 0;
  IntMatrix d1;  // tetrahedra x faces: face = above - below
  IntMatrix d2;  // faces x sectors: sector = side0 - side1
  SmithForm smith1, smith2;
  int betti = 0;
  std::vector<BigInt> torsion;                    // invariant factors > 1
  std::vector<std::vector<std::int64_t>> proj;    // b x faces
  std::vector<std::vector<std::int64_t>> section; // faces x b, proj * section = I, columns are cycles

  std::vector<std::int64_t> project(const std::vector<std::int64_t>& chain) const {
    std::vector<std::int64_t> out(betti, 0);
    for (int i = 0; i < betti; ++i)
      for (int f = 0; f < num_faces; ++f) out[i] += proj[i][f] * chain[f];
    return out;
  }
  bool is_cycle(const std::vector<std::int64_t>& chain) const {
    for (int t = 0; t < num_tets; ++t) {
      std::int64_t s = 0;
      for (int f = 0; f < num_faces; ++f) s += static_cast<std::int64_t>(d1[t][f]) * chain[f];
      if (s != 0) return false;
    }
    return true;
  }
};

inline std::int64_t to_i64(const BigInt& x, const char* what) {
  if (x > BigInt(INT64_MAX) || x < BigInt(INT64_MIN)) internal_error("Overflow", std::string(what) + " exceeds 64 bits");
  return static_cast<std::int64_t>(x);
}

inline HomologyModel build_homology(const VeeringTriangulation& vt, const std::vector<Sector>& secs) {
  HomologyModel h;
  const int n = vt.n, nf = vt.num_faces();
  h.num_tets = n;
  h.num_faces = nf;
  h.num_sectors = n;
  h.d1 = zero_matrix(n, nf);
  for (int f = 0; f < nf; ++f) {
    h.d1[vt.face_above[f]][f] += 1;
    h.d1[vt.face_below[f]][f] -= 1;
  }
  h.d2 = zero_matrix(nf, n);
  for (const Sector& s : secs) {
    for (int f : s.side_edges[0]) h.d2[f][s.edge] += 1;
    for (int f : s.side_edges[1]) h.d2[f][s.edge] -= 1;
  }
  const IntMatrix dd = mat_mul(h.d1, h.d2);
  for (const auto& row : dd)
    for (const auto& x : row) VEERFLOW_ASSERT(x == 0, "ChainComplex", "boundary of boundary is nonzero");

  h.smith1 = smith_normal_form(h.d1, n, nf);
  const int r1 = h.smith1.rank;
  // Boundaries in the basis of V1, restricted to the cycle coordinates.
  const IntMatrix y = mat_mul(h.smith1.Vinv, h.d2);
  for (int i = 0; i < r1; ++i)
    for (const auto& x : y[i]) VEERFLOW_ASSERT(x == 0, "ChainComplex", "boundary outside the cycle space");
  IntMatrix X(y.begin() + r1, y.end());
  const int zdim = nf - r1;
  h.smith2 = smith_normal_form(X, zdim, n);
  const int r2 = h.smith2.rank;
  h.betti = zdim - r2;
  for (const auto& d : h.smith2.diagonal())
    if (d > 1) h.torsion.push_back(d);

  // proj = (U2 * Vinv1[r1:, :])[r2:, :]
  IntMatrix vinv_tail(h.smith1.Vinv.begin() + r1, h.smith1.Vinv.end());
  IntMatrix full = mat_mul(h.smith2.U, vinv_tail);
  h.proj.assign(h.betti, std::vector<std::int64_t>(nf, 0));
  for (int i = 0; i < h.betti; ++i)
    for (int f = 0; f < nf; ++f) h.proj[i][f] = to_i64(full[r2 + i][f], "projection entry");
  // section = V1[:, r1:] * U2inv[:, r2:]
  IntMatrix v1_tail = zero_matrix(nf, zdim);
  for (int f = 0; f < nf; ++f)
    for (int j = 0; j < zdim; ++j) v1_tail[f][j] = h.smith1.V[f][r1 + j];
  IntMatrix u2inv_tail = zero_matrix(zdim, h.betti);
  for (int i = 0; i < zdim; ++i)
    for (int j = 0; j < h.betti; ++j) u2inv_tail[i][j] = h.smith2.Uinv[i][r2 + j];
  IntMatrix sec = mat_mul(v1_tail, u2inv_tail);
  h.section.assign(nf, std::vector<std::int64_t>(h.betti, 0));
  for (int f = 0; f < nf; ++f)
    for (int j = 0; j < h.betti; ++j) h.section[f][j] = to_i64(sec[f][j], "section entry");
  return h;
}

inline HomologyModel build_homology(const VeeringTriangulation& vt) { return build_homology(vt, sectors(vt)); }

inline std::vector<std::int64_t> class_of_chain(const HomologyModel& h, const std::vector<std::int64_t>& chain) {
  if (static_cast<int>(chain.size()) != h.num_faces)
    fail(ErrorKind::Usage, "DimensionMismatch", "chain length differs from the number of faces");
  if (!h.is_cycle(chain)) fail(ErrorKind::Precondition, "NotACycle", "chain has nonzero boundary");
  return h.project(chain);
}

/// Face weights; a cocycle when the two sides of every sector carry equal total weight.
using Cocycle = std::vector<std::int64_t>;

inline std::int64_t pair(const Cocycle& w, const std::vector<std::int64_t>& chain) {
  std::int64_t s = 0;
  for (std::size_t f = 0; f < w.size() && f < chain.size(); ++f) s += w[f] * chain[f];
  return s;
}

/// First sector whose matching condition fails, or -1.
inline int matching_violation(const HomologyModel& h, const Cocycle& w) {
  for (int e = 0; e < h.num_sectors; ++e) {
    BigInt s = 0;
    for (int f = 0; f < h.num_faces; ++f) s += h.d2[f][e] * w[f];
    if (s != 0) return e;
  }
  return -1;
}

inline void check_cocycle(const HomologyModel& h, const Cocycle& w) {
  if (static_cast<int>(w.size()) != h.num_faces)
    fail(ErrorKind::Precondition, "InvalidCocycle",
         "expected " + std::to_string(h.num_faces) + " face weights, got " + std::to_string(w.size()));
  const int e = matching_violation(h, w);
  if (e >= 0) fail(ErrorKind::Precondition, "InvalidCocycle", "matching condition fails at edge " + std::to_string(e));
}

/// Cohomology class of a cocycle as a vector in Hom(G, Z) = Z^b (dual basis).
inline std::vector<std::int64_t> cohomology_class(const HomologyModel& h, const Cocycle& w) {
  std::vector<std::int64_t> c(h.betti, 0);
  for (int j = 0; j < h.betti; ++j)
    for (int f = 0; f < h.num_faces; ++f) c[j] += w[f] * h.section[f][j];
  return c;
}

/// A cocycle representing the class c (not necessarily nonnegative).
inline Cocycle cocycle_from_class(const HomologyModel& h, const std::vector<std::int64_t>& c) {
  Cocycle w(h.num_faces, 0);
  for (int f = 0; f < h.num_faces; ++f)
    for (int i = 0; i < h.betti; ++i) w[f] += c[i] * h.proj[i][f];
  return w;
}

inline std::int64_t evaluate(const std::vector<std::int64_t>& cls, const std::vector<std::int64_t>& g) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < cls.size(); ++i) s += cls[i] * g[i];
  return s;
}

}  // namespace veerflow
