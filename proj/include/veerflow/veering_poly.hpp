#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "veerflow/error.hpp"
#include "veerflow/graphs.hpp"
#include "veerflow/homology.hpp"
#include "veerflow/kernel.hpp"
#include "veerflow/polyring.hpp"

namespace veerflow {

/// Z^b label of every edge: the projection of its chain. The projection is linear on all chains,
/// so every directed cycle receives its homology class.
inline std::vector<Exponent> edge_labels(const LabeledDigraph& g, const HomologyModel& h) {
  std::vector<Exponent> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) out.push_back(h.project(e.chain));
  return out;
}

inline Exponent sum_labels(const std::vector<Exponent>& labels, const std::vector<int>& edge_ids, int nvars) {
  Exponent s(nvars, 0);
  for (int ei : edge_ids)
    for (int i = 0; i < nvars; ++i) s[i] += labels[ei][i];
  return s;
}

/// det(I - A) with A_{ab} = sum of t^{label(e)} over edges a -> b. Computed blockwise over strong components.
inline LaurentPoly perron(const LabeledDigraph& g, const std::vector<Exponent>& labels, int nvars,
                          int bound = kDefaultDetBound) {
  int ncomp = 0;
  const auto comp = scc_ids(g, &ncomp);
  std::vector<std::vector<int>> members(ncomp);
  for (int v = 0; v < g.num_vertices; ++v) members[comp[v]].push_back(v);
  std::vector<int> local(g.num_vertices, -1);
  for (const auto& m : members)
    for (std::size_t i = 0; i < m.size(); ++i) local[m[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> internal(ncomp);
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
    if (comp[g.edges[i].tail] == comp[g.edges[i].head]) internal[comp[g.edges[i].tail]].push_back(i);
  LaurentPoly result = LaurentPoly::one(nvars);
  for (int c = 0; c < ncomp; ++c) {
    if (internal[c].empty()) continue;
    const int m = static_cast<int>(members[c].size());
    SquareMatrix<LaurentPoly> M(m, std::vector<LaurentPoly>(m, LaurentPoly::zero(nvars)));
    for (int i = 0; i < m; ++i) M[i][i] = LaurentPoly::one(nvars);
    for (int ei : internal[c]) {
      const auto& e = g.edges[ei];
      M[local[e.tail]][local[e.head]].add_term(labels[ei], -1);
    }
    result *= det(M, nvars, bound);
  }
  return result;
}

inline LaurentPoly perron(const LabeledDigraph& g, const HomologyModel& h) {
  return perron(g, edge_labels(g, h), h.betti);
}

/// One term contribution of the clique expansion: a family of pairwise vertex-disjoint simple cycles.
struct Multicycle {
  std::vector<int> edges;
  int components = 0;
  Exponent cls;
};

/// Enumerates all nonempty vertex-disjoint families of simple cycles; calls visit(Multicycle).
template <class Visit>
void for_each_multicycle(const LabeledDigraph& g, const std::vector<Exponent>& labels, int nvars, Visit visit,
                         std::size_t limit = 5000000) {
  if (g.num_vertices > 64) fail(ErrorKind::Precondition, "TooLarge", "clique enumeration supports at most 64 vertices");
  const auto cycles = simple_cycles(g, limit);
  std::vector<std::uint64_t> mask(cycles.size(), 0);
  std::vector<Exponent> cls(cycles.size());
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (int ei : cycles[i]) mask[i] |= std::uint64_t{1} << g.edges[ei].tail;
    cls[i] = sum_labels(labels, cycles[i], nvars);
  }
  std::size_t visited = 0;
  Multicycle cur;
  cur.cls.assign(nvars, 0);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t from, std::uint64_t used) {
    for (std::size_t i = from; i < cycles.size(); ++i) {
      if (mask[i] & used) continue;
      const std::size_t old = cur.edges.size();
      cur.edges.insert(cur.edges.end(), cycles[i].begin(), cycles[i].end());
      cur.components++;
      for (int k = 0; k < nvars; ++k) cur.cls[k] += cls[i][k];
      if (++visited > limit) fail(ErrorKind::Precondition, "TooLarge", "too many cycle families");
      visit(static_cast<const Multicycle&>(cur));
      rec(i + 1, used | mask[i]);
      for (int k = 0; k < nvars; ++k) cur.cls[k] -= cls[i][k];
      cur.components--;
      cur.edges.resize(old);
    }
  };
  rec(0, 0);
}

/// 1 + sum over simple multicycles C of (-1)^{|C|} t^{class(C)}.
inline LaurentPoly clique_oracle(const LabeledDigraph& g, const std::vector<Exponent>& labels, int nvars,
                                 std::size_t limit = 5000000) {
  LaurentPoly p = LaurentPoly::one(nvars);
  for_each_multicycle(
      g, labels, nvars, [&](const Multicycle& m) { p.add_term(m.cls, (m.components % 2) ? -1 : 1); }, limit);
  return p;
}

inline LaurentPoly clique_oracle(const LabeledDigraph& g, const HomologyModel& h) {
  return clique_oracle(g, edge_labels(g, h), h.betti);
}

/// For each nonzero exponent in supp(P), one multicycle realizing it (the first one enumerated).
inline std::map<Exponent, Multicycle, GradedLex> support_witnesses(const LabeledDigraph& g,
                                                                   const std::vector<Exponent>& labels, int nvars,
                                                                   const LaurentPoly& p, std::size_t limit = 5000000) {
  std::map<Exponent, Multicycle, GradedLex> out;
  std::size_t want = 0;
  const Exponent zero(nvars, 0);
  for (const auto& [e, c] : p.terms())
    if (e != zero) ++want;
  if (want == 0) return out;
  try {
    for_each_multicycle(
        g, labels, nvars,
        [&](const Multicycle& m) {
          if (p.coeff(m.cls) != 0 && !out.count(m.cls)) {
            out.emplace(m.cls, m);
            if (out.size() == want) throw want;
          }
        },
        limit);
  } catch (std::size_t) {
  }
  return out;
}

/// All derived structure for one triangulation.
struct Context {
  VeeringTriangulation vt;
  Graphs g;
  HomologyModel h;
  std::vector<Exponent> phi_labels, gamma_labels;
  int betti() const { return h.betti; }
};

inline Context make_context(const VeeringTriangulation& vt) {
  Context c;
  c.vt = vt;
  c.g = build_graphs(vt);
  c.h = build_homology(vt, c.g.secs);
  c.phi_labels = edge_labels(c.g.phi, c.h);
  c.gamma_labels = edge_labels(c.g.gamma, c.h);
  return c;
}

inline Context make_context(const RawTriangulation& raw) { return make_context(build_veering(raw)); }

/// P_Φ pushed to Z[G]; constant term 1 (the unnormalized representative).
inline LaurentPoly veering_polynomial_raw(const Context& c) { return perron(c.g.phi, c.phi_labels, c.betti()); }

/// V_τ with the canonical unit normalization.
inline LaurentPoly veering_polynomial(const Context& c) { return veering_polynomial_raw(c).normalized(); }

inline LaurentPoly veering_polynomial(const VeeringTriangulation& vt) { return veering_polynomial(make_context(vt)); }

}  // namespace veerflow
