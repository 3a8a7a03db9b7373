#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veerflow/error.hpp"
#include "veerflow/graphs.hpp"
#include "veerflow/homology.hpp"
#include "veerflow/polyring.hpp"
#include "veerflow/veering_poly.hpp"

namespace veerflow {

/// Weight of every Φ-edge: the pairing of its face chain with a nonnegative cocycle.
inline std::vector<std::int64_t> edge_weights(const LabeledDigraph& phi, const Cocycle& eta) {
  for (std::size_t f = 0; f < eta.size(); ++f)
    if (eta[f] < 0)
      fail(ErrorKind::Precondition, "NegativeWeight",
           "face " + std::to_string(f) + " has negative weight; supply a carried (nonnegative) representative");
  std::vector<std::int64_t> w;
  w.reserve(phi.edges.size());
  for (const auto& e : phi.edges) w.push_back(pair(eta, e.chain));
  return w;
}

/// Φ|η: the weight-zero edges lying in strong components that carry a cycle.
struct RestrictedGraph {
  std::vector<int> edges;                    // Φ edge ids, increasing
  std::vector<std::vector<int>> components;  // per recurrent component, its Φ edge ids
  bool empty() const { return edges.empty(); }
};

/// Keeps edges whose weight satisfies keep(), then their recurrent part.
template <class Keep>
RestrictedGraph recurrent_subgraph(const LabeledDigraph& g, Keep keep) {
  std::vector<std::pair<int, int>> arcs;
  std::vector<int> ids;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
    if (keep(i)) {
      arcs.emplace_back(g.edges[i].tail, g.edges[i].head);
      ids.push_back(i);
    }
  int ncomp = 0;
  const auto comp = scc_ids(g.num_vertices, arcs, &ncomp);
  std::vector<std::vector<int>> by_comp(ncomp);
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (comp[arcs[k].first] == comp[arcs[k].second]) by_comp[comp[arcs[k].first]].push_back(ids[k]);
  RestrictedGraph r;
  // Components ordered by their least edge id.
  std::vector<std::vector<int>> comps;
  for (auto& c : by_comp)
    if (!c.empty()) comps.push_back(std::move(c));
  std::sort(comps.begin(), comps.end());
  r.components = std::move(comps);
  for (const auto& c : r.components) r.edges.insert(r.edges.end(), c.begin(), c.end());
  std::sort(r.edges.begin(), r.edges.end());
  return r;
}

inline RestrictedGraph restricted_flow_graph(const LabeledDigraph& phi, const std::vector<std::int64_t>& weights) {
  for (auto w : weights)
    if (w < 0) fail(ErrorKind::Precondition, "NegativeWeight", "Φ-edge with negative weight");
  return recurrent_subgraph(phi, [&](int i) { return weights[i] == 0; });
}

/// Labels restricted to a list of edges (aligned with edge_subgraph(ids)).
inline std::vector<Exponent> select_labels(const std::vector<Exponent>& labels, const std::vector<int>& ids) {
  std::vector<Exponent> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(labels[i]);
  return out;
}

struct RestrictedPolys {
  RestrictedGraph graph;
  std::vector<std::int64_t> weights;
  LaurentPoly restricted;             // perron(Φ|η), constant term 1
  LaurentPoly deleted;                // V_τ with every term g, η(g) != 0, removed
  std::vector<LaurentPoly> per_component;
  bool equal = false;
  bool product_ok = true;
};

inline RestrictedPolys restricted_polynomials(const Context& c, const Cocycle& eta) {
  check_cocycle(c.h, eta);
  RestrictedPolys r;
  r.weights = edge_weights(c.g.phi, eta);
  r.graph = restricted_flow_graph(c.g.phi, r.weights);
  const int b = c.betti();
  r.restricted = perron(c.g.phi.edge_subgraph(r.graph.edges), select_labels(c.phi_labels, r.graph.edges), b);
  const auto cls = cohomology_class(c.h, eta);
  r.deleted = veering_polynomial_raw(c).filter([&](const Exponent& g) { return evaluate(cls, g) == 0; });
  r.equal = (r.restricted == r.deleted);
  if (!r.equal)
    fail(ErrorKind::Internal, "MismatchError",
         "restricted Perron polynomial " + r.restricted.to_string() + " differs from term deletion " + r.deleted.to_string());
  LaurentPoly prod = LaurentPoly::one(b);
  for (const auto& comp : r.graph.components) {
    r.per_component.push_back(perron(c.g.phi.edge_subgraph(comp), select_labels(c.phi_labels, comp), b));
    prod *= r.per_component.back();
  }
  r.product_ok = (prod == r.restricted);
  if (!r.product_ok) fail(ErrorKind::Internal, "MismatchError", "product over components differs from P_{Φ|η}");
  return r;
}

}  // namespace veerflow
