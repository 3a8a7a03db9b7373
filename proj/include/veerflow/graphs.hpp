#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "veerflow/error.hpp"
#include "veerflow/kernel.hpp"

namespace veerflow {

/// Directed multigraph whose edges carry integer 1-chains (dense, indexed by face class).
struct LabeledDigraph {
  struct Edge {
    int tail = -1, head = -1;
    std::vector<std::int64_t> chain;
    std::vector<int> path;  // faces crossed, in order (empty for abstract graphs)
    int tet = -1;           // Φ: tetrahedron producing the edge
    int slot = -1;          // Φ: 0 = to top edge, 1/2 = to the opposite-veer side edges
  };
  int num_vertices = 0;
  int chain_dim = 0;
  std::vector<Edge> edges;

  int add_edge(int tail, int head, std::vector<std::int64_t> chain, std::vector<int> path = {}) {
    edges.push_back({tail, head, std::move(chain), std::move(path), -1, -1});
    return static_cast<int>(edges.size()) - 1;
  }
  std::vector<std::vector<int>> out_edges() const {
    std::vector<std::vector<int>> out(num_vertices);
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) out[edges[i].tail].push_back(i);
    return out;
  }
  std::vector<int> out_degrees() const {
    std::vector<int> d(num_vertices, 0);
    for (const auto& e : edges) d[e.tail]++;
    return d;
  }
  std::vector<int> in_degrees() const {
    std::vector<int> d(num_vertices, 0);
    for (const auto& e : edges) d[e.head]++;
    return d;
  }
  /// Subgraph on the same vertex set keeping the listed edges (in the given order).
  LabeledDigraph edge_subgraph(const std::vector<int>& keep) const {
    LabeledDigraph g;
    g.num_vertices = num_vertices;
    g.chain_dim = chain_dim;
    for (int i : keep) g.edges.push_back(edges[i]);
    return g;
  }
};

// ---------------------------------------------------------------------------
// Generic digraph algorithms

/// Tarjan's strongly connected components, iterative. Components are numbered in reverse topological order.
inline std::vector<int> scc_ids(int nv, const std::vector<std::pair<int, int>>& arcs, int* num_components = nullptr) {
  std::vector<std::vector<int>> adj(nv);
  for (const auto& [a, b] : arcs) adj[a].push_back(b);
  std::vector<int> index(nv, -1), low(nv, 0), comp(nv, -1), stack;
  std::vector<bool> on(nv, false);
  int counter = 0, ncomp = 0;
  std::vector<std::pair<int, std::size_t>> call;
  for (int s = 0; s < nv; ++s) {
    if (index[s] >= 0) continue;
    call.push_back({s, 0});
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on[s] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < adj[v].size()) {
        int w = adj[v][i++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = true;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on[w] = false;
            comp[w] = ncomp;
          } while (w != v);
          ++ncomp;
        }
        int done = v;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
  }
  if (num_components) *num_components = ncomp;
  return comp;
}

inline std::vector<int> scc_ids(const LabeledDigraph& g, int* num_components = nullptr) {
  std::vector<std::pair<int, int>> arcs;
  for (const auto& e : g.edges) arcs.emplace_back(e.tail, e.head);
  return scc_ids(g.num_vertices, arcs, num_components);
}

inline bool strongly_connected(const LabeledDigraph& g) {
  int k = 0;
  scc_ids(g, &k);
  return k <= 1;
}

/// All simple directed cycles as edge-id lists, each starting at its least vertex.
/// Parallel edges give distinct cycles. Throws TooLarge past `limit` cycles.
inline std::vector<std::vector<int>> simple_cycles(const LabeledDigraph& g, std::size_t limit = 1000000) {
  std::vector<std::vector<int>> result;
  const int nv = g.num_vertices;
  const auto out = g.out_edges();
  std::vector<char> on_path(nv, 0), allowed(nv, 0);
  std::vector<int> path;
  for (int s = 0; s < nv; ++s) {
    // Restrict the search to the strong component of s among vertices >= s.
    std::vector<std::pair<int, int>> arcs;
    for (const auto& e : g.edges)
      if (e.tail >= s && e.head >= s) arcs.emplace_back(e.tail, e.head);
    const auto comp = scc_ids(nv, arcs);
    for (int v = 0; v < nv; ++v) allowed[v] = (v >= s && comp[v] == comp[s]);
    std::function<void(int)> dfs = [&](int v) {
      for (int ei : out[v]) {
        const int w = g.edges[ei].head;
        if (!allowed[w]) continue;
        if (w == s) {
          path.push_back(ei);
          result.push_back(path);
          path.pop_back();
          if (result.size() > limit) fail(ErrorKind::Precondition, "TooLarge", "more than " + std::to_string(limit) + " simple cycles");
        } else if (!on_path[w]) {
          on_path[w] = 1;
          path.push_back(ei);
          dfs(w);
          path.pop_back();
          on_path[w] = 0;
        }
      }
    };
    on_path[s] = 1;
    dfs(s);
    on_path[s] = 0;
  }
  return result;
}

/// Sum of edge chains along an edge list.
inline std::vector<std::int64_t> chain_of_edges(const LabeledDigraph& g, const std::vector<int>& edge_ids) {
  std::vector<std::int64_t> c(g.chain_dim, 0);
  for (int ei : edge_ids)
    for (int k = 0; k < g.chain_dim; ++k) c[k] += g.edges[ei].chain[k];
  return c;
}

// ---------------------------------------------------------------------------
// Γ, sectors, turns, Φ

inline std::vector<std::int64_t> face_chain(int num_faces, const std::vector<int>& faces) {
  std::vector<std::int64_t> c(num_faces, 0);
  for (int f : faces) c[f] += 1;
  return c;
}

/// Dual graph: vertex per tetrahedron, edge id = face class, from the tetrahedron below to the one above.
inline LabeledDigraph dual_graph(const VeeringTriangulation& vt) {
  LabeledDigraph g;
  g.num_vertices = vt.n;
  g.chain_dim = vt.num_faces();
  for (int f = 0; f < vt.num_faces(); ++f) g.add_edge(vt.face_below[f], vt.face_above[f], face_chain(g.chain_dim, {f}), {f});
  return g;
}

struct Sector {
  int edge = -1;
  int top = -1;     // tetrahedron with bottom edge = edge
  int bottom = -1;  // tetrahedron with top edge = edge
  std::array<std::vector<int>, 2> side_vertices;  // bottom, fan..., top
  std::array<std::vector<int>, 2> side_locals;    // local index of the edge in each side vertex
  std::array<std::vector<int>, 2> side_edges;     // Γ-edges (faces), bottom to top
  std::array<int, 2> corner{-1, -1};
};

inline std::vector<Sector> sectors(const VeeringTriangulation& vt) {
  std::vector<Sector> out(vt.n);
  for (int e = 0; e < vt.n; ++e) {
    const EdgeStar& st = vt.stars[e];
    Sector& s = out[e];
    s.edge = e;
    s.top = st.top_tet;
    s.bottom = st.bottom_tet;
    for (int k = 0; k < 2; ++k) {
      s.side_vertices[k] = st.sides[k].tets;
      s.side_locals[k] = st.sides[k].locals;
      s.side_edges[k] = st.sides[k].faces;
      s.corner[k] = s.side_vertices[k][s.side_vertices[k].size() - 2];
    }
  }
  return out;
}

enum class TurnKind { Unset, Branching, AB };

inline const char* turn_name(TurnKind k) { return k == TurnKind::AB ? "AB" : k == TurnKind::Branching ? "branching" : "unset"; }

/// Turns at a tetrahedron t: (incoming face, outgoing face). Indexed by the incoming face f and the
/// slot j of the outgoing face among the top faces of above(f).
struct TurnTable {
  std::vector<std::array<int, 2>> top_faces;     // per tetrahedron, its top faces (Γ out-edges), by local face index
  std::vector<std::array<int, 2>> bottom_faces;  // per tetrahedron, its bottom faces (Γ in-edges)
  std::vector<std::array<TurnKind, 2>> kind;     // per incoming face
  std::vector<std::array<int, 2>> shared;        // edge class shared by the two faces of the turn
  std::vector<int> branch_next, ab_next;         // successor maps on faces

  TurnKind turn(int f, int g) const {
    for (int j = 0; j < 2; ++j)
      if (top_faces[above_of(f)][j] == g) return kind[f][j];
    fail(ErrorKind::Precondition, "NotATurn", "faces " + std::to_string(f) + " and " + std::to_string(g) + " do not form a turn");
  }
  int above_of(int f) const { return above[f]; }
  std::vector<int> above;
};

inline TurnTable classify_turns(const VeeringTriangulation& vt, const std::vector<Sector>& secs) {
  const int n = vt.n, nf = vt.num_faces();
  TurnTable tt;
  tt.above = vt.face_above;
  tt.top_faces.assign(n, {-1, -1});
  tt.bottom_faces.assign(n, {-1, -1});
  for (int t = 0; t < n; ++t) {
    int a = 0, b = 0;
    for (int f = 0; f < 4; ++f) {
      const int fc = vt.face_of[t][f];
      if (vt.face_below[fc] == t && vt.face_below_local[fc] == f) tt.top_faces[t][a++] = fc;
      else tt.bottom_faces[t][b++] = fc;
    }
    VEERFLOW_ASSERT(a == 2 && b == 2, "TurnTable", "tetrahedron without two top and two bottom faces");
  }
  tt.kind.assign(nf, {TurnKind::Unset, TurnKind::Unset});
  tt.shared.assign(nf, {-1, -1});
  for (int f = 0; f < nf; ++f) {
    const int t = vt.face_above[f];
    for (int j = 0; j < 2; ++j)
      tt.shared[f][j] = vt.shared_edge(t, vt.face_above_local[f], vt.face_below_local[tt.top_faces[t][j]]);
  }
  for (const Sector& s : secs)
    for (int k = 0; k < 2; ++k) {
      const auto& faces = s.side_edges[k];
      for (std::size_t i = 1; i < faces.size(); ++i) {
        const int f = faces[i - 1], g = faces[i];
        const int t = vt.face_above[f];
        int j = tt.top_faces[t][0] == g ? 0 : (tt.top_faces[t][1] == g ? 1 : -1);
        VEERFLOW_ASSERT(j >= 0, "TurnTable", "sector side is not a Γ-path");
        const TurnKind want = (i + 1 == faces.size()) ? TurnKind::AB : TurnKind::Branching;
        if (tt.kind[f][j] != TurnKind::Unset && tt.kind[f][j] != want)
          fail(ErrorKind::Internal, "InconsistentClassification",
               "turn (" + std::to_string(f) + "," + std::to_string(g) + ") at tetrahedron " + std::to_string(t) +
                   " classified both ways (sector " + std::to_string(s.edge) + " side " + std::to_string(k) + ")");
        tt.kind[f][j] = want;
      }
    }
  tt.branch_next.assign(nf, -1);
  tt.ab_next.assign(nf, -1);
  for (int f = 0; f < nf; ++f) {
    const int t = vt.face_above[f];
    for (int j = 0; j < 2; ++j) {
      if (tt.kind[f][j] == TurnKind::Unset)
        fail(ErrorKind::Internal, "InconsistentClassification", "turn from face " + std::to_string(f) + " left unclassified");
      (tt.kind[f][j] == TurnKind::AB ? tt.ab_next : tt.branch_next)[f] = tt.top_faces[t][j];
    }
    if (tt.ab_next[f] < 0 || tt.branch_next[f] < 0)
      fail(ErrorKind::Internal, "InconsistentClassification",
           "incoming face " + std::to_string(f) + " lacks one branching and one AB continuation");
  }
  return tt;
}

inline TurnTable classify_turns(const VeeringTriangulation& vt) { return classify_turns(vt, sectors(vt)); }

/// Flow graph: vertex per edge class, three edges per tetrahedron (slot 0 to the top edge, slots 1/2 to
/// the opposite-veer side edges). Each edge's chain is the sector-side path from t up to the target's top.
inline LabeledDigraph flow_graph(const VeeringTriangulation& vt, const std::vector<Sector>& secs) {
  LabeledDigraph g;
  g.num_vertices = vt.n;
  g.chain_dim = vt.num_faces();
  for (int t = 0; t < vt.n; ++t) {
    const TetRoles& r = vt.roles[t];
    {
      const Sector& s = secs[r.top];
      LabeledDigraph::Edge e{r.bottom, r.top, face_chain(g.chain_dim, s.side_edges[0]), s.side_edges[0], t, 0};
      g.edges.push_back(std::move(e));
    }
    for (int k = 0; k < 2; ++k) {
      const int le = r.opposite_local[k];
      const int target = vt.edge_of[t][le];
      const Sector& s = secs[target];
      int side = -1, pos = -1;
      for (int sd = 0; sd < 2 && side < 0; ++sd)
        for (std::size_t i = 1; i + 1 < s.side_vertices[sd].size(); ++i)
          if (s.side_vertices[sd][i] == t && s.side_locals[sd][i] == le) {
            side = sd;
            pos = static_cast<int>(i);
            break;
          }
      VEERFLOW_ASSERT(side >= 0, "PositionError", "tetrahedron not found on the sector boundary of its side edge");
      if (pos + 2 == static_cast<int>(s.side_vertices[side].size()))
        fail(ErrorKind::Internal, "PositionError",
             "tetrahedron " + std::to_string(t) + " is a corner of sector " + std::to_string(target));
      std::vector<int> path(s.side_edges[side].begin() + pos, s.side_edges[side].end());
      LabeledDigraph::Edge e{r.bottom, target, face_chain(g.chain_dim, path), path, t, k + 1};
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

inline LabeledDigraph flow_graph(const VeeringTriangulation& vt) { return flow_graph(vt, sectors(vt)); }

/// A directed Γ-cycle as its cyclic sequence of faces.
using GammaCycle = std::vector<int>;

inline bool is_gamma_cycle(const VeeringTriangulation& vt, const GammaCycle& c) {
  if (c.empty()) return false;
  for (int f : c)
    if (f < 0 || f >= vt.num_faces()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (vt.face_above[c[i]] != vt.face_below[c[(i + 1) % c.size()]]) return false;
  return true;
}

/// Number of AB turns of a Γ-cycle (including the closing turn).
inline int ab_turn_count(const VeeringTriangulation& vt, const TurnTable& tt, const GammaCycle& c) {
  if (!is_gamma_cycle(vt, c)) fail(ErrorKind::Precondition, "NotACycle", "face sequence is not a directed Γ-cycle");
  int ab = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (tt.turn(c[i], c[(i + 1) % c.size()]) == TurnKind::AB) ++ab;
  return ab;
}

inline int ab_parity(const VeeringTriangulation& vt, const TurnTable& tt, const GammaCycle& c) {
  return ab_turn_count(vt, tt, c) % 2;
}

struct SpecialCycle {
  GammaCycle faces;
  int ab_turns = 0;
  int parity() const { return ab_turns % 2; }
};

struct SpecialCycles {
  std::vector<SpecialCycle> branch, ab;
};

/// Cycles of a functional graph on faces, each rotated to start at its least face.
inline std::vector<GammaCycle> functional_cycles(const std::vector<int>& next) {
  const int m = static_cast<int>(next.size());
  std::vector<int> state(m, 0);  // 0 new, 1 on current walk, 2 done
  std::vector<GammaCycle> out;
  for (int s = 0; s < m; ++s) {
    if (state[s]) continue;
    std::vector<int> walk;
    int x = s;
    while (state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = next[x];
    }
    if (state[x] == 1) {
      auto it = std::find(walk.begin(), walk.end(), x);
      GammaCycle c(it, walk.end());
      std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
      out.push_back(std::move(c));
    }
    for (int y : walk) state[y] = 2;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline SpecialCycles special_cycles(const VeeringTriangulation& vt, const TurnTable& tt) {
  SpecialCycles sc;
  for (auto& c : functional_cycles(tt.branch_next)) sc.branch.push_back({c, ab_turn_count(vt, tt, c)});
  for (auto& c : functional_cycles(tt.ab_next)) sc.ab.push_back({c, ab_turn_count(vt, tt, c)});
  return sc;
}

/// Simple Γ-cycles as face sequences.
inline std::vector<GammaCycle> simple_gamma_cycles(const VeeringTriangulation& vt, std::size_t limit = 1000000) {
  const LabeledDigraph g = dual_graph(vt);
  auto cyc = simple_cycles(g, limit);
  // Edge ids of Γ coincide with face classes.
  return cyc;
}

/// Everything built once per triangulation.
struct Graphs {
  LabeledDigraph gamma, phi;
  std::vector<Sector> secs;
  TurnTable turns;
};

inline Graphs build_graphs(const VeeringTriangulation& vt) {
  Graphs g;
  g.gamma = dual_graph(vt);
  g.secs = sectors(vt);
  g.turns = classify_turns(vt, g.secs);
  g.phi = flow_graph(vt, g.secs);
  return g;
}

}  // namespace veerflow
