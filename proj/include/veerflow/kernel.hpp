#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "veerflow/error.hpp"
#include "veerflow/ingest.hpp"
#include "veerflow/perm.hpp"

namespace veerflow {

/// One side of an edge: the Γ-path bottom tetrahedron -> fan tetrahedra -> top tetrahedron.
struct FanSide {
  std::vector<int> tets;    // B(e), fan..., T(e)
  std::vector<int> locals;  // local index of the edge inside each of those tetrahedra
  std::vector<int> faces;   // face classes crossed, length tets.size()-1
  int fan_length() const { return static_cast<int>(tets.size()) - 2; }
};

struct EdgeStar {
  int edge = -1;
  int bottom_tet = -1;  // tetrahedron whose top edge is this edge
  int top_tet = -1;     // tetrahedron whose bottom edge is this edge
  std::array<FanSide, 2> sides;
  int degree() const { return sides[0].fan_length() + sides[1].fan_length() + 2; }
};

struct TetRoles {
  int top = -1, bottom = -1;       // edge classes
  int top_local = -1, bottom_local = -1;
  std::array<int, 4> side_local{};  // local indices of the 0-edges
  std::array<int, 2> opposite_local{};  // the two 0-edges whose veer differs from the top edge's
};

/// A validated veering triangulation with all derived combinatorics.
struct VeeringTriangulation {
  RawTriangulation raw;
  int n = 0;
  std::vector<std::array<int, 6>> edge_of;                      // (tet, local edge) -> edge class
  std::vector<std::vector<std::pair<int, int>>> edge_members;   // edge class -> (tet, local edge)
  std::vector<std::array<int, 4>> face_of;                      // (tet, local face) -> face class
  std::vector<std::pair<int, int>> face_rep;                    // face class -> least (tet, face)
  std::vector<int> orientation;                                 // +1/-1 per tetrahedron
  std::vector<TetRoles> roles;
  std::vector<Veer> veer;                                       // per edge class
  std::vector<int> face_below, face_above;                      // face class -> tetrahedron
  std::vector<int> face_below_local, face_above_local;          // local face index in those tetrahedra
  std::vector<EdgeStar> stars;

  int num_edges() const { return n; }
  int num_faces() const { return 2 * n; }
  Veer tet_veer(int t) const { return veer[roles[t].top]; }
  bool is_hinge(int t) const { return veer[roles[t].top] != veer[roles[t].bottom]; }
  /// Edge class shared by two distinct faces of a tetrahedron.
  int shared_edge(int t, int f1, int f2) const {
    int a = -1, b = -1;
    for (int v = 0; v < 4; ++v)
      if (v != f1 && v != f2) (a < 0 ? a : b) = v;
    return edge_of[t][edge_index(a, b)];
  }
};

namespace detail {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

inline bool tet_has_vertex(int local_edge, int v) {
  return kEdgeVerts[local_edge][0] == v || kEdgeVerts[local_edge][1] == v;
}

}  // namespace detail

/// Builds and validates; throws Precondition errors NotTaut / NonOrientable / NotVeering.
inline VeeringTriangulation build_veering(const RawTriangulation& raw_in) {
  check_raw(raw_in);
  VeeringTriangulation vt;
  vt.raw = raw_in;
  const RawTriangulation& raw = vt.raw;
  const int n = raw.num_tetrahedra;
  vt.n = n;

  // Edge classes, numbered by least (tet, local edge).
  detail::UnionFind uf(6 * n);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = raw.gluings[t][f];
      for (int e = 0; e < 6; ++e) {
        int i = kEdgeVerts[e][0], j = kEdgeVerts[e][1];
        if (i == f || j == f) continue;
        uf.unite(6 * t + e, 6 * g.tet + edge_index(g.perm[i], g.perm[j]));
      }
    }
  std::map<int, int> root_id;
  vt.edge_of.assign(n, {});
  for (int x = 0; x < 6 * n; ++x) {
    int r = uf.find(x);
    auto it = root_id.find(r);
    if (it == root_id.end()) it = root_id.emplace(r, static_cast<int>(root_id.size())).first;
    vt.edge_of[x / 6][x % 6] = it->second;
  }
  const int nedges = static_cast<int>(root_id.size());
  if (nedges != n)
    fail(ErrorKind::Precondition, "NotTaut",
         "expected " + std::to_string(n) + " edge classes (ideal cusped triangulation), found " + std::to_string(nedges));
  vt.edge_members.assign(n, {});
  for (int t = 0; t < n; ++t)
    for (int e = 0; e < 6; ++e) vt.edge_members[vt.edge_of[t][e]].emplace_back(t, e);

  // Face classes.
  vt.face_of.assign(n, {-1, -1, -1, -1});
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      if (vt.face_of[t][f] >= 0) continue;
      const int id = static_cast<int>(vt.face_rep.size());
      vt.face_rep.emplace_back(t, f);
      vt.face_of[t][f] = id;
      const Gluing& g = raw.gluings[t][f];
      vt.face_of[g.tet][g.perm[f]] = id;
    }

  // Orientations.
  vt.orientation.assign(n, 0);
  vt.orientation[0] = 1;
  {
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int f = 0; f < 4; ++f) {
        const Gluing& g = raw.gluings[t][f];
        int o = -g.perm.sign() * vt.orientation[t];
        if (vt.orientation[g.tet] == 0) {
          vt.orientation[g.tet] = o;
          stack.push_back(g.tet);
        } else if (vt.orientation[g.tet] != o) {
          fail(ErrorKind::Precondition, "NonOrientable",
               "orientation conflict across face " + std::to_string(f) + " of tetrahedron " + std::to_string(t));
        }
      }
    }
  }

  // Angle sums.
  {
    std::vector<int> pis(n, 0);
    for (int t = 0; t < n; ++t) {
      pis[vt.edge_of[t][raw.taut[t]]]++;
      pis[vt.edge_of[t][5 - raw.taut[t]]]++;
    }
    for (int e = 0; e < n; ++e)
      if (pis[e] != 2)
        fail(ErrorKind::Precondition, "NotTaut",
             "edge class " + std::to_string(e) + " carries " + std::to_string(pis[e]) + " pi angles");
  }

  // Coorientations: the top faces of t are the faces opposite the bottom-edge vertices.
  std::vector<int> top_local(n, -1);
  top_local[0] = 5 - raw.taut[0];
  {
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      const int te = top_local[t];
      for (int f = 0; f < 4; ++f) {
        const bool is_top_face = !detail::tet_has_vertex(te, f);
        const Gluing& g = raw.gluings[t][f];
        const int f2 = g.perm[f];
        const int p = raw.taut[g.tet];
        // In the neighbour the face must have the opposite role.
        int want = -1;
        for (int cand : {p, 5 - p}) {
          bool top_there = !detail::tet_has_vertex(cand, f2);
          if (top_there != is_top_face) want = cand;
        }
        if (top_local[g.tet] < 0) {
          top_local[g.tet] = want;
          stack.push_back(g.tet);
        } else if (top_local[g.tet] != want) {
          fail(ErrorKind::Precondition, "NotTaut",
               "no consistent coorientation at face " + std::to_string(f) + " of tetrahedron " + std::to_string(t));
        }
      }
    }
  }
  vt.roles.assign(n, {});
  for (int t = 0; t < n; ++t) {
    TetRoles& r = vt.roles[t];
    r.top_local = top_local[t];
    r.bottom_local = 5 - top_local[t];
    r.top = vt.edge_of[t][r.top_local];
    r.bottom = vt.edge_of[t][r.bottom_local];
    int k = 0;
    for (int e = 0; e < 6; ++e)
      if (pair_of_edge(e) != raw.taut[t]) r.side_local[k++] = e;
  }
  {
    std::vector<int> as_top(n, 0), as_bottom(n, 0);
    for (int t = 0; t < n; ++t) {
      as_top[vt.roles[t].top]++;
      as_bottom[vt.roles[t].bottom]++;
    }
    for (int e = 0; e < n; ++e)
      if (as_top[e] != 1 || as_bottom[e] != 1)
        fail(ErrorKind::Precondition, "NotTaut",
             "edge class " + std::to_string(e) + " is not the top of exactly one and bottom of exactly one tetrahedron");
  }

  // Face roles.
  vt.face_below.assign(2 * n, -1);
  vt.face_above.assign(2 * n, -1);
  vt.face_below_local.assign(2 * n, -1);
  vt.face_above_local.assign(2 * n, -1);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const int fc = vt.face_of[t][f];
      if (!detail::tet_has_vertex(vt.roles[t].top_local, f)) {
        vt.face_below[fc] = t;
        vt.face_below_local[fc] = f;
      } else {
        vt.face_above[fc] = t;
        vt.face_above_local[fc] = f;
      }
    }
  for (int fc = 0; fc < 2 * n; ++fc)
    VEERFLOW_ASSERT(vt.face_below[fc] >= 0 && vt.face_above[fc] >= 0, "CoorientationBug", "face without both sides");

  // Veers: for a positively oriented tetrahedron with pi-pair p, pair p+1 is Left and p+2 Right.
  std::vector<int> veer_of(n, -1);
  std::vector<std::pair<int, int>> veer_source(n, {-1, -1});
  for (int t = 0; t < n; ++t) {
    const int p = raw.taut[t];
    const int left_pair = vt.orientation[t] > 0 ? (p + 1) % 3 : (p + 2) % 3;
    for (int e : vt.roles[t].side_local) {
      const int v = (pair_of_edge(e) == left_pair) ? 0 : 1;
      const int ec = vt.edge_of[t][e];
      if (veer_of[ec] < 0) {
        veer_of[ec] = v;
        veer_source[ec] = {t, e};
      } else if (veer_of[ec] != v) {
        fail(ErrorKind::Precondition, "NotVeering",
             "edge class " + std::to_string(ec) + " is forced to both veers (tetrahedra " +
                 std::to_string(veer_source[ec].first) + " and " + std::to_string(t) + ")");
      }
    }
  }
  vt.veer.assign(n, Veer::Left);
  for (int e = 0; e < n; ++e) {
    if (veer_of[e] < 0)
      fail(ErrorKind::Precondition, "NotVeering", "edge class " + std::to_string(e) + " is never a 0-edge");
    vt.veer[e] = veer_of[e] ? Veer::Right : Veer::Left;
  }
  if (!raw.veers.empty() && raw.veers != vt.veer)
    fail(ErrorKind::Precondition, "VeerMismatch", "supplied veer labels disagree with the inferred ones");
  for (int t = 0; t < n; ++t) {
    TetRoles& r = vt.roles[t];
    int k = 0;
    for (int e : r.side_local)
      if (vt.veer[vt.edge_of[t][e]] != vt.veer[r.top]) {
        if (k == 2) internal_error("ModelTetrahedron", "more than two opposite-veer side edges");
        r.opposite_local[k++] = e;
      }
    VEERFLOW_ASSERT(k == 2, "ModelTetrahedron", "tetrahedron without two opposite-veer side edges");
  }

  // Edge stars: walk both fans upward from the bottom tetrahedron.
  vt.stars.assign(n, {});
  for (int t = 0; t < n; ++t) {
    vt.stars[vt.roles[t].top].bottom_tet = t;
    vt.stars[vt.roles[t].bottom].top_tet = t;
  }
  for (int e = 0; e < n; ++e) {
    EdgeStar& st = vt.stars[e];
    st.edge = e;
    const int B = st.bottom_tet;
    const int tl = vt.roles[B].top_local;
    const int a = kEdgeVerts[tl][0], b = kEdgeVerts[tl][1];
    const int bl = vt.roles[B].bottom_local;
    const int c = kEdgeVerts[bl][0], d = kEdgeVerts[bl][1];
    const int s = Perm4(a, b, c, d).sign() * vt.orientation[B];
    const int first_face[2] = {s > 0 ? c : d, s > 0 ? d : c};
    for (int side = 0; side < 2; ++side) {
      FanSide& fs = st.sides[side];
      fs.tets.push_back(B);
      fs.locals.push_back(tl);
      int cur = B, exit_face = first_face[side], u = a, v = b;
      for (int steps = 0;; ++steps) {
        if (steps > 6 * n) internal_error("FanWalk", "fan walk does not terminate at edge " + std::to_string(e));
        fs.faces.push_back(vt.face_of[cur][exit_face]);
        const Gluing& g = raw.gluings[cur][exit_face];
        const int nt = g.tet, entry = g.perm[exit_face], nu = g.perm[u], nv = g.perm[v];
        const int le = edge_index(nu, nv);
        fs.tets.push_back(nt);
        fs.locals.push_back(le);
        if (le == vt.roles[nt].bottom_local) break;
        if (le == vt.roles[nt].top_local)
          fail(ErrorKind::Precondition, "NotTaut", "fan of edge " + std::to_string(e) + " reaches a second top");
        int other = -1;
        for (int x = 0; x < 4; ++x)
          if (x != nu && x != nv && x != entry) other = x;
        if (detail::tet_has_vertex(vt.roles[nt].top_local, entry) == false ||
            detail::tet_has_vertex(vt.roles[nt].top_local, other))
          fail(ErrorKind::Precondition, "NotTaut", "fan of edge " + std::to_string(e) + " is not monotone");
        cur = nt;
        exit_face = other;
        u = nu;
        v = nv;
      }
      if (fs.tets.back() != st.top_tet) internal_error("FanWalk", "fan ends away from the top tetrahedron");
      if (fs.fan_length() < 1)
        fail(ErrorKind::Precondition, "NotVeering", "edge class " + std::to_string(e) + " has an empty fan");
    }
    if (st.degree() != static_cast<int>(vt.edge_members[e].size()))
      internal_error("FanWalk", "fan lengths do not add up to the degree of edge " + std::to_string(e));
  }
  return vt;
}

inline VeeringTriangulation infer_veers(const RawTriangulation& raw) { return build_veering(raw); }

inline const std::vector<EdgeStar>& edge_stars(const VeeringTriangulation& vt) { return vt.stars; }

inline int delta_tau(const VeeringTriangulation& vt) {
  int d = 0;
  for (const auto& st : vt.stars)
    for (const auto& s : st.sides) d = std::max(d, s.fan_length());
  return d;
}

/// Copy of the input with the inferred veers attached, ready for serialization.
inline RawTriangulation with_veers(const VeeringTriangulation& vt) {
  RawTriangulation r = vt.raw;
  r.veers = vt.veer;
  return r;
}

struct ValidationCheck {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct ValidationReport {
  bool valid = false;
  std::vector<ValidationCheck> checks;
  int delta = 0;
  std::vector<std::array<int, 2>> fan_lengths;
};

/// Re-derives every invariant from the stored data.
inline ValidationReport validate_veering(const VeeringTriangulation& vt) {
  ValidationReport rep;
  const int n = vt.n;
  auto add = [&](const std::string& name, bool ok, const std::string& w) { rep.checks.push_back({name, ok, ok ? "" : w}); };
  {
    std::vector<int> pis(n, 0), zeros(n, 0);
    for (int t = 0; t < n; ++t)
      for (int e = 0; e < 6; ++e) (pair_of_edge(e) == vt.raw.taut[t] ? pis : zeros)[vt.edge_of[t][e]]++;
    std::string w;
    for (int e = 0; e < n && w.empty(); ++e)
      if (pis[e] != 2) w = "edge " + std::to_string(e);
    add("angle_sum", w.empty(), w);
  }
  {
    std::vector<int> top(n, 0), bot(n, 0);
    for (int t = 0; t < n; ++t) {
      top[vt.roles[t].top]++;
      bot[vt.roles[t].bottom]++;
    }
    std::string w;
    for (int e = 0; e < n && w.empty(); ++e)
      if (top[e] != 1 || bot[e] != 1) w = "edge " + std::to_string(e);
    add("unique_top_and_bottom", w.empty(), w);
  }
  {
    std::string w;
    for (int e = 0; e < n && w.empty(); ++e) {
      const auto& st = vt.stars[e];
      if (st.sides[0].fan_length() < 1 || st.sides[1].fan_length() < 1) w = "edge " + std::to_string(e);
      if (st.degree() != static_cast<int>(vt.edge_members[e].size())) w = "edge " + std::to_string(e) + " degree";
    }
    add("nonempty_fans", w.empty(), w);
  }
  {
    std::string w;
    for (int t = 0; t < n && w.empty(); ++t) {
      const int p = vt.raw.taut[t];
      const int left_pair = vt.orientation[t] > 0 ? (p + 1) % 3 : (p + 2) % 3;
      for (int e : vt.roles[t].side_local) {
        Veer want = pair_of_edge(e) == left_pair ? Veer::Left : Veer::Right;
        if (vt.veer[vt.edge_of[t][e]] != want) w = "tetrahedron " + std::to_string(t);
      }
    }
    add("model_tetrahedron", w.empty(), w);
  }
  rep.valid = std::all_of(rep.checks.begin(), rep.checks.end(), [](const ValidationCheck& c) { return c.pass; });
  rep.delta = delta_tau(vt);
  for (const auto& st : vt.stars) rep.fan_lengths.push_back({st.sides[0].fan_length(), st.sides[1].fan_length()});
  return rep;
}

/// Variant for raw input: a failed construction becomes a failing check with the error as witness.
inline ValidationReport validate_raw(const RawTriangulation& raw) {
  try {
    return validate_veering(build_veering(raw));
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::Internal) throw;
    ValidationReport rep;
    rep.valid = false;
    rep.checks.push_back({err.code(), false, err.what()});
    return rep;
  }
}

}  // namespace veerflow
