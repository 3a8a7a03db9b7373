#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "veerflow/error.hpp"
#include "veerflow/graphs.hpp"
#include "veerflow/homology.hpp"
#include "veerflow/kernel.hpp"
#include "veerflow/veering_poly.hpp"

namespace veerflow {

inline constexpr int kDefaultPatchDepth = 12;

/// g^off applied to the element `id`, where g is the deck translation of the complex (trivial for patches).
struct PlaneRef {
  int id = -1;
  std::int64_t off = 0;
};

/// Sectors, edges and vertices of a region of a dynamic plane, or of its quotient by a translation g.
/// Copies are glued by congruence closure: a vertex has one edge per local face, an edge one sector per
/// (sector class, side, position), and a sector one vertex/edge per boundary position. Each stored incidence
/// carries the power of g relating the two frames.
class PlaneComplex {
 public:
  enum class Kind : std::uint8_t { Vertex, Edge, Sector };

  PlaneComplex() = default;
  PlaneComplex(const VeeringTriangulation* vt, const std::vector<Sector>* secs) : vt_(vt), secs_(secs) {}

  const VeeringTriangulation& vt() const { return *vt_; }
  const std::vector<Sector>& secs() const { return *secs_; }

  Kind kind(int x) const { return elems_[x].kind; }
  int tag(int x) const { return elems_[x].tag; }
  int level(int x) const { return elems_[x].level; }
  std::size_t size() const { return elems_.size(); }

  PlaneRef find(int x) {
    std::int64_t acc = 0;
    int r = x;
    while (parent_[r] != r) {
      acc += offset_[r];
      r = parent_[r];
    }
    // Path compression.
    std::int64_t rest = acc;
    int y = x;
    while (parent_[y] != y) {
      const int next = parent_[y];
      const std::int64_t o = offset_[y];
      parent_[y] = r;
      offset_[y] = rest;
      rest -= o;
      y = next;
    }
    return {r, acc};
  }
  bool is_root(int x) const { return parent_[x] == x; }

  /// Incident element of root r under key, resolved to its root.
  std::optional<PlaneRef> get(int r, std::int64_t key) {
    auto it = elems_[r].inc.find(key);
    if (it == elems_[r].inc.end()) return std::nullopt;
    const PlaneRef t = it->second;
    const PlaneRef rt = find(t.id);
    return PlaneRef{rt.id, t.off + rt.off};
  }

  /// Records X_x = g^k X_y and closes up.
  void unite(int x, int y, std::int64_t k) {
    pending_.push_back({x, y, k});
    close();
  }

  // Keys.
  static std::int64_t slot_key(int local_face) { return local_face; }
  static constexpr std::int64_t kTail = 10, kHead = 11;
  static std::int64_t sector_key(int cls, int side, int pos) {
    return (std::int64_t{1} << 40) + (std::int64_t{cls} << 21) + (std::int64_t{side} << 20) + pos;
  }
  static std::int64_t vertex_key(int side, int pos) { return (std::int64_t{1} << 30) + (std::int64_t{side} << 20) + pos; }
  static std::int64_t edge_key(int side, int pos) { return (std::int64_t{1} << 32) + (std::int64_t{side} << 20) + pos; }

  int new_vertex(int tet) { return push(Kind::Vertex, tet, 0); }

  int new_edge(int face, int tail, std::int64_t tail_off, int head, std::int64_t head_off) {
    const int e = push(Kind::Edge, face, 0);
    link(e, kTail, {tail, tail_off});
    link(e, kHead, {head, head_off});
    link(tail, slot_key(vt_->face_below_local[face]), {e, -tail_off});
    link(head, slot_key(vt_->face_above_local[face]), {e, -head_off});
    close();
    return e;
  }

  /// A fresh copy of the sector of edge class cls, not yet glued to anything.
  int new_sector(int cls, int level) {
    const Sector& s = (*secs_)[cls];
    const int S = push(Kind::Sector, cls, level);
    const int B = new_vertex(s.bottom), T = new_vertex(s.top);
    for (int j = 0; j < 2; ++j) {
      const auto& vs = s.side_vertices[j];
      const auto& es = s.side_edges[j];
      std::vector<int> ids(vs.size());
      ids.front() = B;
      ids.back() = T;
      for (std::size_t i = 1; i + 1 < vs.size(); ++i) ids[i] = new_vertex(vs[i]);
      for (std::size_t i = 0; i < vs.size(); ++i) link(S, vertex_key(j, static_cast<int>(i)), {ids[i], 0});
      for (std::size_t i = 0; i < es.size(); ++i) {
        const int e = new_edge(es[i], ids[i], 0, ids[i + 1], 0);
        link(S, edge_key(j, static_cast<int>(i)), {e, 0});
        link(e, sector_key(cls, j, static_cast<int>(i)), {S, 0});
      }
    }
    close();
    return S;
  }

  /// The sector into which the maw points along edge root e, glued below e. Returns its root.
  int attach_below(int e, int level) {
    const PlaneRef re = find(e);
    const int f = elems_[re.id].tag;
    const int cls = vt_->roles[vt_->face_above[f]].bottom;
    const Sector& s = (*secs_)[cls];
    int k = s.side_edges[0].back() == f ? 0 : 1;
    VEERFLOW_ASSERT(s.side_edges[k].back() == f, "GluingConflict", "face is not a top edge of its maw sector");
    const int pos = static_cast<int>(s.side_edges[k].size()) - 1;
    if (auto have = get(re.id, sector_key(cls, k, pos))) return have->id;
    const int S = new_sector(cls, level);
    const auto top_edge = get(S, edge_key(k, pos));
    unite(top_edge->id, re.id, 0);
    return find(S).id;
  }

  /// σ(v): the sector whose top is vertex v. Returns its root.
  int attach_at_vertex(int v, int level) {
    const PlaneRef rv = find(v);
    const int cls = vt_->roles[elems_[rv.id].tag].bottom;
    const Sector& s = (*secs_)[cls];
    const int m0 = static_cast<int>(s.side_edges[0].size());
    const auto in0 = get(rv.id, slot_key(vt_->face_above_local[s.side_edges[0].back()]));
    if (in0)
      if (auto have = get(in0->id, sector_key(cls, 0, m0 - 1))) return have->id;
    const int S = new_sector(cls, level);
    unite(get(S, vertex_key(0, m0))->id, rv.id, 0);
    return find(S).id;
  }

  /// Sector copy of class cls glued along edge root e at boundary position (side, pos).
  int attach_along(int e, int cls, int side, int pos, int level) {
    const PlaneRef re = find(e);
    if (auto have = get(re.id, sector_key(cls, side, pos))) return have->id;
    const int S = new_sector(cls, level);
    unite(get(S, edge_key(side, pos))->id, re.id, 0);
    return find(S).id;
  }

  /// Attaches, below every sector of the given level, the sectors one descending step further.
  void descend(int lvl) {
    for (int S : roots(Kind::Sector)) {
      if (!is_root(S) || level(S) != lvl) continue;
      const Sector& s = (*secs_)[tag(S)];
      for (int j = 0; j < 2; ++j) {
        const int m = static_cast<int>(s.side_edges[j].size());
        for (int i = 0; i + 1 < m; ++i) attach_below(get(find(S).id, edge_key(j, i))->id, lvl + 1);
        for (int i = 0; i < m; ++i) {
          if (j == 1 && i == 0) continue;
          attach_at_vertex(get(find(S).id, vertex_key(j, i))->id, lvl + 1);
        }
      }
    }
  }

  std::vector<int> roots(Kind k) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(elems_.size()); ++i)
      if (parent_[i] == i && elems_[i].kind == k) out.push_back(i);
    return out;
  }

  /// Sector incidences of edge root e, as (sector root, side, pos, offset).
  struct EdgeSector {
    int sector, side, pos;
    std::int64_t off;
  };
  std::vector<EdgeSector> edge_sectors(int e) {
    std::vector<EdgeSector> out;
    const auto lo = elems_[e].inc.lower_bound(sector_key(0, 0, 0));
    std::vector<std::pair<std::int64_t, PlaneRef>> items(lo, elems_[e].inc.end());
    for (const auto& [key, ref] : items) {
      const std::int64_t rel = key - sector_key(0, 0, 0);
      const PlaneRef r = find(ref.id);
      out.push_back({r.id, static_cast<int>((rel >> 20) & 1), static_cast<int>(rel & ((1 << 20) - 1)), ref.off + r.off});
    }
    return out;
  }

 private:
  struct Elem {
    Kind kind;
    int tag;
    int level;
    std::map<std::int64_t, PlaneRef> inc;
  };
  struct Pending {
    int x, y;
    std::int64_t k;
  };

  int push(Kind k, int tag, int level) {
    elems_.push_back({k, tag, level, {}});
    parent_.push_back(static_cast<int>(parent_.size()));
    offset_.push_back(0);
    return static_cast<int>(elems_.size()) - 1;
  }

  void link(int x, std::int64_t key, PlaneRef ref) {
    const PlaneRef rx = find(x);
    const PlaneRef moved{ref.id, ref.off - rx.off};
    auto& inc = elems_[rx.id].inc;
    auto it = inc.find(key);
    if (it == inc.end()) inc.emplace(key, moved);
    else pending_.push_back({moved.id, it->second.id, it->second.off - moved.off});
  }

  void close() {
    while (!pending_.empty()) {
      const Pending p = pending_.back();
      pending_.pop_back();
      PlaneRef a = find(p.x), b = find(p.y);
      std::int64_t c = p.k + b.off - a.off;  // X_a = g^c X_b
      int ra = a.id, rb = b.id;
      if (ra == rb) {
        if (c != 0) fail(ErrorKind::Internal, "GluingConflict", "an element is identified with a nontrivial translate of itself");
        continue;
      }
      if (elems_[ra].kind != elems_[rb].kind || elems_[ra].tag != elems_[rb].tag)
        fail(ErrorKind::Internal, "GluingConflict",
             "identified copies carry different tags (" + std::to_string(elems_[ra].tag) + " vs " +
                 std::to_string(elems_[rb].tag) + ")");
      if (elems_[ra].inc.size() > elems_[rb].inc.size()) {
        std::swap(ra, rb);
        c = -c;
      }
      parent_[ra] = rb;
      offset_[ra] = c;
      elems_[rb].level = std::min(elems_[rb].level, elems_[ra].level);
      auto moved_from = std::move(elems_[ra].inc);
      elems_[ra].inc.clear();
      auto& into = elems_[rb].inc;
      for (const auto& [key, ref] : moved_from) {
        const PlaneRef moved{ref.id, ref.off - c};
        auto it = into.find(key);
        if (it == into.end()) into.emplace(key, moved);
        else pending_.push_back({moved.id, it->second.id, it->second.off - moved.off});
      }
    }
  }

  const VeeringTriangulation* vt_ = nullptr;
  const std::vector<Sector>* secs_ = nullptr;
  std::vector<Elem> elems_;
  std::vector<int> parent_;
  std::vector<std::int64_t> offset_;
  std::vector<Pending> pending_;
};

/// A sector seen from one of its boundary vertices. off: the sector copy is g^off of its root, in the frame
/// of the vertex root.
struct Corner {
  int sector = -1, side = 0, pos = 0;
  std::int64_t off = 0;
  bool is_bottom() const { return pos == 0; }
};

/// Region of a dynamic plane (or of its quotient) with vertex-level indices.
struct PlaneView {
  PlaneComplex cx;
  std::vector<int> sectors;                    // sector roots
  std::map<int, std::vector<Corner>> corners;  // vertex root -> corners

  int side_len(int S, int j) const { return static_cast<int>(cx.secs()[cx.tag(S)].side_edges[j].size()); }
  bool is_top(const Corner& c) const { return c.pos == side_len(c.sector, c.side); }
  bool is_corner_vertex(const Corner& c) const { return c.pos == side_len(c.sector, c.side) - 1; }
  /// The two edges of the sector at this corner, as keys.
  std::array<std::int64_t, 2> corner_edges(const Corner& c) const {
    if (c.pos == 0) return {PlaneComplex::edge_key(0, 0), PlaneComplex::edge_key(1, 0)};
    if (is_top(c)) return {PlaneComplex::edge_key(0, side_len(c.sector, 0) - 1), PlaneComplex::edge_key(1, side_len(c.sector, 1) - 1)};
    return {PlaneComplex::edge_key(c.side, c.pos - 1), PlaneComplex::edge_key(c.side, c.pos)};
  }
};

namespace detail {

inline void index_corners(PlaneView& pv) {
  pv.sectors = pv.cx.roots(PlaneComplex::Kind::Sector);
  pv.corners.clear();
  for (int S : pv.sectors) {
    const Sector& s = pv.cx.secs()[pv.cx.tag(S)];
    for (int j = 0; j < 2; ++j) {
      const int m = static_cast<int>(s.side_vertices[j].size());
      for (int i = 0; i < m; ++i) {
        if (j == 1 && (i == 0 || i == m - 1)) continue;  // bottom and top listed once, under side 0
        const auto v = pv.cx.get(S, PlaneComplex::vertex_key(j, i));
        pv.corners[v->id].push_back({S, j, i, -v->off});
      }
    }
  }
}

}  // namespace detail

/// Whether vertex root v has a closed link among sectors accepted by keep(sector root).
template <class Keep>
bool vertex_interior(PlaneView& pv, int v, Keep keep) {
  auto it = pv.corners.find(v);
  if (it == pv.corners.end()) return false;
  // Link graph: nodes are (edge root, offset) at v, links are corners.
  std::map<std::pair<int, std::int64_t>, std::vector<int>> adj;
  std::vector<std::array<std::pair<int, std::int64_t>, 2>> links;
  for (const Corner& c : it->second) {
    if (!keep(c.sector)) continue;
    std::array<std::pair<int, std::int64_t>, 2> ends;
    const auto keys = pv.corner_edges(c);
    for (int a = 0; a < 2; ++a) {
      const auto e = pv.cx.get(c.sector, keys[a]);
      ends[a] = {e->id, e->off + c.off};
    }
    adj[ends[0]].push_back(static_cast<int>(links.size()));
    adj[ends[1]].push_back(static_cast<int>(links.size()));
    links.push_back(ends);
  }
  if (links.empty()) return false;
  for (const auto& [node, ls] : adj)
    if (ls.size() != 2) return false;
  // Connected cycle.
  std::set<std::pair<int, std::int64_t>> seen;
  std::vector<std::pair<int, std::int64_t>> stack{adj.begin()->first};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    if (!seen.insert(x).second) continue;
    for (int l : adj[x]) {
      stack.push_back(links[l][0]);
      stack.push_back(links[l][1]);
    }
  }
  return seen.size() == adj.size();
}

inline bool vertex_interior(PlaneView& pv, int v) {
  return vertex_interior(pv, v, [](int) { return true; });
}

/// Outgoing Φ-edges at a vertex root: corners where the vertex is the bottom or a non-corner side vertex.
struct PhiStep {
  int phi_edge = -1;  // edge id of Φ
  int target = -1;    // vertex root at the top of the sector
  std::int64_t winding = 0;
  Corner via;
};

template <class Keep>
std::vector<PhiStep> phi_out(PlaneView& pv, int v, Keep keep) {
  std::vector<PhiStep> out;
  auto it = pv.corners.find(v);
  if (it == pv.corners.end()) return out;
  const VeeringTriangulation& vt = pv.cx.vt();
  const int t = pv.cx.tag(v);
  for (const Corner& c : it->second) {
    if (!keep(c.sector) || pv.is_top(c) || pv.is_corner_vertex(c)) continue;
    const Sector& s = pv.cx.secs()[pv.cx.tag(c.sector)];
    int slot = 0;
    if (c.pos != 0) {
      const int le = s.side_locals[c.side][c.pos];
      slot = vt.roles[t].opposite_local[0] == le ? 1 : (vt.roles[t].opposite_local[1] == le ? 2 : -1);
      VEERFLOW_ASSERT(slot > 0, "PhiStep", "non-corner side vertex whose edge is not an opposite-veer side edge");
    } else {
      VEERFLOW_ASSERT(vt.roles[t].top == s.edge, "PhiStep", "bottom vertex whose top edge differs from the sector edge");
    }
    const auto top = pv.cx.get(c.sector, PlaneComplex::vertex_key(0, pv.side_len(c.sector, 0)));
    out.push_back({3 * t + slot, top->id, top->off + c.off, c});
  }
  return out;
}

inline std::vector<PhiStep> phi_out(PlaneView& pv, int v) {
  return phi_out(pv, v, [](int) { return true; });
}

// ---------------------------------------------------------------------------------------------
// Descending patches.

struct PlanePatch {
  PlaneView view;
  int seed = -1;          // edge class of the seed sector
  int depth = 0;
  int seed_sector = -1;   // sector root
  int top_vertex = -1;    // vertex root at the top of the seed
  std::vector<int> level;  // per element id (meaningful for sector roots): first level reached
};

/// S_k: sectors reached from the seed by descending paths through at most k sectors.
inline PlanePatch descending_patch(const VeeringTriangulation& vt, const std::vector<Sector>& secs, int seed, int depth,
                                   int max_depth = kDefaultPatchDepth) {
  if (seed < 0 || seed >= vt.n) fail(ErrorKind::Usage, "BadSeed", "seed edge class " + std::to_string(seed) + " out of range");
  if (depth < 1 || depth > max_depth)
    fail(ErrorKind::Precondition, "DepthBound", "depth must lie in [1, " + std::to_string(max_depth) + "]");
  PlanePatch p;
  p.seed = seed;
  p.depth = depth;
  p.view.cx = PlaneComplex(&vt, &secs);
  auto& cx = p.view.cx;
  const int S0 = cx.new_sector(seed, 1);
  for (int lvl = 1; lvl < depth; ++lvl) cx.descend(lvl);
  detail::index_corners(p.view);
  p.seed_sector = cx.find(S0).id;
  p.top_vertex = cx.get(p.seed_sector, PlaneComplex::vertex_key(0, static_cast<int>(secs[seed].side_vertices[0].size()) - 1))->id;
  return p;
}

inline PlanePatch descending_patch(const Context& c, int seed, int depth, int max_depth = kDefaultPatchDepth) {
  return descending_patch(c.vt, c.g.secs, seed, depth, max_depth);
}

struct PatchCheck {
  std::string name;
  bool ok = true;
  std::string witness;
  long checked = 0;
};

struct PatchReport {
  int sectors = 0, vertices = 0, edges = 0, interior_vertices = 0;
  long euler = 0;
  std::vector<PatchCheck> checks;
  bool all_ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
  const PatchCheck* check(const std::string& n) const {
    for (const auto& c : checks)
      if (c.name == n) return &c;
    return nullptr;
  }
};

namespace detail {

inline void note(PatchCheck& c, bool ok, const std::string& why) {
  ++c.checked;
  if (!ok && c.ok) {
    c.ok = false;
    c.witness = why;
  }
}

/// Vertex roots on the two negative branch subrays through the top of the seed (within the patch).
inline std::set<int> branch_subrays(PlanePatch& p, const TurnTable& tt, std::vector<std::vector<int>>* paths = nullptr) {
  auto& cx = p.view.cx;
  const VeeringTriangulation& vt = cx.vt();
  std::set<int> on;
  on.insert(p.top_vertex);
  const Sector& s = cx.secs()[p.seed];
  for (int j = 0; j < 2; ++j) {
    std::vector<int> edges_on_path;
    auto e = cx.get(p.seed_sector, PlaneComplex::edge_key(j, static_cast<int>(s.side_edges[j].size()) - 1));
    while (e) {
      edges_on_path.push_back(e->id);
      const int f = cx.tag(e->id);
      const auto tail = cx.get(e->id, PlaneComplex::kTail);
      on.insert(tail->id);
      const int u = cx.tag(tail->id);
      int g = -1;
      for (int b : tt.bottom_faces[u])
        if (tt.branch_next[b] == f) g = b;
      VEERFLOW_ASSERT(g >= 0, "BranchLine", "no branching predecessor");
      e = cx.get(tail->id, PlaneComplex::slot_key(vt.face_above_local[g]));
      if (e && std::find(edges_on_path.begin(), edges_on_path.end(), e->id) != edges_on_path.end()) break;
    }
    if (paths) paths->push_back(edges_on_path);
  }
  return on;
}

}  // namespace detail

/// Checks the structural statements about descending sets on a built patch.
inline PatchReport check_patch(PlanePatch& p, const TurnTable& tt) {
  PatchReport rep;
  auto& pv = p.view;
  auto& cx = pv.cx;
  const VeeringTriangulation& vt = cx.vt();
  const auto verts = cx.roots(PlaneComplex::Kind::Vertex);
  const auto edges = cx.roots(PlaneComplex::Kind::Edge);
  rep.sectors = static_cast<int>(pv.sectors.size());
  rep.vertices = static_cast<int>(verts.size());
  rep.edges = static_cast<int>(edges.size());
  rep.euler = static_cast<long>(rep.vertices) - rep.edges + rep.sectors;

  PatchCheck disc{"disc"};
  detail::note(disc, rep.euler == 1, "Euler characteristic " + std::to_string(rep.euler));
  for (int e : edges) {
    const auto n = cx.edge_sectors(e).size();
    detail::note(disc, n >= 1 && n <= 2, "edge in " + std::to_string(n) + " sectors");
  }

  // Quarter plane: every boundary vertex of S_n is interior to S_{n+1} or on the two branch subrays.
  PatchCheck quarter{"quarter_plane_boundary"};
  std::vector<std::vector<int>> paths;
  const auto on_rays = detail::branch_subrays(p, tt, &paths);
  for (int n = 1; n < p.depth; ++n) {
    auto in_n = [&](int S) { return cx.level(S) <= n; };
    auto in_n1 = [&](int S) { return cx.level(S) <= n + 1; };
    for (int v : verts) {
      bool present = false;
      for (const auto& c : pv.corners[v])
        if (in_n(c.sector)) present = true;
      if (!present || vertex_interior(pv, v, in_n)) continue;
      const bool ok = vertex_interior(pv, v, in_n1) || on_rays.count(v);
      detail::note(quarter, ok, "vertex (tet " + std::to_string(cx.tag(v)) + ") on the boundary of S_" + std::to_string(n) +
                                    " is neither interior to S_" + std::to_string(n + 1) + " nor on a branch subray");
    }
  }
  // The subrays are boundary edges of the full patch and are branch paths.
  for (const auto& path : paths) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      const auto n = cx.edge_sectors(path[i]).size();
      detail::note(quarter, n == 1, "branch subray edge lies in " + std::to_string(n) + " patch sectors");
      if (i + 1 < path.size())
        detail::note(quarter, tt.turn(cx.tag(path[i + 1]), cx.tag(path[i])) == TurnKind::Branching, "subray turn is not branching");
    }
  }
  // Every boundary vertex of the full patch lies on a subray or on the last level.
  for (int v : verts) {
    if (vertex_interior(pv, v) || on_rays.count(v)) continue;
    bool deepest = false;
    for (const auto& c : pv.corners[v])
      if (cx.level(c.sector) == p.depth) deepest = true;
    detail::note(quarter, deepest, "boundary vertex away from the subrays and the last level");
  }

  PatchCheck unique_out{"unique_phi_out"};
  PatchCheck ray_end{"phi_ray_terminates_on_boundary"};
  std::map<int, int> out_of;
  for (int v : verts) {
    if (!vertex_interior(pv, v)) continue;
    ++rep.interior_vertices;
    const auto outs = phi_out(pv, v);
    detail::note(unique_out, outs.size() == 1,
                 "interior vertex (tet " + std::to_string(cx.tag(v)) + ") has " + std::to_string(outs.size()) + " outgoing Φ-edges");
    if (outs.size() == 1) out_of[v] = outs[0].target;
  }
  // Φ-rays from interior vertices of S_{depth-1} reach the subrays before leaving the interior.
  for (const auto& [v, next] : out_of) {
    bool shallow = false;
    for (const auto& c : pv.corners[v])
      if (cx.level(c.sector) < p.depth) shallow = true;
    if (!shallow) continue;
    int x = v;
    std::set<int> seen;
    while (out_of.count(x) && seen.insert(x).second) x = out_of[x];
    detail::note(ray_end, on_rays.count(x) > 0,
                 "Φ-ray from tet " + std::to_string(cx.tag(v)) + " stops at tet " + std::to_string(cx.tag(x)) + " off the boundary");
  }

  PatchCheck sveer{"sectorveer"};
  PatchCheck lastab{"last_turn_ab"};
  for (int S : pv.sectors) {
    const Sector& s = cx.secs()[cx.tag(S)];
    const Veer x = vt.tet_veer(s.bottom);
    for (int j = 0; j < 2; ++j) {
      const auto& vs = s.side_vertices[j];
      const int m = static_cast<int>(vs.size());
      for (int i = 1; i + 1 < m; ++i) {
        const bool want_same = (i == m - 2);
        detail::note(sveer, (vt.tet_veer(vs[i]) == x) == want_same,
                     "sector " + std::to_string(s.edge) + " side " + std::to_string(j) + " vertex " + std::to_string(i));
      }
      const auto& es = s.side_edges[j];
      for (std::size_t i = 1; i < es.size(); ++i) {
        const TurnKind want = (i + 1 == es.size()) ? TurnKind::AB : TurnKind::Branching;
        detail::note(lastab, tt.turn(es[i - 1], es[i]) == want,
                     "sector " + std::to_string(s.edge) + " side " + std::to_string(j) + " turn " + std::to_string(i));
      }
    }
  }

  // Pushdown: for a patch edge u -> v, σ(u) is a child of σ(v), hence Δ(σ(u)) ⊆ Δ(σ(v)).
  PatchCheck push{"pushdown"};
  std::map<int, int> sigma_of;  // vertex root -> sector root with that top
  for (int S : pv.sectors) {
    const auto top = cx.get(S, PlaneComplex::vertex_key(0, pv.side_len(S, 0)));
    sigma_of[top->id] = S;
  }
  std::map<int, std::set<int>> children;
  for (int S : pv.sectors) {
    const Sector& s = cx.secs()[cx.tag(S)];
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i + 1 < static_cast<int>(s.side_edges[j].size()); ++i) {
        const auto e = cx.get(S, PlaneComplex::edge_key(j, i));
        for (const auto& es : cx.edge_sectors(e->id))
          if (es.pos + 1 == pv.side_len(es.sector, es.side)) children[S].insert(es.sector);
      }
  }
  auto descendants = [&](int S) {
    std::set<int> seen{S};
    std::vector<int> st{S};
    while (!st.empty()) {
      const int x = st.back();
      st.pop_back();
      for (int y : children[x])
        if (seen.insert(y).second) st.push_back(y);
    }
    return seen;
  };
  for (int e : edges) {
    const int u = cx.get(e, PlaneComplex::kTail)->id, v = cx.get(e, PlaneComplex::kHead)->id;
    if (!sigma_of.count(u) || !sigma_of.count(v)) continue;
    const int su = sigma_of[u], sv = sigma_of[v];
    if (cx.level(su) >= p.depth) continue;
    const auto du = descendants(su), dv = descendants(sv);
    bool inc = true;
    for (int x : du)
      if (!dv.count(x)) inc = false;
    detail::note(push, children[sv].count(su) && inc, "pushdown fails along an edge into tet " + std::to_string(cx.tag(v)));
  }

  // Ray collision: across a side edge q -> r of a sector s, the Φ-edges from q and r both reach top(s)
  // unless r is the corner of s, where the turn r -> top(s) is AB.
  PatchCheck collide{"ray_collision"};
  for (int S : pv.sectors) {
    const Sector& s = cx.secs()[cx.tag(S)];
    for (int j = 0; j < 2; ++j) {
      const int m = static_cast<int>(s.side_edges[j].size());
      for (int i = 0; i + 1 < m; ++i) {
        const int r_pos = i + 1;
        const bool r_corner = (r_pos == m - 1);
        if (!r_corner) {
          detail::note(collide, true, "");
          continue;
        }
        const bool ab = tt.turn(s.side_edges[j][m - 2], s.side_edges[j][m - 1]) == TurnKind::AB;
        const auto r = cx.get(S, PlaneComplex::vertex_key(j, r_pos));
        bool leaves = true;
        if (vertex_interior(pv, r->id))
          for (const auto& st : phi_out(pv, r->id))
            if (st.via.sector == S) leaves = false;
        detail::note(collide, ab && leaves, "corner of sector " + std::to_string(s.edge) + " without an AB separation");
      }
    }
  }

  rep.checks = {disc, quarter, unique_out, ray_end, sveer, lastab, push, collide};
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Chains of sectors.

struct Chain {
  std::vector<int> sectors;  // sector roots, top first
  std::vector<int> classes;  // their edge classes
  int side = 0;              // side of the first sector whose bottom branch segment continues the chain
  bool maximal = true;
  bool complete = true;      // false when the chain runs past the last level of the patch
  bool uniform_veer = true;
  int length() const { return static_cast<int>(sectors.size()); }
};

/// Chains descending from every sector of the patch, one per side.
inline std::vector<Chain> chains(PlanePatch& p) {
  auto& pv = p.view;
  auto& cx = pv.cx;
  const VeeringTriangulation& vt = cx.vt();
  std::vector<Chain> out;
  std::set<std::pair<int, int>> continued;  // (sector, side) that appear as a non-initial link
  for (int S0 : pv.sectors)
    for (int k0 = 0; k0 < 2; ++k0) {
      Chain c;
      c.side = k0;
      int S = S0, k = k0;
      std::set<int> seen;
      while (true) {
        if (!seen.insert(S).second) break;
        c.sectors.push_back(S);
        c.classes.push_back(cx.tag(S));
        if (pv.side_len(S, k) != 2) break;
        const auto e = cx.get(S, PlaneComplex::edge_key(k, 0));
        int below = -1, below_side = -1;
        for (const auto& es : cx.edge_sectors(e->id))
          if (es.pos + 1 == pv.side_len(es.sector, es.side)) {
            below = es.sector;
            below_side = es.side;
          }
        if (below < 0) {
          c.complete = false;
          break;
        }
        S = below;
        k = 1 - below_side;
        continued.insert({S, k});
      }
      // Uniform veer over bottoms and corners of all links and tops below the first.
      std::set<Veer> vs;
      for (std::size_t i = 0; i < c.classes.size(); ++i) {
        const Sector& s = cx.secs()[c.classes[i]];
        vs.insert(vt.tet_veer(s.bottom));
        vs.insert(vt.tet_veer(s.corner[0]));
        vs.insert(vt.tet_veer(s.corner[1]));
        if (i > 0) vs.insert(vt.tet_veer(s.top));
      }
      c.uniform_veer = vs.size() == 1;
      out.push_back(std::move(c));
    }
  for (auto& c : out)
    if (continued.count({c.sectors.front(), c.side})) c.maximal = false;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Quotients of dynamic planes by a Γ-cycle.

enum class ResolutionKind { FlowCycle, OddABCycle, DepthExceeded };

inline const char* resolution_name(ResolutionKind k) {
  switch (k) {
    case ResolutionKind::FlowCycle: return "FlowCycle";
    case ResolutionKind::OddABCycle: return "OddABCycle";
    default: return "DepthExceeded";
  }
}

/// A periodic Φ-line of the quotient: its Φ-edges and how many times it winds around the core.
struct QuotientCycle {
  std::vector<int> phi_edges;
  std::int64_t winding = 0;
};

struct QuotientPlane {
  PlaneView view;
  GammaCycle gamma;
  int depth = 0;
  bool orientable = true;
  bool orientation_known = false;
  std::vector<QuotientCycle> phi_cycles;  // distinct periodic Φ-lines found
  long unresolved_rays = 0;
};

namespace detail {

/// Orientability of the built region. Sectors are oriented so shared edges are traversed oppositely;
/// frames are tracked so a loop around the core is noticed. Empty when no such loop was built.
inline std::optional<bool> region_orientable(PlaneView& pv) {
  auto& cx = pv.cx;
  std::map<int, std::pair<int, std::int64_t>> seen;  // sector -> (orientation, frame)
  bool loop = false, clash = false;
  for (int S0 : pv.sectors) {
    if (seen.count(S0)) continue;
    seen[S0] = {1, 0};
    std::vector<int> st{S0};
    while (!st.empty()) {
      const int S = st.back();
      st.pop_back();
      const auto [o, frame] = seen[S];
      const Sector& s = cx.secs()[cx.tag(S)];
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < static_cast<int>(s.side_edges[j].size()); ++i) {
          const auto e = cx.get(S, PlaneComplex::edge_key(j, i));
          const int dir_here = o * (j == 0 ? 1 : -1);
          for (const auto& es : cx.edge_sectors(e->id)) {
            if (es.sector == S && es.side == j && es.pos == i) continue;
            const int want = -dir_here * (es.side == 0 ? 1 : -1);
            const std::int64_t fr = frame + e->off + es.off;
            auto it = seen.find(es.sector);
            if (it == seen.end()) {
              seen[es.sector] = {want, fr};
              st.push_back(es.sector);
              continue;
            }
            if (it->second.second != fr) loop = true;
            if (it->second.first != want) clash = true;
          }
        }
    }
  }
  if (clash) return false;
  if (!loop) return std::nullopt;
  return true;
}

}  // namespace detail

/// Builds D(γ̃)/⟨g⟩ by attaching the descending sets of γ's sectors, to the given depth.
/// `strip` lists extra sectors glued along γ's edges: (edge index, {class, side, pos}).
inline QuotientPlane quotient_plane(const Context& c, const GammaCycle& gamma, int depth,
                                    const std::vector<std::pair<int, std::array<int, 3>>>& strip = {}) {
  const VeeringTriangulation& vt = c.vt;
  if (!is_gamma_cycle(vt, gamma)) fail(ErrorKind::Precondition, "NotACycle", "face sequence is not a directed Γ-cycle");
  if (depth < 1 || depth > 4 * kDefaultPatchDepth)
    fail(ErrorKind::Precondition, "DepthBound", "depth must lie in [1, " + std::to_string(4 * kDefaultPatchDepth) + "]");
  QuotientPlane q;
  q.gamma = gamma;
  q.depth = depth;
  q.view.cx = PlaneComplex(&vt, &c.g.secs);
  auto& cx = q.view.cx;
  const int m = static_cast<int>(gamma.size());
  std::vector<int> pv(m), pe(m);
  for (int i = 0; i < m; ++i) pv[i] = cx.new_vertex(vt.face_below[gamma[i]]);
  for (int i = 0; i < m; ++i) pe[i] = cx.new_edge(gamma[i], pv[i], 0, pv[(i + 1) % m], i + 1 == m ? 1 : 0);
  for (int i = 0; i < m; ++i) cx.attach_below(pe[i], 1);
  for (const auto& [k, key] : strip) cx.attach_along(pe[k], key[0], key[1], key[2], 1);
  for (int lvl = 1; lvl < depth; ++lvl) cx.descend(lvl);
  detail::index_corners(q.view);
  if (auto o = detail::region_orientable(q.view)) {
    q.orientable = *o;
    q.orientation_known = true;
  }

  // Functional graph of Φ on interior vertices.
  std::map<int, PhiStep> next;
  // All built sectors lie in one plane, where the outgoing Φ-edge is unique; one seen is the one.
  for (const auto& [v, cs] : q.view.corners) {
    auto outs = phi_out(q.view, v);
    if (outs.size() > 1)
      fail(ErrorKind::Internal, "PlaneStructure", "vertex with " + std::to_string(outs.size()) + " outgoing Φ-edges");
    if (outs.size() == 1) next[v] = outs[0];
  }
  std::map<int, int> state;  // 0 unvisited, 1 on stack, 2 done
  for (const auto& [v0, st0] : next) {
    if (state[v0]) continue;
    std::vector<int> walk;
    int x = v0;
    while (next.count(x) && state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = next[x].target;
    }
    if (next.count(x) && state[x] == 1) {
      QuotientCycle qc;
      auto it = std::find(walk.begin(), walk.end(), x);
      std::vector<int> cyc(it, walk.end());
      std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end(), [&](int a, int b) {
                    return next[a].phi_edge < next[b].phi_edge;
                  }), cyc.end());
      for (int y : cyc) {
        qc.phi_edges.push_back(next[y].phi_edge);
        qc.winding += next[y].winding;
      }
      q.phi_cycles.push_back(std::move(qc));
    } else if (!next.count(x)) {
      q.unresolved_rays += static_cast<long>(walk.size());
    }
    for (int y : walk) state[y] = 2;
  }
  std::sort(q.phi_cycles.begin(), q.phi_cycles.end(),
            [](const QuotientCycle& a, const QuotientCycle& b) { return std::tie(a.winding, a.phi_edges) < std::tie(b.winding, b.phi_edges); });
  return q;
}

using StripSpec = std::vector<std::pair<int, std::array<int, 3>>>;

/// For a branch cycle, the sectors on the far side of its branch line: once the sector at the first
/// vertex is chosen (the half-disc through it, or the sector with that vertex at its bottom), every later
/// one is forced. Empty when the forced sequence does not close up after one period.
inline std::optional<StripSpec> branch_strip(const Context& c, const GammaCycle& g, bool through) {
  const VeeringTriangulation& vt = c.vt;
  const auto& secs = c.g.secs;
  const int m = static_cast<int>(g.size());
  auto find_pos = [&](int cls, int f_in, int f_out, int tet) -> std::optional<std::array<int, 3>> {
    const Sector& s = secs[cls];
    for (int j = 0; j < 2; ++j)
      for (std::size_t i = 1; i < s.side_edges[j].size(); ++i)
        if (s.side_edges[j][i - 1] == f_in && s.side_edges[j][i] == f_out && s.side_vertices[j][i] == tet)
          return std::array<int, 3>{cls, j, static_cast<int>(i)};
    return std::nullopt;
  };
  auto bottom_pos = [&](int tet, int f_out) -> std::optional<std::array<int, 3>> {
    const int cls = vt.roles[tet].top;
    for (int j = 0; j < 2; ++j)
      if (secs[cls].side_edges[j][0] == f_out) return std::array<int, 3>{cls, j, 0};
    return std::nullopt;
  };
  const int w0 = vt.face_below[g[0]];
  std::optional<std::array<int, 3>> x;
  if (through) {
    const int cls = vt.shared_edge(w0, vt.face_above_local[g[m - 1]], vt.face_below_local[g[0]]);
    x = find_pos(cls, g[m - 1], g[0], w0);
  } else {
    x = bottom_pos(w0, g[0]);
  }
  if (!x) return std::nullopt;
  StripSpec out;
  const auto first = *x;
  for (int k = 0; k < m; ++k) {
    out.emplace_back(k, *x);
    const auto [cls, j, i] = *x;
    const Sector& s = secs[cls];
    const int len = static_cast<int>(s.side_edges[j].size());
    const int nf = g[(k + 1) % m];
    const int w = s.side_vertices[j][i + 1];
    if (i + 1 == len) return std::nullopt;       // γ would run along a top edge
    if (i + 1 == len - 1) x = bottom_pos(w, nf);  // corner: the sector below continues
    else if (s.side_edges[j][i + 1] == nf) x = std::array<int, 3>{cls, j, i + 1};
    else x.reset();
    if (!x) return std::nullopt;
  }
  if (*x != first) return std::nullopt;
  return out;
}

struct Resolution {
  ResolutionKind kind = ResolutionKind::DepthExceeded;
  std::vector<int> phi_cycle;  // Φ edge ids (FlowCycle)
  GammaCycle ab_cycle;         // faces (OddABCycle)
  Exponent gamma_class, result_class;
  bool class_match = false;
  bool branch_cycle = false;
  int depth = 0;
  std::string note;
};

inline bool is_branch_cycle(const TurnTable& tt, const GammaCycle& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (tt.branch_next[g[i]] != g[(i + 1) % g.size()]) return false;
  return true;
}

inline bool is_ab_cycle(const TurnTable& tt, const GammaCycle& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (tt.ab_next[g[i]] != g[(i + 1) % g.size()]) return false;
  return true;
}

namespace detail {

/// AB lines of the quotient: cycles of AB continuations among edges present in the region.
inline std::vector<std::pair<GammaCycle, std::int64_t>> quotient_ab_cycles(QuotientPlane& q, const TurnTable& tt) {
  auto& cx = q.view.cx;
  const VeeringTriangulation& vt = cx.vt();
  std::map<int, std::pair<int, std::int64_t>> next;
  for (int e : cx.roots(PlaneComplex::Kind::Edge)) {
    const auto h = cx.get(e, PlaneComplex::kHead);
    const int nf = tt.ab_next[cx.tag(e)];
    const auto e2 = cx.get(h->id, PlaneComplex::slot_key(vt.face_below_local[nf]));
    if (e2) next[e] = {e2->id, h->off + e2->off};
  }
  std::vector<std::pair<GammaCycle, std::int64_t>> out;
  std::map<int, int> state;
  for (const auto& [e0, nx] : next) {
    if (state[e0]) continue;
    std::vector<int> walk;
    int x = e0;
    while (next.count(x) && state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = next[x].first;
    }
    if (next.count(x) && state[x] == 1) {
      auto it = std::find(walk.begin(), walk.end(), x);
      GammaCycle faces;
      std::int64_t w = 0;
      for (auto jt = it; jt != walk.end(); ++jt) {
        faces.push_back(cx.tag(*jt));
        w += next[*jt].second;
      }
      out.emplace_back(std::move(faces), w);
    }
    for (int y : walk) state[y] = 2;
  }
  return out;
}

inline Exponent gamma_class(const Context& c, const GammaCycle& g) { return sum_labels(c.gamma_labels, g, c.betti()); }

}  // namespace detail

/// A Γ-cycle resolved to a homotopic Φ-cycle, or to an AB-cycle of odd length, within D(γ̃)/⟨g⟩.
inline Resolution resolve_dual_cycle(const Context& c, const GammaCycle& gamma, int depth = kDefaultPatchDepth) {
  const auto& tt = c.g.turns;
  if (!is_gamma_cycle(c.vt, gamma)) fail(ErrorKind::Precondition, "NotACycle", "face sequence is not a directed Γ-cycle");
  Resolution r;
  r.depth = depth;
  r.gamma_class = detail::gamma_class(c, gamma);
  r.branch_cycle = is_branch_cycle(tt, gamma);
  if (is_ab_cycle(tt, gamma) && gamma.size() % 2 == 1) {
    r.kind = ResolutionKind::OddABCycle;
    r.ab_cycle = gamma;
    r.result_class = r.gamma_class;
    r.class_match = true;
    return r;
  }
  std::vector<StripSpec> strips{{}};
  if (r.branch_cycle) {
    strips.clear();
    for (bool through : {true, false})
      if (auto st = branch_strip(c, gamma, through)) strips.push_back(*st);
  }
  std::optional<QuotientPlane> last;
  for (const auto& strip : strips) {
    QuotientPlane q = quotient_plane(c, gamma, depth, strip);
    for (const auto& qc : q.phi_cycles) {
      if (qc.winding != 1) continue;
      r.kind = ResolutionKind::FlowCycle;
      r.phi_cycle = qc.phi_edges;
      r.result_class = sum_labels(c.phi_labels, qc.phi_edges, c.betti());
      r.class_match = (r.result_class == r.gamma_class);
      if (!r.class_match)
        fail(ErrorKind::Internal, "ClassMismatch", "Φ-cycle winding once around the quotient has a different class than γ");
      return r;
    }
    last = std::move(q);
  }
  if (!last) {
    r.note = "branch cycle whose far-side strip does not close up after one period";
    return r;
  }
  QuotientPlane& q = *last;
  for (auto& [faces, w] : detail::quotient_ab_cycles(q, tt)) {
    if (w != 1 || faces.size() % 2 == 0) continue;
    std::rotate(faces.begin(), std::min_element(faces.begin(), faces.end()), faces.end());
    r.kind = ResolutionKind::OddABCycle;
    r.ab_cycle = faces;
    r.result_class = detail::gamma_class(c, faces);
    r.class_match = (r.result_class == r.gamma_class);
    if (!r.class_match)
      fail(ErrorKind::Internal, "ClassMismatch", "AB-cycle winding once around the quotient has a different class than γ");
    return r;
  }
  r.kind = ResolutionKind::DepthExceeded;
  r.note = "no periodic Φ-line or odd AB line winding once within the depth bound";
  return r;
}

struct StripWidth {
  bool exceeded = false;
  int width = 0;
  int strips = 0;
  bool orientable = true;
  bool orientation_known = false;
  int ab_parity = 0;
  bool parity_consistent = true;
  std::vector<std::int64_t> windings;
};

/// Number of asymptotic classes of Φ-rays in D(γ̃), counted from the periodic Φ-lines of the quotient:
/// a line winding w times around the core accounts for w lines upstairs.
inline StripWidth strip_width(const Context& c, const GammaCycle& gamma, int depth = kDefaultPatchDepth) {
  const auto& tt = c.g.turns;
  StripWidth sw;
  sw.ab_parity = ab_parity(c.vt, tt, gamma);
  StripSpec strip;
  if (is_branch_cycle(tt, gamma)) {
    auto st = branch_strip(c, gamma, true);
    if (!st) st = branch_strip(c, gamma, false);
    if (!st) {
      sw.exceeded = true;
      return sw;
    }
    strip = *st;
  }
  QuotientPlane q = quotient_plane(c, gamma, depth, strip);
  sw.orientable = q.orientable;
  sw.orientation_known = q.orientation_known;
  for (const auto& qc : q.phi_cycles) {
    sw.width += static_cast<int>(qc.winding);
    sw.windings.push_back(qc.winding);
  }
  if (sw.width == 0) {
    sw.exceeded = true;
    return sw;
  }
  sw.strips = sw.width - 1;
  int once = 0;
  for (auto w : sw.windings) once += (w == 1);
  if (sw.orientation_known && sw.orientable != (sw.ab_parity == 0)) sw.parity_consistent = false;
  if (sw.ab_parity == 0) {
    for (auto w : sw.windings)
      if (w != 1) sw.parity_consistent = false;
  } else {
    if (once > 1) sw.parity_consistent = false;
    if ((once == 1) != (sw.width % 2 == 1)) sw.parity_consistent = false;
  }
  return sw;
}

}  // namespace veerflow
