#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "veerflow/error.hpp"
#include "veerflow/perm.hpp"

namespace veerflow {

enum class Veer : std::uint8_t { Left = 0, Right = 1 };

inline char veer_char(Veer v) { return v == Veer::Left ? 'L' : 'R'; }
inline Veer opposite(Veer v) { return v == Veer::Left ? Veer::Right : Veer::Left; }

struct Gluing {
  int tet = -1;
  Perm4 perm;
};

/// Combinatorial input: face gluings plus the pi-pair of every tetrahedron.
struct RawTriangulation {
  int num_tetrahedra = 0;
  std::vector<std::array<Gluing, 4>> gluings;  // gluings[t][f]: face f of t (opposite vertex f)
  std::vector<int> taut;                       // pi-pair per tetrahedron, 0..2
  std::vector<Veer> veers;                     // optional, canonical edge-class order
  std::string name;

  friend bool operator==(const RawTriangulation& a, const RawTriangulation& b) {
    if (a.num_tetrahedra != b.num_tetrahedra || a.taut != b.taut || a.veers != b.veers) return false;
    for (int t = 0; t < a.num_tetrahedra; ++t)
      for (int f = 0; f < 4; ++f)
        if (a.gluings[t][f].tet != b.gluings[t][f].tet || !(a.gluings[t][f].perm == b.gluings[t][f].perm))
          return false;
    return true;
  }
};

/// Checks the structural invariants; throws a Parse error naming the offending face.
inline void check_raw(const RawTriangulation& raw) {
  const int n = raw.num_tetrahedra;
  if (n <= 0) fail(ErrorKind::Parse, "Empty", "no tetrahedra");
  if (static_cast<int>(raw.gluings.size()) != n) fail(ErrorKind::Parse, "Malformed", "gluing table size mismatch");
  if (static_cast<int>(raw.taut.size()) != n) fail(ErrorKind::Parse, "Malformed", "taut data has wrong length");
  for (int t = 0; t < n; ++t) {
    if (raw.taut[t] < 0 || raw.taut[t] > 2)
      fail(ErrorKind::Parse, "IndexOutOfRange", "taut entry out of range at tetrahedron " + std::to_string(t));
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = raw.gluings[t][f];
      std::string where = "tetrahedron " + std::to_string(t) + " face " + std::to_string(f);
      if (g.tet < 0) fail(ErrorKind::Parse, "BoundaryFace", where + " is not glued");
      if (g.tet >= n) fail(ErrorKind::Parse, "IndexOutOfRange", where + " glued to missing tetrahedron");
      const int f2 = g.perm[f];
      if (g.tet == t && f2 == f) fail(ErrorKind::Parse, "SelfGluedFace", where + " is glued to itself");
      const Gluing& back = raw.gluings[g.tet][f2];
      if (back.tet != t || !(back.perm == g.perm.inverse()))
        fail(ErrorKind::Parse, "NotInvolution", where + " gluing is not reciprocated");
    }
  }
}

namespace detail {

struct LineCursor {
  const std::string& s;
  int line;
  std::size_t pos = 0;

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Parse, "Syntax",
         "line " + std::to_string(line) + " column " + std::to_string(pos + 1) + ": " + msg);
  }
  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }
  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) error(std::string("expected '") + c + "'");
    ++pos;
  }
  std::string word() {
    skip_ws();
    std::size_t b = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != '\r') ++pos;
    if (b == pos) error("unexpected end of line");
    return s.substr(b, pos - b);
  }
  long long integer() {
    skip_ws();
    std::size_t b = pos;
    if (pos < s.size() && s[pos] == '-') ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (b == pos || (pos == b + 1 && s[b] == '-')) error("expected integer");
    if (pos - b > 9) error("integer too large");
    return std::stoll(s.substr(b, pos - b));
  }
  std::string token(std::size_t len) {
    skip_ws();
    if (pos + len > s.size()) error("unexpected end of line");
    std::string r = s.substr(pos, len);
    pos += len;
    return r;
  }
};

}  // namespace detail

/// Parses the line-oriented VTG format.
inline RawTriangulation parse_native(const std::string& text) {
  RawTriangulation raw;
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }
  enum class Stage { Header, Count, Body } stage = Stage::Header;
  std::vector<bool> seen;
  bool have_taut = false;
  std::vector<std::pair<int, Veer>> veer_entries;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    detail::LineCursor cur{lines[li], static_cast<int>(li + 1)};
    if (cur.at_end() || lines[li][cur.pos] == '#') continue;
    const std::string kw = cur.word();
    if (stage == Stage::Header) {
      if (kw != "vtg") cur.error("expected header 'vtg 1'");
      if (cur.integer() != 1) cur.error("unsupported format version");
      if (!cur.at_end()) cur.error("trailing characters");
      stage = Stage::Count;
      continue;
    }
    if (stage == Stage::Count) {
      if (kw != "tetrahedra") cur.error("expected 'tetrahedra N'");
      long long n = cur.integer();
      if (n <= 0) cur.error("tetrahedron count must be positive");
      if (n > 100000) cur.error("tetrahedron count too large");
      if (!cur.at_end()) cur.error("trailing characters");
      raw.num_tetrahedra = static_cast<int>(n);
      raw.gluings.assign(n, {});
      seen.assign(n, false);
      stage = Stage::Body;
      continue;
    }
    const int n = raw.num_tetrahedra;
    if (kw == "glue") {
      long long t = cur.integer();
      if (t < 0 || t >= n) fail(ErrorKind::Parse, "IndexOutOfRange", "line " + std::to_string(li + 1) + ": tetrahedron index out of range");
      if (seen[t]) cur.error("duplicate glue line");
      seen[t] = true;
      for (int f = 0; f < 4; ++f) {
        std::string lbl = cur.token(2);
        if (lbl != "f" + std::to_string(f)) cur.error("expected 'f" + std::to_string(f) + "'");
        cur.expect(':');
        cur.expect('(');
        long long dest = cur.integer();
        cur.expect(',');
        std::string pw = cur.token(4);
        cur.expect(')');
        if (dest < 0 || dest >= n)
          fail(ErrorKind::Parse, "IndexOutOfRange", "line " + std::to_string(li + 1) + ": destination tetrahedron out of range");
        Perm4 p;
        if (!Perm4::parse(pw, p)) cur.error("invalid permutation word '" + pw + "'");
        raw.gluings[t][f] = Gluing{static_cast<int>(dest), p};
      }
      if (!cur.at_end()) cur.error("trailing characters");
    } else if (kw == "taut") {
      if (have_taut) cur.error("duplicate taut line");
      have_taut = true;
      for (int t = 0; t < n; ++t) {
        long long d = cur.integer();
        if (d < 0 || d > 2) cur.error("taut entry must be 0, 1 or 2");
        raw.taut.push_back(static_cast<int>(d));
      }
      if (!cur.at_end()) cur.error("trailing characters");
    } else if (kw == "veers") {
      while (!cur.at_end()) {
        std::string w = cur.word();
        auto colon = w.find(':');
        if (w.size() < 4 || w[0] != 'e' || colon == std::string::npos || colon + 2 != w.size())
          cur.error("expected veer entry like e0:L");
        int idx = 0;
        try {
          idx = std::stoi(w.substr(1, colon - 1));
        } catch (...) {
          cur.error("bad edge index in veer entry");
        }
        char v = w[colon + 1];
        if (v != 'L' && v != 'R') cur.error("veer must be L or R");
        veer_entries.emplace_back(idx, v == 'L' ? Veer::Left : Veer::Right);
      }
    } else if (kw == "name") {
      cur.skip_ws();
      raw.name = lines[li].substr(cur.pos);
    } else {
      cur.error("unknown keyword '" + kw + "'");
    }
  }
  if (stage != Stage::Body) fail(ErrorKind::Parse, "Syntax", "missing header or tetrahedron count");
  for (int t = 0; t < raw.num_tetrahedra; ++t)
    if (!seen[t]) fail(ErrorKind::Parse, "Syntax", "missing glue line for tetrahedron " + std::to_string(t));
  if (!have_taut) fail(ErrorKind::Parse, "Syntax", "missing taut line");
  if (!veer_entries.empty()) {
    if (static_cast<int>(veer_entries.size()) != raw.num_tetrahedra)
      fail(ErrorKind::Parse, "Syntax", "veers line must list one entry per edge class");
    raw.veers.assign(raw.num_tetrahedra, Veer::Left);
    std::vector<bool> got(raw.num_tetrahedra, false);
    for (auto [i, v] : veer_entries) {
      if (i < 0 || i >= raw.num_tetrahedra) fail(ErrorKind::Parse, "IndexOutOfRange", "veer edge index out of range");
      if (got[i]) fail(ErrorKind::Parse, "Syntax", "duplicate veer entry");
      got[i] = true;
      raw.veers[i] = v;
    }
  }
  check_raw(raw);
  return raw;
}

inline std::string serialize_native(const RawTriangulation& raw) {
  std::ostringstream os;
  os << "vtg 1\n";
  if (!raw.name.empty()) os << "# " << raw.name << "\n";
  os << "tetrahedra " << raw.num_tetrahedra << "\n";
  for (int t = 0; t < raw.num_tetrahedra; ++t) {
    os << "glue " << t;
    for (int f = 0; f < 4; ++f)
      os << " f" << f << ":(" << raw.gluings[t][f].tet << "," << raw.gluings[t][f].perm.word() << ")";
    os << "\n";
  }
  os << "taut";
  for (int d : raw.taut) os << " " << d;
  os << "\n";
  if (!raw.veers.empty()) {
    os << "veers";
    for (std::size_t i = 0; i < raw.veers.size(); ++i) os << " e" << i << ":" << veer_char(raw.veers[i]);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Isomorphism signatures (Regina's encoding for 3-manifold triangulations).

namespace isosig {

inline int char_value(char c) {
  if (c >= 'a' && c <= 'z') return c - 'a';
  if (c >= 'A' && c <= 'Z') return c - 'A' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '-') return 63;
  return -1;
}

inline char value_char(int v) {
  if (v < 26) return static_cast<char>('a' + v);
  if (v < 52) return static_cast<char>('A' + v - 26);
  if (v < 62) return static_cast<char>('0' + v - 52);
  return v == 62 ? '+' : '-';
}

[[noreturn]] inline void malformed(const std::string& msg) { fail(ErrorKind::Parse, "MalformedSignature", msg); }

/// Decodes a connected signature into a gluing table (taut data left empty).
inline std::vector<std::array<Gluing, 4>> decode(const std::string& sig) {
  if (sig.empty()) malformed("empty signature");
  std::size_t pos = 0;
  auto next = [&]() -> int {
    if (pos >= sig.size()) malformed("signature truncated");
    int v = char_value(sig[pos++]);
    if (v < 0) malformed(std::string("invalid character '") + sig[pos - 1] + "'");
    return v;
  };
  auto read_int = [&](int nchars) -> long long {
    long long r = 0;
    for (int i = 0; i < nchars; ++i) r |= static_cast<long long>(next()) << (6 * i);
    return r;
  };
  long long n = next();
  int nchars = 1;
  if (n == 63) {
    nchars = next();
    if (nchars < 1 || nchars > 4) malformed("bad size prefix");
    n = read_int(nchars);
  }
  if (n <= 0) malformed("signature describes an empty triangulation");
  if (n > 100000) malformed("signature too large");
  const long long nfacets = 4 * n;
  std::vector<int> actions;
  long long consumed = 0;
  while (consumed < nfacets) {
    int v = next();
    for (int k = 0; k < 3; ++k) {
      int a = (v >> (2 * k)) & 3;
      if (consumed >= nfacets) {
        if (a != 0) malformed("nonzero padding in facet actions");
        continue;
      }
      if (a == 3) malformed("invalid facet action");
      actions.push_back(a);
      consumed += (a == 0) ? 1 : 2;
    }
  }
  if (consumed != nfacets) malformed("facet actions overrun");
  int njoins = 0;
  for (int a : actions)
    if (a == 2) ++njoins;
  std::vector<long long> dest(njoins);
  for (int i = 0; i < njoins; ++i) dest[i] = read_int(nchars);
  std::vector<Perm4> perm(njoins);
  for (int i = 0; i < njoins; ++i) {
    int v = next();
    if (v >= 24) malformed("invalid gluing permutation code");
    perm[i] = Perm4::from_ordered_index(v);
  }
  if (pos != sig.size()) malformed("trailing characters in signature");

  std::vector<std::array<Gluing, 4>> g(n);
  std::size_t ai = 0;
  int ji = 0;
  long long next_unused = 1;
  for (long long t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      if (g[t][f].tet >= 0) continue;
      if (ai >= actions.size()) malformed("too few facet actions");
      int a = actions[ai++];
      if (a == 0) fail(ErrorKind::Parse, "NotIdealTriangulation", "signature has boundary faces");
      if (a == 1) {
        if (next_unused >= n) malformed("gluing to nonexistent tetrahedron");
        const int u = static_cast<int>(next_unused++);
        g[t][f] = Gluing{u, Perm4()};
        g[u][f] = Gluing{static_cast<int>(t), Perm4()};
      } else {
        long long d = dest[ji];
        Perm4 p = perm[ji];
        ++ji;
        if (d >= next_unused) malformed("join to unvisited tetrahedron");
        const int f2 = p[f];
        if (g[d][f2].tet >= 0 || (d == t && f2 == f)) malformed("join to an already glued face");
        g[t][f] = Gluing{static_cast<int>(d), p};
        g[d][f2] = Gluing{static_cast<int>(t), p.inverse()};
      }
    }
  }
  if (ai != actions.size() || ji != njoins) malformed("unused signature data");
  if (next_unused != n) malformed("signature is not connected");
  return g;
}

/// Labelling produced by one traversal: new index of each old tetrahedron and the vertex maps.
struct Labelling {
  std::vector<int> image;
  std::vector<Perm4> vmap;  // old vertex -> new vertex
};

inline std::string encode_from(const std::vector<std::array<Gluing, 4>>& g, int start, const Perm4& start_map,
                               Labelling* lab_out) {
  const int n = static_cast<int>(g.size());
  std::vector<int> image(n, -1), pre(n, -1);
  std::vector<Perm4> vmap(n);
  image[start] = 0;
  pre[0] = start;
  vmap[start] = start_map;
  int next_unused = 1;
  std::vector<int> actions;
  std::vector<int> join_dest;
  std::vector<Perm4> join_perm;
  for (int simg = 0; simg < n; ++simg) {
    const int src = pre[simg];
    for (int fimg = 0; fimg < 4; ++fimg) {
      const int fsrc = vmap[src].pre_image(fimg);
      const Gluing& gl = g[src][fsrc];
      const int dst = gl.tet;
      if (image[dst] >= 0) {
        const int other = vmap[dst][gl.perm[fsrc]];
        if (image[dst] < simg || (image[dst] == simg && other < fimg)) continue;
        actions.push_back(2);
        join_dest.push_back(image[dst]);
        join_perm.push_back(vmap[dst] * gl.perm * vmap[src].inverse());
      } else {
        image[dst] = next_unused;
        pre[next_unused] = dst;
        ++next_unused;
        vmap[dst] = vmap[src] * gl.perm.inverse();
        actions.push_back(1);
      }
    }
  }
  std::string out;
  int nchars = 0;
  for (int tmp = n; tmp > 0; tmp >>= 6) ++nchars;
  if (n < 63) {
    out.push_back(value_char(n));
  } else {
    out.push_back(value_char(63));
    out.push_back(value_char(nchars));
    for (int i = 0; i < nchars; ++i) out.push_back(value_char((n >> (6 * i)) & 63));
  }
  for (std::size_t i = 0; i < actions.size(); i += 3) {
    int v = 0;
    for (std::size_t k = 0; k < 3 && i + k < actions.size(); ++k) v |= actions[i + k] << (2 * k);
    out.push_back(value_char(v));
  }
  for (int d : join_dest)
    for (int i = 0; i < nchars; ++i) out.push_back(value_char((d >> (6 * i)) & 63));
  for (const Perm4& p : join_perm) out.push_back(value_char(p.ordered_index()));
  if (lab_out) {
    lab_out->image = image;
    lab_out->vmap = vmap;
  }
  return out;
}

inline std::vector<Perm4> all_perms() {
  std::vector<Perm4> ps;
  for (int i = 0; i < 24; ++i) ps.push_back(Perm4::from_ordered_index(i));
  return ps;
}

}  // namespace isosig

/// Decodes `<isoSig>_<digits>` as used by the veering census; digits d in {0,1,2} name the pi-pair.
inline RawTriangulation parse_taut_isosig(const std::string& text) {
  std::string sig = text;
  while (!sig.empty() && (sig.back() == '\n' || sig.back() == '\r' || sig.back() == ' ')) sig.pop_back();
  if (sig.empty()) fail(ErrorKind::Parse, "MalformedSignature", "empty signature");
  auto us = sig.find('_');
  if (us == std::string::npos) fail(ErrorKind::Parse, "MalformedSignature", "missing '_' and taut digits");
  const std::string iso = sig.substr(0, us);
  std::string digits = sig.substr(us + 1);
  // Census strings may carry further '_'-separated data; only the first block is taut data.
  if (auto us2 = digits.find('_'); us2 != std::string::npos) digits = digits.substr(0, us2);
  RawTriangulation raw;
  raw.gluings = isosig::decode(iso);
  raw.num_tetrahedra = static_cast<int>(raw.gluings.size());
  if (static_cast<int>(digits.size()) != raw.num_tetrahedra)
    fail(ErrorKind::Parse, "DigitCount",
         "expected " + std::to_string(raw.num_tetrahedra) + " taut digits, got " + std::to_string(digits.size()));
  for (char c : digits) {
    if (c < '0' || c > '2') fail(ErrorKind::Parse, "MalformedSignature", "taut digits must be 0, 1 or 2");
    raw.taut.push_back(c - '0');
  }
  raw.name = sig;
  check_raw(raw);
  return raw;
}

/// Relabels a triangulation: tetrahedron t becomes image[t], its vertex i becomes vmap[t][i].
inline RawTriangulation relabel(const RawTriangulation& raw, const std::vector<int>& image,
                                const std::vector<Perm4>& vmap) {
  const int n = raw.num_tetrahedra;
  RawTriangulation out;
  out.num_tetrahedra = n;
  out.gluings.assign(n, {});
  out.taut.assign(n, 0);
  out.name = raw.name;
  for (int t = 0; t < n; ++t) {
    const int nt = image[t];
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = raw.gluings[t][f];
      out.gluings[nt][vmap[t][f]] = Gluing{image[g.tet], vmap[g.tet] * g.perm * vmap[t].inverse()};
    }
    const int e = raw.taut[t];
    out.taut[nt] = pair_of_edge(edge_index(vmap[t][kEdgeVerts[e][0]], vmap[t][kEdgeVerts[e][1]]));
  }
  return out;
}

/// Canonical taut signature: minimal isoSig over all labellings, then the
/// lexicographically least digit string among the labellings realising it.
inline std::string encode_taut_isosig(const RawTriangulation& raw) {
  check_raw(raw);
  const int n = raw.num_tetrahedra;
  std::string best;
  std::string best_digits;
  const auto perms = isosig::all_perms();
  for (int s = 0; s < n; ++s) {
    for (const Perm4& p : perms) {
      isosig::Labelling lab;
      std::string sig = isosig::encode_from(raw.gluings, s, p, &lab);
      if (!best.empty() && sig > best) continue;
      std::string digits(n, '0');
      for (int t = 0; t < n; ++t) {
        const int e = raw.taut[t];
        const Perm4& vm = lab.vmap[t];
        digits[lab.image[t]] =
            static_cast<char>('0' + pair_of_edge(edge_index(vm[kEdgeVerts[e][0]], vm[kEdgeVerts[e][1]])));
      }
      if (best.empty() || sig < best || digits < best_digits) {
        best = sig;
        best_digits = digits;
      }
    }
  }
  return best + "_" + best_digits;
}

/// Isomorphism signature of the underlying triangulation only.
inline std::string encode_isosig(const RawTriangulation& raw) {
  std::string s = encode_taut_isosig(raw);
  return s.substr(0, s.find('_'));
}

}  // namespace veerflow
