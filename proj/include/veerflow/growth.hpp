#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "veerflow/cones.hpp"
#include "veerflow/error.hpp"
#include "veerflow/graphs.hpp"
#include "veerflow/homology.hpp"
#include "veerflow/polyring.hpp"
#include "veerflow/restriction.hpp"
#include "veerflow/veering_poly.hpp"

namespace veerflow {

// ---------------------------------------------------------------------------
// One-variable specializations

/// P^ξ(u) = Σ a_g u^{ξ(g)}, exponents are exact pairings.
struct Specialization {
  std::map<std::int64_t, BigInt> terms;

  void add(std::int64_t e, const BigInt& c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }
  friend bool operator==(const Specialization& a, const Specialization& b) { return a.terms == b.terms; }
  /// u -> u^n
  Specialization compose_power(std::int64_t n) const {
    Specialization s;
    for (const auto& [e, c] : terms) s.add(e * n, c);
    return s;
  }
  BigInt total() const {
    BigInt s = 0;
    for (const auto& [e, c] : terms) s += c;
    return s;
  }
  std::string to_string() const {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms) {
      BigInt mag = c < 0 ? BigInt(-c) : c;
      out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
      first = false;
      if (e == 0) {
        out += mag.str();
        continue;
      }
      if (mag != 1) out += mag.str() + "*";
      out += "u";
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }
};

inline Specialization specialize(const LaurentPoly& p, const std::vector<std::int64_t>& cls) {
  Specialization s;
  for (const auto& [g, c] : p.terms()) s.add(evaluate(cls, g), c);
  return s;
}

// ---------------------------------------------------------------------------
// Exact univariate integer polynomials (ascending coefficients) and Sturm sequences

namespace upoly {

using Poly = std::vector<BigInt>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

inline BigInt content(const Poly& p) {
  BigInt g = 0;
  for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
  return g;
}

inline void make_primitive(Poly& p) {
  BigInt g = content(p);
  if (g > 1)
    for (auto& c : p) c /= g;
}

/// Remainder of |lc(b)|^{da-db+1} * a modulo b: a positive multiple of the true remainder.
inline Poly positive_prem(Poly a, const Poly& b) {
  const int db = degree(b);
  const BigInt lc = b.back();
  const BigInt alc = lc < 0 ? BigInt(-lc) : lc;
  while (degree(a) >= db && !a.empty()) {
    const int shift = degree(a) - db;
    const BigInt la = a.back();
    // a <- |lc| a - sign(lc) la x^shift b
    for (auto& c : a) c *= alc;
    const BigInt f = lc < 0 ? BigInt(-la) : la;
    for (int i = 0; i <= db; ++i) a[i + shift] -= f * b[i];
    trim(a);
    make_primitive(a);
  }
  return a;
}

inline std::vector<Poly> sturm_sequence(const Poly& p) {
  std::vector<Poly> seq{p, derivative(p)};
  make_primitive(seq[1]);
  while (!seq.back().empty() && degree(seq.back()) > 0) {
    Poly r = positive_prem(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    make_primitive(r);
    seq.push_back(std::move(r));
  }
  return seq;
}

/// Sign of p(m / 2^k).
inline int sign_at_dyadic(const Poly& p, const BigInt& m, unsigned k) {
  if (p.empty()) return 0;
  BigInt acc = p.back();
  const int d = degree(p);
  for (int i = d - 1; i >= 0; --i) acc = acc * m + (p[i] << (k * static_cast<unsigned>(d - i)));
  return acc > 0 ? 1 : (acc < 0 ? -1 : 0);
}

inline int variations_at(const std::vector<Poly>& seq, const BigInt& m, unsigned k) {
  int v = 0, last = 0;
  for (const auto& q : seq) {
    const int s = sign_at_dyadic(q, m, k);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace upoly

struct RootResult {
  bool found = false;
  double root = 1.0;       // smallest root in (0, 1] of the specialization
  std::int64_t period = 1;  // gcd of the exponents used to reduce the degree
  int degree = 0;           // degree after reduction
};

/// Smallest root in (0, 1]: exact Sturm isolation on dyadic rationals, then bisection to `tol`.
inline RootResult smallest_positive_root(const Specialization& s, double tol = 1e-12) {
  RootResult res;
  if (s.terms.empty()) fail(ErrorKind::Precondition, "ZeroPolynomial", "the specialization vanishes identically");
  const std::int64_t emin = s.terms.begin()->first;
  std::int64_t g = 0;
  for (const auto& [e, c] : s.terms) g = std::gcd(g, e - emin);
  if (g == 0) return res;  // a monomial has no positive roots
  res.period = g;
  upoly::Poly p(static_cast<std::size_t>((s.terms.rbegin()->first - emin) / g + 1), 0);
  for (const auto& [e, c] : s.terms) p[(e - emin) / g] = c;
  res.degree = upoly::degree(p);
  const auto seq = upoly::sturm_sequence(p);
  // Distinct roots in (a, b] = V(a) - V(b); p(0) != 0 after the shift.
  unsigned k = 0;
  BigInt lo = 0, hi = 1;  // interval (lo/2^k, hi/2^k]
  auto count = [&](const BigInt& a, const BigInt& b, unsigned kk) {
    return upoly::variations_at(seq, a, kk) - upoly::variations_at(seq, b, kk);
  };
  if (count(lo, hi, k) == 0) return res;
  res.found = true;
  const unsigned kmax = static_cast<unsigned>(std::ceil(-std::log2(tol))) + 2;
  bool sign_mode = false;
  int slo = 0;
  while (k < kmax) {
    // Refine: (lo, hi] at scale k becomes (2lo, 2lo+1] or (2lo+1, 2hi] at scale k+1.
    lo <<= 1;
    hi <<= 1;
    ++k;
    const BigInt mid = lo + 1;
    if (!sign_mode) {
      if (count(lo, mid, k) >= 1)
        hi = mid;
      else
        lo = mid;
      if (hi - lo == 1 && count(lo, hi, k) == 1) {
        slo = upoly::sign_at_dyadic(p, lo, k);
        const int shi = upoly::sign_at_dyadic(p, hi, k);
        if (slo != 0 && shi != 0 && slo != shi) sign_mode = true;
        if (shi == 0) {
          // Exact dyadic root at hi, and it is the only one in (lo, hi].
          lo = hi - 1;
          for (; k < kmax; ++k) {
            lo <<= 1;
            hi <<= 1;
            lo = hi - 1;
          }
          break;
        }
      }
    } else {
      const int sm = upoly::sign_at_dyadic(p, mid, k);
      if (sm == 0) {
        hi = mid;
        lo = mid - 1;
      } else if (sm == slo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  // (lo, hi] has width 2^-k; report its midpoint.
  const long double scale = std::ldexp(1.0L, -static_cast<int>(k));
  const long double a = static_cast<long double>(lo) * scale, b = static_cast<long double>(hi) * scale;
  const long double r = (a + b) / 2;
  res.root = static_cast<double>(std::pow(r, 1.0L / static_cast<long double>(g)));
  return res;
}

// ---------------------------------------------------------------------------
// Positivity of a class on the cycles of a (sub)graph

/// Integer weight of every edge under a class: the pairing with the edge's label.
inline std::vector<std::int64_t> class_weights(const std::vector<Exponent>& labels, const std::vector<std::int64_t>& cls) {
  std::vector<std::int64_t> w;
  w.reserve(labels.size());
  for (const auto& l : labels) w.push_back(evaluate(cls, l));
  return w;
}

struct PositivityResult {
  bool positive = true;
  std::vector<int> witness;              // a directed cycle (edge ids) with nonpositive weight
  std::vector<std::int64_t> potential;   // per vertex; w + pot(tail) - pot(head) >= 0 when positive
};

/// Every directed cycle of the graph has positive weight? Bellman-Ford for negative cycles,
/// then a search for cycles among the edges that become zero after reweighting.
inline PositivityResult check_positive(const LabeledDigraph& g, const std::vector<std::int64_t>& w) {
  const int nv = g.num_vertices, ne = static_cast<int>(g.edges.size());
  PositivityResult res;
  std::vector<std::int64_t> dist(nv, 0);
  std::vector<int> pred(nv, -1);
  int last = -1;
  for (int it = 0; it <= nv; ++it) {
    last = -1;
    for (int i = 0; i < ne; ++i) {
      const auto& e = g.edges[i];
      if (dist[e.tail] + w[i] < dist[e.head]) {
        dist[e.head] = dist[e.tail] + w[i];
        pred[e.head] = i;
        last = e.head;
      }
    }
    if (last < 0) break;
  }
  if (last >= 0) {
    int x = last;
    for (int i = 0; i < nv; ++i) x = g.edges[pred[x]].tail;
    std::vector<int> rev;
    int y = x;
    do {
      rev.push_back(pred[y]);
      y = g.edges[pred[y]].tail;
    } while (y != x);
    res.positive = false;
    res.witness.assign(rev.rbegin(), rev.rend());
    return res;
  }
  // Potentials: w'(e) = w(e) + dist(tail) - dist(head) >= 0.
  res.potential = dist;
  std::vector<int> zero_ids;
  for (int i = 0; i < ne; ++i)
    if (w[i] + dist[g.edges[i].tail] - dist[g.edges[i].head] == 0) zero_ids.push_back(i);
  const LabeledDigraph z = g.edge_subgraph(zero_ids);
  const auto rec = recurrent_subgraph(z, [](int) { return true; });
  if (!rec.empty()) {
    // Walk inside one recurrent component until a vertex repeats.
    const auto& comp = rec.components.front();
    std::vector<int> out_of(nv, -1);
    for (int i : comp) out_of[z.edges[i].tail] = i;
    std::vector<int> seen(nv, -1), walk;
    int v = z.edges[comp.front()].tail;
    while (seen[v] < 0) {
      seen[v] = static_cast<int>(walk.size());
      walk.push_back(out_of[v]);
      v = z.edges[out_of[v]].head;
    }
    res.positive = false;
    for (std::size_t i = seen[v]; i < walk.size(); ++i) res.witness.push_back(zero_ids[walk[i]]);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Growth rates

struct GrowthResult {
  double rate = 1.0;                     // max over components
  std::vector<double> component_rates;   // per recurrent component of the graph
  Specialization specialization;         // of the whole (restricted) polynomial
  RootResult root;
};

/// Growth rate of the cycles of a Φ-subgraph counted by ξ. The subgraph is given by Φ edge ids.
inline GrowthResult growth_rate_on(const Context& c, const std::vector<int>& edge_ids, const std::vector<std::int64_t>& xi,
                                   double tol = 1e-12) {
  const LabeledDigraph sub = c.g.phi.edge_subgraph(edge_ids);
  const auto labels = select_labels(c.phi_labels, edge_ids);
  const auto pos = check_positive(sub, class_weights(labels, xi));
  if (!pos.positive) {
    std::string w;
    for (int i : pos.witness) w += (w.empty() ? "" : ",") + std::to_string(edge_ids[i]);
    fail(ErrorKind::Precondition, "NotPositive", "class is not positive on the Φ-cycle with edges [" + w + "]");
  }
  GrowthResult gr;
  const int b = c.betti();
  const LaurentPoly p = perron(sub, labels, b);
  gr.specialization = specialize(p, xi);
  gr.root = smallest_positive_root(gr.specialization, tol);
  gr.rate = gr.root.found ? 1.0 / gr.root.root : 1.0;
  const auto rec = recurrent_subgraph(sub, [](int) { return true; });
  for (const auto& comp : rec.components) {
    std::vector<int> ids;
    for (int i : comp) ids.push_back(edge_ids[i]);
    const LaurentPoly pc = perron(c.g.phi.edge_subgraph(ids), select_labels(c.phi_labels, ids), b);
    const RootResult rc = smallest_positive_root(specialize(pc, xi), tol);
    gr.component_rates.push_back(rc.found ? 1.0 / rc.root : 1.0);
  }
  return gr;
}

inline std::vector<int> all_edges(const LabeledDigraph& g) {
  std::vector<int> ids(g.edges.size());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

/// gr(ξ; Φ) or gr(ξ; Φ|η) when a carried η is supplied.
inline GrowthResult growth_rate(const Context& c, const std::optional<Cocycle>& eta, const std::vector<std::int64_t>& xi,
                                double tol = 1e-12) {
  if (eta) {
    check_cocycle(c.h, *eta);
    const auto rg = restricted_flow_graph(c.g.phi, edge_weights(c.g.phi, *eta));
    return growth_rate_on(c, rg.edges, xi, tol);
  }
  return growth_rate_on(c, all_edges(c.g.phi), xi, tol);
}

// ---------------------------------------------------------------------------
// Cycle-count oracle

/// N_L for L = 0..lmax: the sum, over closed edge sequences (e_1..e_k) of weight L, of w(e_1).
/// Grouping rotations shows this equals Σ over cycles of weight L of L/k, i.e. the coefficient of u^L
/// in -u P'(u)/P(u); it grows like (period) * gr^L. Weights must be positive on every cycle.
inline std::vector<long double> cycle_count_oracle(const LabeledDigraph& g, const std::vector<std::int64_t>& w, int lmax,
                                                   int bound = 4096) {
  if (lmax > bound) fail(ErrorKind::Precondition, "TooLarge", "weight bound " + std::to_string(lmax) + " exceeds " + std::to_string(bound));
  const auto pos = check_positive(g, w);
  if (!pos.positive) fail(ErrorKind::Precondition, "NotPositive", "weights are not positive on every cycle");
  const int nv = g.num_vertices, ne = static_cast<int>(g.edges.size());
  std::vector<std::int64_t> wp(ne);
  for (int i = 0; i < ne; ++i) wp[i] = w[i] + pos.potential[g.edges[i].tail] - pos.potential[g.edges[i].head];
  // Zero-weight edges form a DAG; order its vertices topologically.
  std::vector<int> indeg(nv, 0), order;
  std::vector<std::vector<int>> zero_out(nv), pos_out(nv);
  for (int i = 0; i < ne; ++i) {
    if (wp[i] == 0) {
      zero_out[g.edges[i].tail].push_back(i);
      indeg[g.edges[i].head]++;
    } else {
      pos_out[g.edges[i].tail].push_back(i);
    }
  }
  for (int v = 0; v < nv; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t k = 0; k < order.size(); ++k)
    for (int i : zero_out[order[k]])
      if (--indeg[g.edges[i].head] == 0) order.push_back(g.edges[i].head);
  VEERFLOW_ASSERT(static_cast<int>(order.size()) == nv, "CycleCount", "zero-weight cycle survived");
  std::vector<long double> N(lmax + 1, 0.0L);
  std::vector<std::vector<long double>> cnt(lmax + 1, std::vector<long double>(nv));
  for (int s = 0; s < nv; ++s) {
    for (auto& row : cnt) std::fill(row.begin(), row.end(), 0.0L);
    cnt[0][s] = 1;
    for (int l = 0; l <= lmax; ++l) {
      for (int v : order)
        for (int i : zero_out[v]) cnt[l][g.edges[i].head] += cnt[l][v];
      for (int v = 0; v < nv; ++v) {
        if (cnt[l][v] == 0) continue;
        for (int i : pos_out[v]) {
          const std::int64_t nl = l + wp[i];
          if (nl <= lmax) cnt[nl][g.edges[i].head] += cnt[l][v];
        }
      }
    }
    // Closed walks at s ending with an edge e into s: a walk s -> tail(e), then e.
    for (int i = 0; i < ne; ++i) {
      if (g.edges[i].head != s) continue;
      for (int l = 0; l + wp[i] <= lmax; ++l)
        if (wp[i] > 0) N[l + wp[i]] += static_cast<long double>(wp[i]) * cnt[l][g.edges[i].tail];
    }
  }
  return N;
}

/// gcd of the weights of all cycles in the strong component containing v (0 if acyclic).
inline std::int64_t cycle_period(const LabeledDigraph& g, const std::vector<std::int64_t>& w, const std::vector<int>& comp_edges) {
  std::vector<std::int64_t> pot(g.num_vertices, 0);
  std::vector<char> seen(g.num_vertices, 0);
  std::vector<std::vector<int>> adj(g.num_vertices);
  for (int i : comp_edges) {
    adj[g.edges[i].tail].push_back(i);
    adj[g.edges[i].head].push_back(i);
  }
  if (comp_edges.empty()) return 0;
  std::vector<int> stack{g.edges[comp_edges.front()].tail};
  seen[stack.back()] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int i : adj[v]) {
      const auto& e = g.edges[i];
      if (!seen[e.head]) {
        pot[e.head] = pot[e.tail] + w[i];
        seen[e.head] = 1;
        stack.push_back(e.head);
      } else if (!seen[e.tail]) {
        pot[e.tail] = pot[e.head] - w[i];
        seen[e.tail] = 1;
        stack.push_back(e.tail);
      }
    }
  }
  std::int64_t d = 0;
  for (int i : comp_edges) d = std::gcd(d, pot[g.edges[i].tail] + w[i] - pot[g.edges[i].head]);
  return d < 0 ? -d : d;
}

struct OracleEstimate {
  int length = 0;           // L' used
  long double count = 0;    // N_{L'}
  long double multiplicity = 1;
  double log_rate = 0;      // log(N_{L'} / multiplicity) / L'
};

/// Brute-force estimate of log gr from N_L near L = lmax. Only dominant components contribute their
/// period to the multiplicity: N_L ≈ Σ_{dominant i, d_i | L} d_i gr^L.
inline OracleEstimate oracle_log_rate(const Context& c, const std::vector<int>& edge_ids, const std::vector<std::int64_t>& xi,
                                      int lmax = 40) {
  const LabeledDigraph sub = c.g.phi.edge_subgraph(edge_ids);
  const auto w = class_weights(select_labels(c.phi_labels, edge_ids), xi);
  const auto N = cycle_count_oracle(sub, w, lmax);
  const GrowthResult gr = growth_rate_on(c, edge_ids, xi);
  const auto rec = recurrent_subgraph(sub, [](int) { return true; });
  std::vector<std::int64_t> periods;
  for (std::size_t k = 0; k < rec.components.size(); ++k)
    if (std::fabs(gr.component_rates[k] - gr.rate) <= 1e-9 * gr.rate) periods.push_back(cycle_period(sub, w, rec.components[k]));
  OracleEstimate est;
  for (int L = lmax; L >= 1; --L) {
    long double mult = 0;
    for (auto d : periods)
      if (d > 0 && L % d == 0) mult += static_cast<long double>(d);
    if (mult > 0 && N[L] > 0) {
      est.length = L;
      est.count = N[L];
      est.multiplicity = mult;
      est.log_rate = static_cast<double>(std::log(N[L] / mult) / L);
      return est;
    }
  }
  return est;
}

/// Perron eigenvalue of the 0/1 adjacency after subdividing every edge of weight k >= 1 into k unit edges.
inline double spectral_growth(const LabeledDigraph& g, const std::vector<std::int64_t>& w, double tol = 1e-12,
                              int max_iter = 2000000) {
  int nv = g.num_vertices;
  std::vector<std::pair<int, int>> arcs;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (w[i] < 1) fail(ErrorKind::Precondition, "NotPositive", "subdivision needs every edge weight >= 1");
    int prev = g.edges[i].tail;
    for (std::int64_t k = 1; k < w[i]; ++k) {
      arcs.emplace_back(prev, nv);
      prev = nv++;
    }
    arcs.emplace_back(prev, g.edges[i].head);
  }
  if (arcs.empty()) return 0.0;
  // Power iteration on I + A: its dominant eigenvalue is 1 + ρ(A) and it is aperiodic.
  std::vector<long double> x(nv, 1.0L), y(nv);
  long double lambda = 0;
  for (int it = 0; it < max_iter; ++it) {
    y = x;
    for (const auto& [a, b] : arcs) y[a] += x[b];
    long double norm = 0;
    for (auto v : y) norm = std::max(norm, v);
    for (auto& v : y) v /= norm;
    long double diff = 0;
    for (int i = 0; i < nv; ++i) diff = std::max(diff, std::fabs(y[i] - x[i]));
    x.swap(y);
    lambda = norm;
    if (diff < tol && it > 10) break;
  }
  return static_cast<double>(lambda - 1.0L);
}

// ---------------------------------------------------------------------------
// Scans and accumulation

struct ScanRow {
  std::vector<std::int64_t> xi;
  double rate = 1.0;
  double entropy = 0.0;  // log gr
};

struct ScanResult {
  std::vector<ScanRow> rows;
  bool convex = true;     // midpoint convexity at every interior sample
  double worst_excess = 0;
};

/// Samples p_t = (N - t) ξ_a + t ξ_b, t = 0..N. Each p_t is the midpoint of its neighbours.
inline ScanResult entropy_scan(const Context& c, const std::optional<Cocycle>& eta, const std::vector<std::int64_t>& xa,
                               const std::vector<std::int64_t>& xb, int samples) {
  ScanResult sr;
  for (int t = 0; t <= samples; ++t) {
    ScanRow row;
    for (std::size_t i = 0; i < xa.size(); ++i) row.xi.push_back((samples - t) * xa[i] + t * xb[i]);
    row.rate = growth_rate(c, eta, row.xi).rate;
    row.entropy = std::log(row.rate);
    sr.rows.push_back(row);
  }
  for (std::size_t t = 1; t + 1 < sr.rows.size(); ++t) {
    const double excess = sr.rows[t].entropy - 0.5 * (sr.rows[t - 1].entropy + sr.rows[t + 1].entropy);
    sr.worst_excess = std::max(sr.worst_excess, excess);
    if (excess > 1e-9) sr.convex = false;
  }
  return sr;
}

struct AccumulationResult {
  std::vector<double> sequence;  // gr(α + iη) for i = 0..i_max
  double limit = 1.0;            // gr(α; Φ|η)
  int settled_from = -1;         // least i0 with λ_i >= λ - 1e-12 for all i >= i0
  double final_gap = 0;          // |λ_{i_max} - λ|
};

inline AccumulationResult accumulation_experiment(const Context& c, const std::vector<std::int64_t>& alpha, const Cocycle& eta,
                                                  int i_max) {
  check_cocycle(c.h, eta);
  AccumulationResult ar;
  const auto ecls = cohomology_class(c.h, eta);
  const auto ids = all_edges(c.g.phi);
  for (int i = 0; i <= i_max; ++i) {
    std::vector<std::int64_t> xi(alpha.size());
    for (std::size_t k = 0; k < alpha.size(); ++k) xi[k] = alpha[k] + i * ecls[k];
    ar.sequence.push_back(growth_rate_on(c, ids, xi).rate);
  }
  ar.limit = growth_rate(c, eta, alpha).rate;
  for (int i = i_max; i >= 0; --i) {
    if (ar.sequence[i] < ar.limit - 1e-12) break;
    ar.settled_from = i;
  }
  ar.final_gap = std::fabs(ar.sequence[i_max] - ar.limit);
  return ar;
}

}  // namespace veerflow
