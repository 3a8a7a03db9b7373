#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "veerflow/error.hpp"
#include "veerflow/graphs.hpp"
#include "veerflow/homology.hpp"
#include "veerflow/veering_poly.hpp"

namespace veerflow {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Exact phase-1 simplex

struct Phase1Result {
  bool feasible = false;
  std::vector<Rational> x;  // a solution of A x = b, x >= 0, when feasible
  std::vector<Rational> y;  // otherwise y^T A <= 0 and y^T b > 0
};

/// Feasibility of A x = b, x >= 0 by the two-phase method's first phase, Bland's rule.
inline Phase1Result phase1(const std::vector<std::vector<Rational>>& A_in, const std::vector<Rational>& b_in) {
  const int m = static_cast<int>(A_in.size());
  const int nv = m ? static_cast<int>(A_in[0].size()) : 0;
  const int ncol = nv + m;
  std::vector<int> sign(m, 1);
  std::vector<std::vector<Rational>> T(m, std::vector<Rational>(ncol + 1, 0));
  for (int i = 0; i < m; ++i) {
    if (b_in[i] < 0) sign[i] = -1;
    for (int j = 0; j < nv; ++j) T[i][j] = sign[i] * A_in[i][j];
    T[i][nv + i] = 1;
    T[i][ncol] = sign[i] * b_in[i];
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = nv + i;
  auto cost = [&](int j) { return j >= nv ? Rational(1) : Rational(0); };
  std::vector<Rational> red(ncol);
  for (;;) {
    // Reduced costs r_j = c_j - sum_i c_B(i) T[i][j].
    int enter = -1;
    for (int j = 0; j < ncol; ++j) {
      Rational r = cost(j);
      for (int i = 0; i < m; ++i)
        if (basis[i] >= nv && T[i][j] != 0) r -= T[i][j];
      red[j] = r;
      if (enter < 0 && r < 0) enter = j;
    }
    if (enter < 0) break;
    int leave = -1;
    Rational best;
    for (int i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][ncol] / T[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    VEERFLOW_ASSERT(leave >= 0, "Simplex", "phase-1 objective unbounded");
    const Rational piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      const Rational f = T[i][enter];
      for (int j = 0; j <= ncol; ++j)
        if (T[leave][j] != 0) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  Phase1Result res;
  Rational obj = 0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= nv) obj += T[i][ncol];
  if (obj == 0) {
    res.feasible = true;
    res.x.assign(nv, 0);
    for (int i = 0; i < m; ++i)
      if (basis[i] < nv) res.x[basis[i]] = T[i][ncol];
  } else {
    // y = c_B^T B^{-1}; B^{-1} sits in the artificial columns.
    res.y.assign(m, 0);
    for (int i = 0; i < m; ++i) {
      Rational s = 0;
      for (int k = 0; k < m; ++k)
        if (basis[k] >= nv) s += T[k][nv + i];
      res.y[i] = sign[i] * s;
    }
  }
  return res;
}

inline BigInt lcm_of_denominators(const std::vector<Rational>& v) {
  BigInt l = 1;
  for (const auto& q : v) {
    BigInt d = boost::multiprecision::denominator(q);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  return l;
}

/// Scales a rational vector to a primitive integral vector with the same direction.
inline std::vector<BigInt> integral_direction(const std::vector<Rational>& v) {
  const BigInt l = lcm_of_denominators(v);
  std::vector<BigInt> out;
  BigInt g = 0;
  for (const auto& q : v) {
    Rational s = q * l;
    out.push_back(boost::multiprecision::numerator(s));
    g = boost::multiprecision::gcd(g, out.back());
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

// ---------------------------------------------------------------------------
// Cones

enum class GeneratorSource { GammaCycle, PhiCycle, FlowSupport };

inline const char* source_name(GeneratorSource s) {
  switch (s) {
    case GeneratorSource::GammaCycle: return "gamma_cycle";
    case GeneratorSource::PhiCycle: return "phi_cycle";
    default: return "flow_support";
  }
}

struct Generator {
  Exponent cls;
  std::vector<int> witness;              // edge ids of the witnessing (multi)cycle in Γ or Φ
  std::vector<std::int64_t> chain;       // its face chain
  GeneratorSource source = GeneratorSource::GammaCycle;
};

struct ConeModel {
  int betti = 0;
  std::vector<Generator> generators;
  /// Distinct generator classes, in order of first appearance.
  std::vector<Exponent> distinct_classes() const {
    std::vector<Exponent> out;
    std::set<Exponent> seen;
    for (const auto& g : generators)
      if (seen.insert(g.cls).second) out.push_back(g.cls);
    return out;
  }
};

enum class ConeMode { Auto, GammaCycles, PhiCycles, FlowSupport };

inline ConeModel cone_generators(const Context& c, ConeMode mode = ConeMode::Auto, std::size_t gamma_limit = 100000) {
  ConeModel cm;
  cm.betti = c.betti();
  auto from_cycles = [&](const LabeledDigraph& g, const std::vector<Exponent>& labels, GeneratorSource src,
                         std::size_t limit) {
    for (const auto& cyc : simple_cycles(g, limit))
      cm.generators.push_back({sum_labels(labels, cyc, cm.betti), cyc, chain_of_edges(g, cyc), src});
  };
  if (mode == ConeMode::Auto) {
    try {
      from_cycles(c.g.gamma, c.gamma_labels, GeneratorSource::GammaCycle, gamma_limit);
      return cm;
    } catch (const Error& e) {
      if (e.code() != "TooLarge") throw;
      cm.generators.clear();
      mode = ConeMode::FlowSupport;
    }
  }
  if (mode == ConeMode::GammaCycles) from_cycles(c.g.gamma, c.gamma_labels, GeneratorSource::GammaCycle, gamma_limit);
  if (mode == ConeMode::PhiCycles) from_cycles(c.g.phi, c.phi_labels, GeneratorSource::PhiCycle, 1000000);
  if (mode == ConeMode::FlowSupport) {
    const LaurentPoly p = veering_polynomial_raw(c);
    for (const auto& [cls, mc] : support_witnesses(c.g.phi, c.phi_labels, c.betti(), p))
      cm.generators.push_back({cls, mc.edges, chain_of_edges(c.g.phi, mc.edges), GeneratorSource::FlowSupport});
  }
  return cm;
}

enum class ConeVerdict { Interior, Boundary, Outside };

inline const char* verdict_name(ConeVerdict v) {
  return v == ConeVerdict::Interior ? "interior" : v == ConeVerdict::Boundary ? "boundary" : "outside";
}

struct DualConeResult {
  ConeVerdict verdict = ConeVerdict::Interior;
  std::vector<std::int64_t> pairings;  // per generator
  int witness = -1;                    // a negative generator (Outside) or a null one (Boundary)
};

/// Sign pattern of a cohomology class (in the dual basis of G) against the generators.
inline DualConeResult classify_class(const ConeModel& cm, const std::vector<std::int64_t>& cls) {
  DualConeResult r;
  for (std::size_t i = 0; i < cm.generators.size(); ++i) {
    const std::int64_t v = evaluate(cls, cm.generators[i].cls);
    r.pairings.push_back(v);
    if (v < 0 && r.verdict != ConeVerdict::Outside) {
      r.verdict = ConeVerdict::Outside;
      r.witness = static_cast<int>(i);
    } else if (v == 0 && r.verdict == ConeVerdict::Interior) {
      r.verdict = ConeVerdict::Boundary;
      r.witness = static_cast<int>(i);
    }
  }
  return r;
}

inline DualConeResult in_dual_cone(const ConeModel& cm, const HomologyModel& h, const Cocycle& w) {
  check_cocycle(h, w);
  DualConeResult r = classify_class(cm, cohomology_class(h, w));
  // Pairing on the witness chain must agree with the class pairing.
  for (std::size_t i = 0; i < cm.generators.size(); ++i)
    VEERFLOW_ASSERT(pair(w, cm.generators[i].chain) == r.pairings[i], "PairingMismatch",
                    "class pairing disagrees with the witness chain pairing");
  return r;
}

/// Generators annihilated by the cocycle.
inline std::vector<int> face_of(const ConeModel& cm, const HomologyModel& h, const Cocycle& w) {
  const DualConeResult r = in_dual_cone(cm, h, w);
  if (r.verdict == ConeVerdict::Outside)
    fail(ErrorKind::Precondition, "NotInCone", "class pairs negatively with generator " + std::to_string(r.witness));
  std::vector<int> out;
  for (std::size_t i = 0; i < r.pairings.size(); ++i)
    if (r.pairings[i] == 0) out.push_back(static_cast<int>(i));
  return out;
}

struct LayeredResult {
  bool layered = false;
  std::vector<std::int64_t> cls;      // certificate class: pairs >= 1 with every generator
  Cocycle cocycle;                    // a cocycle representing it
  std::vector<BigInt> obstruction;    // per distinct generator class: nonnegative, summing to zero, not all zero
  std::vector<Exponent> classes;      // the distinct generator classes used
};

inline LayeredResult is_layered(const ConeModel& cm, const HomologyModel& h) {
  LayeredResult res;
  res.classes = cm.distinct_classes();
  const int m = static_cast<int>(res.classes.size()), b = cm.betti;
  if (m == 0) {
    res.layered = true;
    res.cls.assign(b, 0);
    res.cocycle = cocycle_from_class(h, res.cls);
    return res;
  }
  // Gordan alternative: lambda >= 0, sum lambda_j g_j = 0, sum lambda_j = 1.
  std::vector<std::vector<Rational>> A(b + 1, std::vector<Rational>(m, 0));
  std::vector<Rational> rhs(b + 1, 0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < b; ++i) A[i][j] = res.classes[j][i];
    A[b][j] = 1;
  }
  rhs[b] = 1;
  const Phase1Result lp = phase1(A, rhs);
  if (lp.feasible) {
    res.layered = false;
    res.obstruction = integral_direction(lp.x);
    std::vector<BigInt> sum(b, 0);
    BigInt total = 0;
    for (int j = 0; j < m; ++j) {
      VEERFLOW_ASSERT(res.obstruction[j] >= 0, "Certificate", "negative obstruction coefficient");
      total += res.obstruction[j];
      for (int i = 0; i < b; ++i) sum[i] += res.obstruction[j] * res.classes[j][i];
    }
    for (const auto& s : sum) VEERFLOW_ASSERT(s == 0, "Certificate", "obstruction does not sum to zero");
    VEERFLOW_ASSERT(total > 0, "Certificate", "empty obstruction");
    return res;
  }
  // Farkas: y^T a_j <= 0 and y_b > 0, so c = -y[0:b] / y_b pairs >= 1 with every generator.
  const Rational y0 = lp.y[b];
  VEERFLOW_ASSERT(y0 > 0, "Certificate", "Farkas multiplier is not positive");
  std::vector<Rational> c(b);
  for (int i = 0; i < b; ++i) c[i] = -lp.y[i] / y0;
  const BigInt l = lcm_of_denominators(c);
  res.cls.assign(b, 0);
  for (int i = 0; i < b; ++i) {
    Rational s = c[i] * l;
    res.cls[i] = to_i64(boost::multiprecision::numerator(s), "layering certificate");
  }
  for (const auto& g : res.classes)
    VEERFLOW_ASSERT(evaluate(res.cls, g) >= 1, "Certificate", "layering certificate pairs < 1 with a generator");
  res.layered = true;
  res.cocycle = cocycle_from_class(h, res.cls);
  return res;
}

/// Whether `target` is a nonnegative rational combination of the generator classes.
inline bool in_primal_cone(const ConeModel& cm, const Exponent& target) {
  const auto cls = cm.distinct_classes();
  const int m = static_cast<int>(cls.size()), b = cm.betti;
  std::vector<std::vector<Rational>> A(b, std::vector<Rational>(m, 0));
  std::vector<Rational> rhs(b);
  for (int i = 0; i < b; ++i) {
    rhs[i] = target[i];
    for (int j = 0; j < m; ++j) A[i][j] = cls[j][i];
  }
  return phase1(A, rhs).feasible;
}

struct CarriedResult {
  bool found = false;
  Cocycle weights;             // nonnegative cocycle cohomologous to the input
  std::vector<int> obstruction;  // otherwise a Γ-cycle (faces) with negative pairing
};

/// Adds a coboundary so that every face weight becomes nonnegative, via difference constraints
/// h(below f) - h(above f) <= w(f). Infeasible exactly when some Γ-cycle pairs negatively.
inline CarriedResult carried_representative(const VeeringTriangulation& vt, const Cocycle& w) {
  const int n = vt.n, nf = vt.num_faces();
  // Bellman-Ford from a virtual source; arc above(f) -> below(f) of weight w(f).
  std::vector<std::int64_t> dist(n, 0);
  std::vector<int> pred(n, -1);
  int last = -1;
  for (int it = 0; it < n; ++it) {
    last = -1;
    for (int f = 0; f < nf; ++f) {
      const int u = vt.face_above[f], v = vt.face_below[f];
      if (dist[u] + w[f] < dist[v]) {
        dist[v] = dist[u] + w[f];
        pred[v] = f;
        last = v;
      }
    }
    if (last < 0) break;
  }
  CarriedResult r;
  if (last >= 0) {
    int x = last;
    for (int i = 0; i < n; ++i) x = vt.face_above[pred[x]];
    std::vector<int> rev;
    int y = x;
    do {
      const int f = pred[y];
      rev.push_back(f);
      y = vt.face_above[f];
    } while (y != x);
    // Following predecessors from below(f) to above(f) walks Γ forwards.
    r.obstruction = std::move(rev);
    return r;
  }
  r.found = true;
  r.weights.assign(nf, 0);
  for (int f = 0; f < nf; ++f) {
    r.weights[f] = w[f] + dist[vt.face_above[f]] - dist[vt.face_below[f]];
    VEERFLOW_ASSERT(r.weights[f] >= 0, "Carried", "negative weight after potential shift");
  }
  return r;
}

}  // namespace veerflow
