#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "veerflow/cones.hpp"
#include "veerflow/dynamic_planes.hpp"
#include "veerflow/growth.hpp"
#include "veerflow/ingest.hpp"
#include "veerflow/kernel.hpp"
#include "veerflow/restriction.hpp"
#include "veerflow/veering_poly.hpp"

#ifndef VEERFLOW_VERSION
#define VEERFLOW_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace veerflow;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Usage, "NoSuchFile", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A triangulation file holds either the native format or a single taut isoSig. A bare isoSig
/// may also be given in place of a path.
RawTriangulation load_raw(const std::string& arg) {
  std::string text;
  if (fs::exists(arg)) {
    text = read_file(arg);
  } else if (arg.find('_') != std::string::npos && arg.find('/') == std::string::npos) {
    text = arg;
  } else {
    fail(ErrorKind::Usage, "NoSuchFile", "cannot open '" + arg + "'");
  }
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  const bool native_ext = fs::path(arg).extension() == ".vtg";
  if (native_ext || text.compare(i, 3, "vtg") == 0) return parse_native(text);
  return parse_taut_isosig(text.substr(i));
}

json big(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

json poly_json(const LaurentPoly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"coeff", big(c)}, {"exponent", e}});
  return {{"text", p.to_string()}, {"terms", terms}};
}

json spec_json(const Specialization& s) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms) terms.push_back({{"coeff", big(c)}, {"exponent", e}});
  return {{"text", s.to_string()}, {"terms", terms}};
}

json header(const std::string& command) { return {{"veerflow", VEERFLOW_VERSION}, {"command", command}}; }

/// Cocycle arguments: an inline list "a,b,..." of class coordinates, or a file holding a JSON object
/// face-id -> integer (absent faces are 0). A JSON array, or an object {"class": [...]}, is read as a
/// class in the dual basis of H1/torsion and represented by a cocycle.
Cocycle load_cocycle(const std::string& path, const Context& c) {
  json j;
  static const std::regex inline_class(R"(\s*-?\d+(\s*,\s*-?\d+)*\s*)");
  try {
    if (!fs::exists(path) && std::regex_match(path, inline_class))
      j = json::parse("[" + path + "]");
    else
      j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, "MalformedJson", path + ": " + e.what());
  }
  auto as_class = [&](const json& arr) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != c.betti())
      fail(ErrorKind::Precondition, "DimensionMismatch",
           path + ": class needs " + std::to_string(c.betti()) + " integer entries");
    std::vector<std::int64_t> cls;
    for (const auto& v : arr) {
      if (!v.is_number_integer()) fail(ErrorKind::Parse, "MalformedCocycle", path + ": class entries must be integers");
      cls.push_back(v.get<std::int64_t>());
    }
    return cocycle_from_class(c.h, cls);
  };
  if (j.is_array()) return as_class(j);
  if (!j.is_object()) fail(ErrorKind::Parse, "MalformedCocycle", path + ": expected a JSON object or array");
  if (j.contains("class")) return as_class(j["class"]);
  Cocycle w(c.vt.num_faces(), 0);
  for (const auto& [k, v] : j.items()) {
    std::size_t used = 0;
    int f = -1;
    try {
      f = std::stoi(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != k.size()) fail(ErrorKind::Parse, "MalformedCocycle", path + ": key '" + k + "' is not a face id");
    if (f < 0 || f >= c.vt.num_faces())
      fail(ErrorKind::Parse, "MalformedCocycle", path + ": face id " + k + " out of range");
    if (!v.is_number_integer()) fail(ErrorKind::Parse, "MalformedCocycle", path + ": weight of face " + k + " is not an integer");
    w[f] = v.get<std::int64_t>();
  }
  check_cocycle(c.h, w);
  return w;
}

/// Replaces a cocycle by a cohomologous nonnegative one.
Cocycle carried(const Context& c, const Cocycle& w) {
  bool nonneg = true;
  for (auto x : w) nonneg = nonneg && x >= 0;
  if (nonneg) return w;
  const CarriedResult cr = carried_representative(c.vt, w);
  if (!cr.found) {
    std::string cyc;
    for (int f : cr.obstruction) cyc += (cyc.empty() ? "" : ",") + std::to_string(f);
    fail(ErrorKind::Precondition, "NotCarried", "class pairs negatively with the Γ-cycle [" + cyc + "]");
  }
  return cr.weights;
}

std::vector<std::int64_t> load_class(const std::string& path, const Context& c) {
  return cohomology_class(c.h, load_cocycle(path, c));
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    std::size_t a = tok.find_first_not_of(" \t"), b = tok.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    tok = tok.substr(a, b - a + 1);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) fail(ErrorKind::Usage, "BadList", "'" + tok + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

json edge_json(const LabeledDigraph::Edge& e, const Exponent& label, int id) {
  json j = {{"id", id}, {"tail", e.tail}, {"head", e.head}};
  if (!e.path.empty()) j["faces"] = e.path;
  if (e.tet >= 0) {
    j["tet"] = e.tet;
    j["slot"] = e.slot;
  }
  json chain = json::object();
  for (std::size_t f = 0; f < e.chain.size(); ++f)
    if (e.chain[f] != 0) chain[std::to_string(f)] = e.chain[f];
  j["chain"] = chain;
  j["class"] = label;
  return j;
}

json graph_json(const LabeledDigraph& g, const std::vector<Exponent>& labels) {
  json edges = json::array();
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) edges.push_back(edge_json(g.edges[i], labels[i], i));
  return {{"vertices", g.num_vertices}, {"edges", edges}};
}

// ---------------------------------------------------------------------------
// Subcommands. Each writes one JSON document (or CSV) to `out`.

void cmd_info(const std::string& file, std::ostream& out) {
  const auto vt = build_veering(load_raw(file));
  const auto h = build_homology(vt);
  std::map<int, int> hist;
  json fans = json::array();
  for (const auto& st : vt.stars) {
    hist[st.sides[0].fan_length()]++;
    hist[st.sides[1].fan_length()]++;
    fans.push_back({st.sides[0].fan_length(), st.sides[1].fan_length()});
  }
  json hj = json::object();
  for (const auto& [len, cnt] : hist) hj[std::to_string(len)] = cnt;
  std::string veers;
  for (Veer v : vt.veer) veers.push_back(veer_char(v));
  json tors = json::array();
  for (const auto& t : h.torsion) tors.push_back(big(t));
  json j = header("info");
  j["isosig"] = encode_taut_isosig(vt.raw);
  j["tetrahedra"] = vt.n;
  j["edge_classes"] = vt.n;
  j["faces"] = vt.num_faces();
  j["delta_tau"] = delta_tau(vt);
  j["fan_length_histogram"] = hj;
  j["fan_lengths"] = fans;
  j["veers"] = veers;
  j["betti"] = h.betti;
  j["torsion"] = tors;
  out << j.dump(2) << "\n";
}

void cmd_validate(const std::string& file, bool emit_native, std::ostream& out) {
  const auto raw = load_raw(file);
  const auto rep = validate_raw(raw);
  json checks = json::array();
  for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
  json j = header("validate");
  j["valid"] = rep.valid;
  j["checks"] = checks;
  if (rep.valid) {
    const auto vt = build_veering(raw);
    j["delta_tau"] = rep.delta;
    j["isosig"] = encode_taut_isosig(raw);
    if (emit_native) j["native"] = serialize_native(with_veers(vt));
  }
  out << j.dump(2) << "\n";
}

void cmd_graphs(const std::string& file, const std::string& emit, std::ostream& out) {
  const Context c = make_context(load_raw(file));
  json j = header("graphs");
  j["emit"] = emit;
  if (emit == "gamma") {
    j["gamma"] = graph_json(c.g.gamma, c.gamma_labels);
  } else if (emit == "phi") {
    j["phi"] = graph_json(c.g.phi, c.phi_labels);
  } else if (emit == "turns") {
    json turns = json::array();
    const int nf = c.vt.num_faces();
    for (int f = 0; f < nf; ++f)
      for (int k = 0; k < 2; ++k)
        turns.push_back({{"in", f},
                         {"out", c.g.turns.top_faces[c.g.turns.above_of(f)][k]},
                         {"vertex", c.g.turns.above_of(f)},
                         {"kind", turn_name(c.g.turns.kind[f][k])},
                         {"shared_edge", c.g.turns.shared[f][k]}});
    j["turns"] = turns;
  } else {
    const auto sc = special_cycles(c.vt, c.g.turns);
    auto list = [&](const std::vector<SpecialCycle>& v) {
      json a = json::array();
      for (const auto& s : v)
        a.push_back({{"faces", s.faces}, {"ab_turns", s.ab_turns}, {"class", detail::gamma_class(c, s.faces)}});
      return a;
    };
    j["branch_cycles"] = list(sc.branch);
    j["ab_cycles"] = list(sc.ab);
  }
  out << j.dump(2) << "\n";
}

void cmd_poly(const std::string& file, bool raw_rep, std::ostream& out) {
  const Context c = make_context(load_raw(file));
  const LaurentPoly p = raw_rep ? veering_polynomial_raw(c) : veering_polynomial(c);
  json j = header("poly");
  j["betti"] = c.betti();
  j["normalized"] = !raw_rep;
  const json pj = poly_json(p);
  j["text"] = pj["text"];
  j["terms"] = pj["terms"];
  out << j.dump(2) << "\n";
}

ConeMode cone_mode(const std::string& s) {
  if (s == "gamma") return ConeMode::GammaCycles;
  if (s == "phi") return ConeMode::PhiCycles;
  if (s == "flow") return ConeMode::FlowSupport;
  return ConeMode::Auto;
}

void cmd_cone(const std::string& file, const std::string& test, const std::string& mode, std::ostream& out) {
  const Context c = make_context(load_raw(file));
  const ConeModel cm = cone_generators(c, cone_mode(mode));
  const LayeredResult lr = is_layered(cm, c.h);
  json j = header("cone");
  j["betti"] = c.betti();
  json gens = json::array();
  for (const auto& g : cm.generators)
    gens.push_back({{"class", g.cls}, {"source", source_name(g.source)}, {"witness", g.witness}});
  j["generators"] = gens;
  j["layered"] = lr.layered;
  if (lr.layered) {
    j["certificate"] = {{"kind", "positive_class"}, {"class", lr.cls}};
  } else {
    json ob = json::array();
    for (std::size_t i = 0; i < lr.classes.size(); ++i)
      if (lr.obstruction[i] != 0) ob.push_back({{"class", lr.classes[i]}, {"coefficient", big(lr.obstruction[i])}});
    j["certificate"] = {{"kind", "null_combination"}, {"terms", ob}};
  }
  if (!test.empty()) {
    const Cocycle w = load_cocycle(test, c);
    const DualConeResult r = in_dual_cone(cm, c.h, w);
    json t = {{"class", cohomology_class(c.h, w)}, {"verdict", verdict_name(r.verdict)}};
    if (r.witness >= 0) t["witness_generator"] = r.witness;
    t["pairings"] = r.pairings;
    const CarriedResult cr = carried_representative(c.vt, w);
    t["carried"] = cr.found;
    if (cr.found) {
      t["carried_weights"] = cr.weights;
    } else {
      t["negative_gamma_cycle"] = cr.obstruction;
    }
    j["test"] = t;
  }
  out << j.dump(2) << "\n";
}

void cmd_restrict(const std::string& file, const std::string& cls, std::ostream& out) {
  const Context c = make_context(load_raw(file));
  const Cocycle eta = carried(c, load_cocycle(cls, c));
  const RestrictedPolys r = restricted_polynomials(c, eta);
  json j = header("restrict");
  j["class"] = cohomology_class(c.h, eta);
  j["weights"] = eta;
  j["components"] = r.graph.components;
  j["P_restricted"] = poly_json(r.restricted);
  j["V_deleted"] = poly_json(r.deleted);
  json pc = json::array();
  for (const auto& p : r.per_component) pc.push_back(poly_json(p));
  j["per_component"] = pc;
  j["equal"] = r.equal;
  j["product_ok"] = r.product_ok;
  out << j.dump(2) << "\n";
}

std::optional<Cocycle> load_cut(const std::string& path, const Context& c) {
  if (path.empty()) return std::nullopt;
  return carried(c, load_cocycle(path, c));
}

void cmd_growth(const std::string& file, const std::string& cls, const std::string& cut, std::ostream& out) {
  const Context c = make_context(load_raw(file));
  const auto xi = load_class(cls, c);
  const auto eta = load_cut(cut, c);
  const GrowthResult g = growth_rate(c, eta, xi);
  json j = header("growth");
  j["class"] = xi;
  if (eta) j["cut"] = cohomology_class(c.h, *eta);
  j["growth_rate"] = g.rate;
  j["entropy"] = std::log(g.rate);
  j["component_rates"] = g.component_rates;
  j["specialization"] = spec_json(g.specialization);
  j["root"] = {{"found", g.root.found}, {"value", g.root.root}, {"period", g.root.period}};
  out << j.dump(2) << "\n";
}

void cmd_scan(const std::string& file, const std::string& from, const std::string& to, int samples,
              const std::string& cut, bool csv, std::ostream& out) {
  const Context c = make_context(load_raw(file));
  const auto xa = load_class(from, c), xb = load_class(to, c);
  const auto eta = load_cut(cut, c);
  const ScanResult sr = entropy_scan(c, eta, xa, xb, samples);
  if (csv) {
    out << "t";
    for (int i = 0; i < c.betti(); ++i) out << ",xi" << i;
    out << ",growth_rate,entropy\n";
    char buf[64];
    for (std::size_t t = 0; t < sr.rows.size(); ++t) {
      out << t;
      for (auto x : sr.rows[t].xi) out << "," << x;
      std::snprintf(buf, sizeof buf, ",%.12g,%.12g\n", sr.rows[t].rate, sr.rows[t].entropy);
      out << buf;
    }
    return;
  }
  json rows = json::array();
  for (const auto& r : sr.rows) rows.push_back({{"class", r.xi}, {"growth_rate", r.rate}, {"entropy", r.entropy}});
  json j = header("scan");
  j["rows"] = rows;
  j["midpoint_convex"] = sr.convex;
  j["worst_excess"] = sr.worst_excess;
  out << j.dump(2) << "\n";
}

void cmd_accumulate(const std::string& file, const std::string& alpha, const std::string& cut, int imax,
                    std::ostream& out) {
  const Context c = make_context(load_raw(file));
  const auto a = load_class(alpha, c);
  const Cocycle eta = carried(c, load_cocycle(cut, c));
  const AccumulationResult ar = accumulation_experiment(c, a, eta, imax);
  json j = header("accumulate");
  j["alpha"] = a;
  j["eta"] = cohomology_class(c.h, eta);
  j["sequence"] = ar.sequence;
  j["limit"] = ar.limit;
  j["settled_from"] = ar.settled_from;
  j["final_gap"] = ar.final_gap;
  out << j.dump(2) << "\n";
}

json patch_json(PlanePatch& p, const VeeringTriangulation& vt) {
  auto& cx = p.view.cx;
  json sectors = json::array();
  for (int S : p.view.sectors) {
    json sides = json::array();
    for (int k = 0; k < 2; ++k) {
      json vs = json::array(), es = json::array();
      const int len = p.view.side_len(S, k);
      for (int i = 0; i <= len; ++i) vs.push_back(cx.get(S, PlaneComplex::vertex_key(k, i))->id);
      for (int i = 0; i < len; ++i) es.push_back(cx.get(S, PlaneComplex::edge_key(k, i))->id);
      sides.push_back({{"vertices", vs}, {"edges", es}});
    }
    sectors.push_back({{"id", S}, {"edge_class", cx.tag(S)}, {"level", cx.level(S)}, {"sides", sides}});
  }
  json verts = json::array();
  for (int v : cx.roots(PlaneComplex::Kind::Vertex))
    verts.push_back({{"id", v}, {"tet", cx.tag(v)}, {"veer", std::string(1, veer_char(vt.tet_veer(cx.tag(v))))}});
  json edges = json::array();
  for (int e : cx.roots(PlaneComplex::Kind::Edge))
    edges.push_back({{"id", e},
                     {"face", cx.tag(e)},
                     {"tail", cx.get(e, PlaneComplex::kTail)->id},
                     {"head", cx.get(e, PlaneComplex::kHead)->id}});
  return {{"seed", p.seed},       {"depth", p.depth},   {"seed_sector", p.seed_sector},
          {"top_vertex", p.top_vertex}, {"sectors", sectors}, {"vertices", verts},
          {"edges", edges}};
}

void cmd_plane(const std::string& file, int seed, int depth, const std::string& emit, std::ostream& out) {
  const Context c = make_context(load_raw(file));
  PlanePatch p = descending_patch(c, seed, depth);
  const PatchReport rep = check_patch(p, c.g.turns);
  const auto ch = chains(p);
  json j = header("plane");
  j["seed"] = seed;
  j["depth"] = depth;
  j["delta_tau"] = delta_tau(c.vt);
  j["sectors"] = rep.sectors;
  j["vertices"] = rep.vertices;
  j["edges"] = rep.edges;
  j["interior_vertices"] = rep.interior_vertices;
  j["euler"] = rep.euler;
  json checks = json::array();
  for (const auto& k : rep.checks)
    checks.push_back({{"name", k.name}, {"ok", k.ok}, {"checked", k.checked}, {"witness", k.witness}});
  j["checks"] = checks;
  j["all_ok"] = rep.all_ok();
  int longest = 0;
  std::map<int, int> hist;
  for (const auto& x : ch) {
    longest = std::max(longest, x.length());
    if (x.complete) hist[x.length()]++;
  }
  json hj = json::object();
  for (const auto& [l, n] : hist) hj[std::to_string(l)] = n;
  j["chains"] = {{"count", ch.size()}, {"longest", longest}, {"complete_length_histogram", hj}};
  if (!emit.empty()) {
    std::ofstream f(emit, std::ios::binary);
    if (!f) fail(ErrorKind::Usage, "CannotWrite", "cannot write '" + emit + "'");
    f << patch_json(p, c.vt).dump(1) << "\n";
    j["patch_file"] = fs::path(emit).filename().string();
  }
  out << j.dump(2) << "\n";
}

void cmd_resolve(const std::string& file, const std::string& cycle, int depth, std::ostream& out) {
  const Context c = make_context(load_raw(file));
  const GammaCycle g = parse_int_list(cycle);
  if (!is_gamma_cycle(c.vt, g)) fail(ErrorKind::Precondition, "NotACycle", "face sequence is not a directed Γ-cycle");
  const Resolution r = resolve_dual_cycle(c, g, depth);
  const StripWidth sw = strip_width(c, g, depth);
  json j = header("resolve");
  j["cycle"] = g;
  j["depth"] = depth;
  j["result"] = resolution_name(r.kind);
  j["branch_cycle"] = r.branch_cycle;
  j["gamma_class"] = r.gamma_class;
  if (r.kind == ResolutionKind::FlowCycle) j["phi_cycle"] = r.phi_cycle;
  if (r.kind == ResolutionKind::OddABCycle) j["ab_cycle"] = r.ab_cycle;
  if (r.kind != ResolutionKind::DepthExceeded) {
    j["result_class"] = r.result_class;
    j["class_match"] = r.class_match;
  }
  if (!r.note.empty()) j["note"] = r.note;
  json w = {{"exceeded", sw.exceeded}};
  if (!sw.exceeded) {
    w["width"] = sw.width;
    w["strips"] = sw.strips;
    w["windings"] = sw.windings;
    w["delta_tau"] = delta_tau(c.vt);
  }
  if (sw.orientation_known) w["quotient"] = sw.orientable ? "annulus" : "mobius";
  w["ab_parity"] = sw.ab_parity;
  w["parity_consistent"] = sw.parity_consistent;
  j["strip_width"] = w;
  out << j.dump(2) << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Manifest lines: `<file> <command> [args...]`; blank lines and lines starting with '#' are skipped.
/// Relative paths are taken relative to the manifest. Line k writes <outdir>/line_<k>.json.
void cmd_batch(const std::string& manifest, const std::string& outdir, std::ostream& out) {
  const std::string text = read_file(manifest);
  const fs::path base = fs::path(manifest).parent_path();
  fs::create_directories(outdir);
  std::istringstream in(text);
  std::string line;
  int lineno = 0, ok = 0, failed = 0;
  json results = json::array();
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() < 2) fail(ErrorKind::Usage, "BadManifest", manifest + ":" + std::to_string(lineno) + ": expected '<file> <command> ...'");
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (i == 1 || tok[i].empty() || tok[i][0] == '-') continue;
      const fs::path p = tok[i];
      if (p.is_relative() && fs::exists(base / p)) tok[i] = (base / p).string();
    }
    std::vector<std::string> sub = {tok[1], tok[0]};
    sub.insert(sub.end(), tok.begin() + 2, tok.end());
    if (sub[0] == "batch") fail(ErrorKind::Usage, "BadManifest", "nested batch is not supported");
    std::ostringstream o, e;
    const int code = run(sub, o, e);
    const std::string name = "line_" + std::to_string(lineno) + ".json";
    std::ofstream f(fs::path(outdir) / name, std::ios::binary);
    if (code == 0) {
      f << o.str();
      ++ok;
    } else {
      json ej = header(sub[0]);
      ej["exit_code"] = code;
      ej["error"] = e.str();
      f << ej.dump(2) << "\n";
      ++failed;
    }
    results.push_back({{"line", lineno}, {"file", name}, {"exit_code", code}});
  }
  json j = header("batch");
  j["ok"] = ok;
  j["failed"] = failed;
  j["results"] = results;
  out << j.dump(2) << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"veerflow: veering triangulations, flow graphs and their polynomials", "veerflow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", VEERFLOW_VERSION);

  std::string file, emit = "gamma", cls, cut, test, mode = "auto", from, to, cycle, outdir = "batch_out";
  int samples = 10, imax = 60, seed = 0, depth = 8;
  bool raw_rep = false, csv = false, native = false;

  auto* info = app.add_subcommand("info", "sizes, delta_tau and the fan-length histogram");
  info->add_option("file", file, "native .vtg file or taut isoSig")->required();
  auto* validate = app.add_subcommand("validate", "re-derive every veering invariant");
  validate->add_option("file", file)->required();
  validate->add_flag("--native", native, "include the native serialization with veers");
  auto* graphs = app.add_subcommand("graphs", "dual graph, flow graph, turns or special cycles");
  graphs->add_option("file", file)->required();
  graphs->add_option("--emit", emit)->check(CLI::IsMember({"gamma", "phi", "turns", "cycles"}));
  auto* poly = app.add_subcommand("poly", "veering polynomial");
  poly->add_option("file", file)->required();
  poly->add_flag("--raw", raw_rep, "constant-term-1 representative instead of the normalized one");
  auto* cone = app.add_subcommand("cone", "cone of homology directions, layeredness, dual-cone test");
  cone->add_option("file", file)->required();
  cone->add_option("--test", test, "cocycle.json");
  cone->add_option("--mode", mode)->check(CLI::IsMember({"auto", "gamma", "phi", "flow"}));
  auto* restrict_ = app.add_subcommand("restrict", "restricted flow graph and its polynomial");
  restrict_->add_option("file", file)->required();
  restrict_->add_option("--class", cls, "cocycle.json of the cutting class")->required();
  auto* growth = app.add_subcommand("growth", "growth rate of a positive class");
  growth->add_option("file", file)->required();
  growth->add_option("--class", cls)->required();
  growth->add_option("--cut", cut);
  auto* scan = app.add_subcommand("scan", "entropy along a segment of classes");
  scan->add_option("file", file)->required();
  scan->add_option("--from", from)->required();
  scan->add_option("--to", to)->required();
  scan->add_option("--samples", samples)->check(CLI::Range(1, 10000));
  scan->add_option("--cut", cut);
  scan->add_flag("--csv", csv);
  auto* acc = app.add_subcommand("accumulate", "growth rates of alpha + i eta");
  acc->add_option("file", file)->required();
  acc->add_option("--alpha", cls)->required();
  acc->add_option("--cut", cut)->required();
  acc->add_option("--imax", imax)->check(CLI::Range(0, 100000));
  auto* plane = app.add_subcommand("plane", "descending patch of a dynamic plane");
  plane->add_option("file", file)->required();
  plane->add_option("--seed", seed, "edge class of the seed sector")->required();
  plane->add_option("--depth", depth)->check(CLI::Range(1, kDefaultPatchDepth));
  plane->add_option("--emit", emit, "write the patch complex to this JSON file");
  auto* resolve = app.add_subcommand("resolve", "resolve a Γ-cycle to a Φ-cycle or an odd AB cycle");
  resolve->add_option("file", file)->required();
  resolve->add_option("--cycle", cycle, "comma-separated face ids")->required();
  resolve->add_option("--depth", depth)->check(CLI::Range(1, kDefaultPatchDepth));
  auto* batch = app.add_subcommand("batch", "run a manifest of commands");
  batch->add_option("manifest", file)->required();
  batch->add_option("--out", outdir, "directory for the per-line results");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << VEERFLOW_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return static_cast<int>(ErrorKind::Usage);
  }

  try {
    if (*info) cmd_info(file, out);
    else if (*validate) cmd_validate(file, native, out);
    else if (*graphs) cmd_graphs(file, emit, out);
    else if (*poly) cmd_poly(file, raw_rep, out);
    else if (*cone) cmd_cone(file, test, mode, out);
    else if (*restrict_) cmd_restrict(file, cls, out);
    else if (*growth) cmd_growth(file, cls, cut, out);
    else if (*scan) cmd_scan(file, from, to, samples, cut, csv, out);
    else if (*acc) cmd_accumulate(file, cls, cut, imax, out);
    else if (*plane) cmd_plane(file, seed, depth, plane->count("--emit") ? emit : std::string(), out);
    else if (*resolve) cmd_resolve(file, cycle, depth, out);
    else if (*batch) cmd_batch(file, outdir, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Internal);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}
