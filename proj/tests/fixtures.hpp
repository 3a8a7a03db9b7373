#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "veerflow/ingest.hpp"
#include "veerflow/kernel.hpp"
#include "veerflow/veering_poly.hpp"

namespace fixtures {

struct Fixture {
  std::string sig;
  std::string h1;      // census homology, e.g. "Z/5+Z"
  std::string census;  // census flag column
  bool layered = false;

  int betti() const {
    int b = 0;
    std::istringstream in(h1);
    for (std::string part; std::getline(in, part, '+');)
      if (part == "Z") ++b;
    return b;
  }
  std::vector<long> torsion() const {
    std::vector<long> t;
    std::istringstream in(h1);
    for (std::string part; std::getline(in, part, '+');)
      if (part.rfind("Z/", 0) == 0) t.push_back(std::stol(part.substr(2)));
    return t;
  }
};

inline std::string data_path(const std::string& name) { return std::string(VEERFLOW_TEST_DATA) + "/" + name; }

inline std::vector<std::vector<std::string>> read_table(const std::string& name) {
  std::ifstream in(data_path(name));
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> row;
    for (std::string t; ls >> t;) row.push_back(t);
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

inline const std::vector<Fixture>& all() {
  static const std::vector<Fixture> fx = [] {
    std::vector<Fixture> out;
    for (const auto& r : read_table("fixtures.txt")) out.push_back({r[0], r[1], r[2], r[3] == "1"});
    return out;
  }();
  return fx;
}

/// Frozen normalized veering polynomials (computed by the clique expansion).
inline const std::map<std::string, std::string>& polys() {
  static const std::map<std::string, std::string> m = [] {
    std::map<std::string, std::string> out;
    std::ifstream in(data_path("veering_polys.txt"));
    for (std::string line; std::getline(in, line);) {
      const auto tab = line.find('\t');
      if (tab != std::string::npos) out[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return out;
  }();
  return m;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const veerflow::Context& context(const std::string& sig) {
  static std::map<std::string, veerflow::Context> cache;
  auto it = cache.find(sig);
  if (it == cache.end())
    it = cache.emplace(sig, veerflow::make_context(veerflow::build_veering(veerflow::parse_taut_isosig(sig)))).first;
  return it->second;
}

}  // namespace fixtures
