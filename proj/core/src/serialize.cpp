#include "mspgw/serialize.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>

namespace mspgw {

using nlohmann::json;

std::string json_rational(const Rational& r) { return r.str(); }

namespace {
json qseries_json(const QSeries& s) {
  json j;
  j["order"] = s.order();
  json coeffs = json::array();
  for (int d = 0; d <= s.order(); ++d) coeffs.push_back(s.at(d).str());
  j["coeffs"] = coeffs;
  return j;
}
}  // namespace

std::string json_qseries(const QSeries& s) { return qseries_json(s).dump(); }

std::string json_poly(const Poly& p, const std::string& var) {
  json j;
  j["var"] = var;
  json coeffs = json::array();
  for (int i = 0; i <= p.degree(); ++i) coeffs.push_back(p.at(i).str());
  j["coeffs"] = coeffs;
  return j.dump();
}

std::string json_zmatrix(const ZMatrix& m) {
  json j;
  j["dim"] = m.dim();
  j["z_min"] = m.zmin();
  j["z_max"] = m.zmax();
  j["exact_below"] = m.exact_below();
  j["exact_above"] = m.exact_above();
  json levels = json::array();
  for (int e = m.zmin(); e <= m.zmax(); ++e) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
      json row = json::array();
      for (int k = 0; k < m.dim(); ++k) row.push_back(qseries_json(m.at(e, i, k)));
      rows.push_back(row);
    }
    levels.push_back(rows);
  }
  j["levels"] = levels;
  return j.dump();
}

std::string json_stable_graph(const StableGraph& g, long aut) {
  json j;
  json verts = json::array();
  for (const auto& v : g.vertices)
    verts.push_back({{"genus", v.genus}, {"locus", v.locus == Locus::Q ? "Q" : "pt"}});
  j["vertices"] = verts;
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  j["edges"] = edges;
  j["legs"] = g.legs;
  j["aut"] = aut;
  return j.dump();
}

std::string json_bipartite_graph(const BipartiteGraph& g, long aut) {
  json j;
  json whites = json::array();
  for (const auto& w : g.whites) whites.push_back({{"genus", w.genus}});
  json blacks = json::array();
  for (const auto& b : g.blacks)
    blacks.push_back({{"genus", b.genus}, {"d_inf", b.d_inf}});
  j["white"] = whites;
  j["black"] = blacks;
  json edges = json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"white", e.white}, {"black", e.black}, {"a", e.a}});
  j["edges"] = edges;
  j["legs"] = g.legs;
  j["aut"] = aut;
  return j.dump();
}

std::string fnv1a_hex(const std::string& bytes) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return std::string(buf);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("write_file_atomic: cannot open " + tmp);
    f << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("write_file_atomic: rename failed for " + path);
}

}  // namespace mspgw
