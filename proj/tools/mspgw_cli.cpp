// Batch front end: compute, dump, verify, reproduce. All artifacts are exact
// (rationals as "num/den" strings); identical configurations produce
// byte-identical outputs.

#include "CLI11.hpp"
#include "json.hpp"

#include "mspgw/assembler.hpp"
#include "mspgw/serialize.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace mspgw;
using nlohmann::json;

namespace {

struct Common {
  int N = 15;
  int q_order = 12;
  int z_min = -8;
  int z_max = 8;
  int k_max = 5;
  std::string output;
  std::string oracle_path;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--N", c.N, "number of point fixed loci (N > 5)");
  cmd->add_option("--q-order", c.q_order, "q truncation order (inclusive)");
  cmd->add_option("--z-min", c.z_min, "lower z-window bound");
  cmd->add_option("--z-max", c.z_max, "upper z-window bound");
  cmd->add_option("--k-max", c.k_max, "R-matrix z-depth");
  cmd->add_option("--output", c.output, "artifact path (JSON); stdout if empty");
  cmd->add_option("--oracle", c.oracle_path, "vertex oracle table (JSON)");
}

void validate(const Common& c) {
  if (c.N <= 5) throw ConfigInvalid("config: N > 5 required");
  if (c.q_order < 0) throw ConfigInvalid("config: q-order must be >= 0");
  if (c.z_min > -1) throw ConfigInvalid("config: z-min must be <= -1");
  if (c.k_max >= c.N - 3) throw ConfigInvalid("config: k-max < N-3 required");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigInvalid("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json qs_json(const QSeries& s) { return json::parse(json_qseries(s)); }

json series_csv_rows(const QSeries& s) {
  json rows = json::array();
  for (int d = 0; d <= s.order(); ++d)
    rows.push_back({{"degree", d},
                    {"num", s.at(d).num().str()},
                    {"den", s.at(d).den().str()}});
  return rows;
}

VertexOracle load_oracle(const Common& c) {
  VertexOracle o(c.q_order);
  if (c.oracle_path.empty()) return o;
  json j = json::parse(read_file(c.oracle_path));
  for (const auto& e : j.at("entries")) {
    if (e.at("F") != "Q") continue;  // point-side values are built in
    VertexOracle::InsKey key;
    for (const auto& ins : e.at("insertions"))
      key.push_back({ins.at(0).get<int>(), ins.at(1).get<int>()});
    QSeries s = QSeries::zero(c.q_order);
    const auto& coeffs = e.at("coeffs");
    for (int d = 0; d <= c.q_order && d < static_cast<int>(coeffs.size()); ++d)
      s.set(d, Rational::parse(coeffs.at(static_cast<size_t>(d)).get<std::string>()));
    o.set_table_entry(e.at("g").get<int>(), std::move(key), std::move(s));
  }
  return o;
}

int emit(const Common& c, const std::string& mode, const json& params,
         json artifact) {
  json manifest;
  manifest["tool"] = "mspgw";
  manifest["version"] = "0.1.0";
  manifest["mode"] = mode;
  manifest["params"] = params;
  if (!c.oracle_path.empty())
    manifest["oracle_hash"] = fnv1a_hex(read_file(c.oracle_path));
  std::string body = artifact.dump(2);
  manifest["artifact_hash"] = fnv1a_hex(body);
  if (c.output.empty()) {
    std::cout << body << "\n";
    std::cerr << manifest.dump() << "\n";
  } else {
    write_file_atomic(c.output, body + "\n");
    write_file_atomic(c.output + ".manifest.json", manifest.dump(2) + "\n");
  }
  return 0;
}

json common_params(const Common& c) {
  return {{"N", c.N},     {"q_order", c.q_order}, {"z_min", c.z_min},
          {"z_max", c.z_max}, {"k_max", c.k_max}};
}

int run_ifunc(const Common& c, int order) {
  const QuinticIData& qi = quintic_I(order);
  json a;
  a["I0"] = qs_json(qi.I0);
  a["I1"] = qs_json(qi.I1);
  a["I2"] = qs_json(qi.I2);
  a["I3"] = qs_json(qi.I3);
  a["I11"] = qs_json(qi.I11);
  a["I22"] = qs_json(qi.I22);
  a["I0_csv"] = series_csv_rows(qi.I0);
  return emit(c, "ifunc", {{"order", order}}, a);
}

int run_smatrix(const Common& c, const std::string& which) {
  validate(c);
  json a;
  if (which == "quintic") {
    a["S_quintic"] = json::parse(json_zmatrix(quintic_S(c.q_order)));
  } else if (which == "nmsp") {
    NmspFrontier fr(c.N, c.q_order, c.z_min);
    fr.check_qde();
    a["S_star"] = json::parse(json_zmatrix(fr.S_star()));
    json am = json::array();
    const auto& m = fr.A_M();
    for (int i = 0; i < c.N + 4; ++i) {
      json row = json::array();
      for (int j = 0; j < c.N + 4; ++j) row.push_back(qs_json(m[static_cast<size_t>(i)][static_cast<size_t>(j)]));
      am.push_back(row);
    }
    a["A_M"] = am;
  } else {
    throw ConfigInvalid("smatrix: --which must be quintic or nmsp");
  }
  json p = common_params(c);
  p["which"] = which;
  return emit(c, "smatrix", p, a);
}

int run_rmatrix(const Common& c) {
  validate(c);
  RFactorization rf(c.N, c.q_order, c.k_max);
  rf.check_vanishing();
  rf.check_pt_degrees();
  json rows = json::array();
  for (int k = 0; k <= c.k_max; ++k) {
    for (int j = 0; j <= c.N + 3; ++j) {
      for (int b = 0; b < 4; ++b) {
        const QSeries& e = rf.rq(k, j, b);
        if (e.is_zero()) continue;
        rows.push_back({{"k", k}, {"j", j}, {"b", b}, {"series", qs_json(e)}});
      }
      if (!rf.rpt(k, j).is_zero())
        rows.push_back({{"k", k},
                        {"j", j},
                        {"b", "pt"},
                        {"poly_Y", json::parse(json_poly(rf.rpt(k, j), "Y"))}});
    }
  }
  json a;
  a["entries"] = rows;
  json d = json::array();
  for (int k = 0; k <= c.k_max; ++k) d.push_back(rf.delta_coeff(k).str());
  a["delta"] = d;
  return emit(c, "rmatrix", common_params(c), a);
}

int run_graphs(const Common& c, int g, int n, bool bipartite, int r) {
  json list = json::array();
  if (bipartite) {
    for (const auto& cb : enumerate_bipartite(g, n, r))
      list.push_back(json::parse(json_bipartite_graph(cb.graph, cb.aut)));
  } else {
    for (const auto& cg : enumerate_stable(g, n))
      list.push_back(json::parse(json_stable_graph(cg.graph, cg.aut)));
  }
  json a;
  a["count"] = list.size();
  a["graphs"] = list;
  json p = common_params(c);
  p["g"] = g;
  p["n"] = n;
  p["bipartite"] = bipartite;
  p["r"] = r;
  return emit(c, "graphs", p, a);
}

int run_verify(const Common& c, const std::string& suite) {
  validate(c);
  json checks = json::array();
  bool all_ok = true;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({{"check", name}, {"ok", ok}, {"detail", detail}});
    all_ok = all_ok && ok;
    std::cerr << (ok ? "[ok]   " : "[FAIL] ") << name
              << (detail.empty() ? "" : ": " + detail) << "\n";
  };
  auto guard = [&](const std::string& name, const std::function<void()>& f) {
    try {
      f();
      record(name, true, "");
    } catch (const std::exception& e) {
      record(name, false, e.what());
    }
  };
  if (suite == "r-properties" || suite == "all") {
    RFactorization rf(c.N, c.q_order, c.k_max);
    guard("vanishing-pattern", [&] { rf.check_vanishing(); });
    guard("pt-degree-bounds", [&] { rf.check_pt_degrees(); });
    guard("ring-membership", [&] { rf.check_ring_membership(); });
    guard("symplecticity", [&] { rf.check_symplectic(); });
    guard("first-column-delta", [&] { rf.check_first_column_delta(); });
    guard("tails-z2-divisibility", [&] { rf.tails(); });
  }
  if (suite == "qde" || suite == "all") {
    guard("nmsp-qde", [&] {
      NmspFrontier fr(c.N, c.q_order, c.z_min);
      fr.check_qde();
    });
    guard("quintic-qde-vs-closed-form", [&] {
      ZMatrix a = quintic_S(c.q_order);
      ZMatrix b = quintic_S_from_qde(c.q_order);
      if (!(a - b).is_zero()) throw BirkhoffMismatch("quintic S mismatch");
    });
  }
  if (suite == "birkhoff" || suite == "all") {
    guard("verify-birkhoff", [&] {
      NmspFrontier fr(c.N, c.q_order, c.z_min);
      RFactorization rf(c.N, c.q_order, c.k_max);
      rf.verify_birkhoff(fr);
    });
  }
  json a;
  a["suite"] = suite;
  a["checks"] = checks;
  a["ok"] = all_ok;
  json p = common_params(c);
  p["suite"] = suite;
  emit(c, "verify", p, a);
  return all_ok ? 0 : 1;
}

int parse_insertion(const std::string& s) {
  // "p3" or "3"
  if (!s.empty() && (s[0] == 'p' || s[0] == 'P')) return std::stoi(s.substr(1));
  return std::stoi(s);
}

int run_assemble(const Common& c, int g, const std::vector<std::string>& ins) {
  validate(c);
  RFactorization rf(c.N, c.q_order, c.k_max);
  NmspFrontier fr(c.N, c.q_order, c.z_min);
  GraphAssembler a(rf, load_oracle(c), &fr);
  std::vector<int> powers;
  for (const auto& s : ins) powers.push_back(parse_insertion(s));
  QSeries out = a.graph_sum_01_p(g, powers);
  PolyCheck pc = polynomiality_check(out, g, c.N, powers,
                                     std::vector<int>(powers.size(), 0));
  json art;
  art["series"] = qs_json(out);
  art["series_csv"] = series_csv_rows(out);
  art["polynomiality"] = {{"ok", pc.ok},
                          {"bound", pc.bound},
                          {"first_violation", pc.first_violation}};
  json p = common_params(c);
  p["g"] = g;
  p["insertions"] = powers;
  emit(c, "assemble", p, art);
  return pc.ok ? 0 : 1;
}

int run_solve(const Common& c, int g, const std::string& ins) {
  validate(c);
  if (g != 1) throw ConfigInvalid("solve: only genus 1 is supported");
  RFactorization rf(c.N, c.q_order, c.k_max);
  SolveResult sol = polynomiality_solve_genus1(rf, parse_insertion(ins));
  const QuinticIData& qi = quintic_I(c.q_order);
  QSeries rec = sol.u0 * qi.I11;
  RingFit fit = fit_in_ring(rec, RingFitCaps{1, -1});
  json art;
  art["u0"] = qs_json(sol.u0);
  art["kernel"] = qs_json(sol.kernel);
  art["free_constants"] = sol.free_constants;
  art["P_candidate"] = qs_json(rec);
  art["ring_fit"] = fit.str();
  json p = common_params(c);
  p["g"] = g;
  emit(c, "solve", p, art);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mspgw: exact-arithmetic engine for quintic GW / mixed-spin-P graph sums"};
  app.require_subcommand(1);
  Common c;

  int ifunc_order = 12;
  auto* ifunc = app.add_subcommand("ifunc", "quintic I-function tables");
  ifunc->add_option("--order", ifunc_order, "q truncation order");
  ifunc->add_option("--output", c.output, "artifact path");

  std::string which = "quintic";
  auto* smatrix = app.add_subcommand("smatrix", "S-matrices (quintic closed form or nmsp Birkhoff)");
  smatrix->add_option("--which", which, "quintic|nmsp");
  add_common(smatrix, c);

  auto* rmatrix = app.add_subcommand("rmatrix", "R-matrix block tables and Delta");
  add_common(rmatrix, c);

  int gg = 1, nn = 1, rr = 0;
  bool bip = false;
  auto* graphs = app.add_subcommand("graphs", "stable / bipartite graph enumeration");
  graphs->add_option("--g", gg, "genus");
  graphs->add_option("--n", nn, "legs");
  graphs->add_option("--r", rr, "total d_inf (bipartite)");
  graphs->add_flag("--bipartite", bip, "enumerate bipartite graphs");
  add_common(graphs, c);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run invariant suites; nonzero exit on failure");
  verify->add_option("--suite", suite, "r-properties|qde|birkhoff|all");
  add_common(verify, c);

  std::vector<std::string> insertions{"p1"};
  auto* assemble = app.add_subcommand("assemble", "stable-graph sum of the [0,1] theory");
  assemble->add_option("--g", gg, "genus");
  assemble->add_option("--insertion", insertions, "insertions, e.g. p1 p2");
  add_common(assemble, c);

  std::string sins = "p1";
  auto* solve = app.add_subcommand("solve", "genus-1 polynomiality solve mode");
  solve->add_option("--g", gg, "genus");
  solve->add_option("--insertion", sins, "insertion, e.g. p1");
  add_common(solve, c);

  CLI11_PARSE(app, argc, argv);
  try {
    if (ifunc->parsed()) return run_ifunc(c, ifunc_order);
    if (smatrix->parsed()) return run_smatrix(c, which);
    if (rmatrix->parsed()) return run_rmatrix(c);
    if (graphs->parsed()) return run_graphs(c, gg, nn, bip, rr);
    if (verify->parsed()) return run_verify(c, suite);
    if (assemble->parsed()) return run_assemble(c, gg, insertions);
    if (solve->parsed()) return run_solve(c, gg, sins);
  } catch (const Error& e) {
    nlohmann::json err{{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 1;
}
