#include "doctest.h"

#include "mspgw/graphs.hpp"
#include "mspgw/psi.hpp"

using namespace mspgw;

namespace {
// independent brute-force count of decorated (1,1) stable graphs with
// explicit hours at small N: shapes x fixed-locus choices
long decorated_count_11(int N) {
  auto shapes = enumerate_stable_shapes(1, 1);
  long total = 0;
  for (const auto& cg : shapes) {
    (void)cg;
    total += 1 + N;  // single vertex: Q or one of N hours
  }
  return total;
}
}  // namespace

TEST_CASE("stable graph enumeration (1,1)") {
  auto shapes = enumerate_stable_shapes(1, 1);
  CHECK(shapes.size() == 2);  // genus-1 vertex; genus-0 vertex with a loop
  auto dec = enumerate_stable(1, 1);
  CHECK(dec.size() == 4);  // {g1, g0+loop} x {Q, PT}
  // expanding PT over N hours reproduces 2(N+1) decorated graphs
  for (int N : {7, 15}) CHECK(decorated_count_11(N) == 2 * (N + 1));
  // automorphisms: single vertex trivial, loop contributes a flag swap
  for (const auto& cg : dec) {
    if (cg.graph.edges.empty())
      CHECK(cg.aut == 1);
    else
      CHECK(cg.aut == 2);
  }
}

TEST_CASE("stable graph enumeration (0,3) and identities") {
  auto g03 = enumerate_stable_shapes(0, 3);
  CHECK(g03.size() == 1);
  CHECK(g03[0].aut == 1);
  CHECK(g03[0].graph.vertices.size() == 1);

  for (auto [g, n] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 0}, {2, 1}}) {
    for (const auto& cg : enumerate_stable(g, n)) {
      // sum_v (g_v - 1) + |E| = g - 1
      int s = static_cast<int>(cg.graph.edges.size());
      for (const auto& v : cg.graph.vertices) s += v.genus - 1;
      CHECK(s == g - 1);
      CHECK(cg.graph.connected());
      CHECK(cg.graph.stable());
      CHECK(cg.graph.total_genus() == g);
    }
  }
}

TEST_CASE("leg relabeling leaves counts invariant") {
  // (1,2): legs are labeled; counts must not depend on which label sits where
  auto a = enumerate_stable(1, 2);
  // swap roles by construction symmetry: count graphs with leg1 on a genus-1
  // vertex equals count with leg2 on a genus-1 vertex
  int c1 = 0, c2 = 0;
  for (const auto& cg : a) {
    const auto& g = cg.graph;
    if (g.vertices[static_cast<size_t>(g.legs[0])].genus == 1) ++c1;
    if (g.vertices[static_cast<size_t>(g.legs[1])].genus == 1) ++c2;
  }
  CHECK(c1 == c2);
}

TEST_CASE("bipartite enumeration counts") {
  auto x11 = enumerate_bipartite(1, 1, 0);
  CHECK(x11.size() == 2);
  auto x20 = enumerate_bipartite(2, 0, 0);
  CHECK(x20.size() == 5);
  for (const auto& cb : x20) {
    // sum_v(g_v - 1) + |E| = g - 1 on every enumerated graph
    int s = static_cast<int>(cb.graph.edges.size());
    for (const auto& w : cb.graph.whites) s += w.genus - 1;
    for (const auto& b : cb.graph.blacks) s += b.genus - 1;
    CHECK(s == 2 - 1);
    // enforced black bound
    for (size_t v = 0; v < cb.graph.blacks.size(); ++v) {
      int sa = 0;
      for (const auto& e : cb.graph.edges)
        if (e.black == static_cast<int>(v)) sa += e.a - 1;
      CHECK(5 * cb.graph.blacks[v].d_inf >= 2 - 2 * cb.graph.blacks[v].genus + sa);
    }
  }
  // the five (2,0,0) graphs: lone white g2; black g1 - a1 - white g1;
  // two blacks g1 each tied to a white g0; black g1 double edge to white g0;
  // lone black g2.
  int lone_white = 0, lone_black = 0, two_blacks = 0, double_edge = 0, simple = 0;
  for (const auto& cb : x20) {
    const auto& g = cb.graph;
    if (g.blacks.empty()) {
      ++lone_white;
      CHECK(cb.aut == 1);
    } else if (g.whites.empty()) {
      ++lone_black;
      CHECK(cb.aut == 1);
    } else if (g.blacks.size() == 2) {
      ++two_blacks;
      CHECK(cb.aut == 2);
    } else if (g.edges.size() == 2) {
      ++double_edge;
      CHECK(cb.aut == 2);
    } else {
      ++simple;
      CHECK(cb.aut == 1);
    }
  }
  CHECK(lone_white == 1);
  CHECK(lone_black == 1);
  CHECK(two_blacks == 1);
  CHECK(double_edge == 1);
  CHECK(simple == 1);
}

TEST_CASE("stabilization") {
  // a stable graph is its own stabilization
  StableGraph s;
  s.vertices = {{2, Locus::Q}};
  s.legs = {0};
  Stabilized st = stabilize(s);
  CHECK(st.graph.vertices.size() == 1);
  CHECK(st.graph.total_genus() == 2);
  // idempotence
  Stabilized st2 = stabilize(st.graph);
  CHECK(st2.graph.vertices.size() == 1);

  // a genus-0 tail on a g=2 vertex disappears
  StableGraph t;
  t.vertices = {{2, Locus::Q}, {0, Locus::Q}};
  t.edges = {{0, 1}};
  Stabilized stt = stabilize(t);
  CHECK(stt.graph.vertices.size() == 1);
  CHECK(stt.graph.vertices[0].genus == 2);
  CHECK(stt.graph.edges.empty());

  // a rational chain between two stable vertices contracts to one edge
  StableGraph c;
  c.vertices = {{1, Locus::Q}, {0, Locus::Q}, {0, Locus::Q}, {1, Locus::Q}};
  c.edges = {{0, 1}, {1, 2}, {2, 3}};
  c.legs = {0, 3};
  Stabilized stc = stabilize(c);
  CHECK(stc.graph.vertices.size() == 2);
  CHECK(stc.graph.edges.size() == 1);
  CHECK(stc.graph.total_genus() == 2);

  // a rational chain closing onto one vertex becomes a loop (genus kept)
  StableGraph l;
  l.vertices = {{1, Locus::Q}, {0, Locus::Q}};
  l.edges = {{0, 1}, {1, 0}};
  l.legs = {0};
  Stabilized stl = stabilize(l);
  CHECK(stl.graph.vertices.size() == 1);
  CHECK(stl.graph.edges.size() == 1);
  CHECK(stl.graph.h1() == 1);
  CHECK(stl.graph.total_genus() == 2);

  // an end: leg at the far side of a rational chain lands on the carrier
  StableGraph e;
  e.vertices = {{1, Locus::Q}, {0, Locus::Q}};
  e.edges = {{0, 1}};
  e.legs = {1};
  Stabilized ste = stabilize(e);
  CHECK(ste.graph.vertices.size() == 1);
  CHECK(ste.leg_carrier[0] == 0);

  CHECK_THROWS_AS(stabilize(StableGraph{{{0, Locus::Q}}, {}, {0, 0}}), Unstabilizable);
}

TEST_CASE("psi intersection numbers") {
  CHECK(psi_integral(0, {0, 0, 0}) == Rational(1));
  CHECK(psi_integral(1, {1}) == Rational(1, 24));
  CHECK(psi_integral(2, {4}) == Rational(1, 1152));
  // one-point values 1/(24^g g!)
  CHECK(psi_integral(3, {7}) == Rational(1, 82944));
  // classic two-point genus-2 value
  CHECK(psi_integral(2, {2, 3}) == Rational(29, 5760));
  // genus 0 multinomials: <tau_{d1}...tau_{dn}>_0 = (n-3)!/prod d_i!
  CHECK(psi_integral(0, {1, 0, 0, 0}) == Rational(1));
  CHECK(psi_integral(0, {2, 0, 0, 0, 0}) == Rational(1));
  CHECK(psi_integral(0, {1, 1, 0, 0, 0}) == Rational(2));

  // string equation on random small cases
  CHECK(psi_integral(1, {0, 2}) == psi_integral(1, {1}));
  CHECK(psi_integral(2, {0, 5}) == psi_integral(2, {4}));
  // dilaton equation <tau_1 X> = (2g-2+n) <X>
  CHECK(psi_integral(1, {1, 1}) == Rational(2 * 1 - 2 + 1) * psi_integral(1, {1}));
  CHECK(psi_integral(2, {1, 4}) == Rational(2 * 2 - 2 + 1) * psi_integral(2, {4}));
  CHECK(psi_integral(2, {1, 2, 3}) == Rational(2 * 2 - 2 + 2) * psi_integral(2, {2, 3}));

  CHECK_THROWS_AS(psi_integral(1, {2}), DimensionMismatch);
  CHECK_THROWS_AS(psi_integral(4, {10}), GenusUnsupported);
}
