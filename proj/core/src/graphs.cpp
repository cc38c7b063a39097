#include "mspgw/graphs.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mspgw {

namespace {

long factorial_long(int n) {
  long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// connectivity of a multigraph given as adjacency existence
bool connected_impl(int nv, const std::vector<std::pair<int, int>>& edges) {
  if (nv == 0) return false;
  std::vector<int> comp(static_cast<size_t>(nv));
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (comp[static_cast<size_t>(x)] != x) {
      comp[static_cast<size_t>(x)] = comp[static_cast<size_t>(comp[static_cast<size_t>(x)])];
      x = comp[static_cast<size_t>(x)];
    }
    return x;
  };
  for (const auto& [a, b] : edges) {
    int ra = find(a), rb = find(b);
    if (ra != rb) comp[static_cast<size_t>(ra)] = rb;
  }
  int root = find(0);
  for (int v = 1; v < nv; ++v)
    if (find(v) != root) return false;
  return true;
}

}  // namespace

int StableGraph::num_flags(int v) const {
  int c = 0;
  for (const auto& [a, b] : edges) {
    if (a == v) ++c;
    if (b == v) ++c;
  }
  for (int l : legs)
    if (l == v) ++c;
  return c;
}

int StableGraph::h1() const {
  return static_cast<int>(edges.size()) - static_cast<int>(vertices.size()) + 1;
}

int StableGraph::total_genus() const {
  int g = h1();
  for (const auto& v : vertices) g += v.genus;
  return g;
}

bool StableGraph::connected() const {
  return connected_impl(static_cast<int>(vertices.size()), edges);
}

bool StableGraph::stable() const {
  for (size_t v = 0; v < vertices.size(); ++v)
    if (2 * vertices[v].genus - 2 + num_flags(static_cast<int>(v)) <= 0) return false;
  return true;
}

std::string StableGraph::str() const {
  std::string s = "V[";
  for (size_t v = 0; v < vertices.size(); ++v) {
    if (v) s += ",";
    s += "g" + std::to_string(vertices[v].genus) +
         (vertices[v].locus == Locus::Q ? "Q" : "P");
  }
  s += "] E[";
  for (size_t e = 0; e < edges.size(); ++e) {
    if (e) s += ",";
    s += std::to_string(edges[e].first) + "-" + std::to_string(edges[e].second);
  }
  s += "] L[";
  for (size_t l = 0; l < legs.size(); ++l) {
    if (l) s += ",";
    s += std::to_string(legs[l]);
  }
  return s + "]";
}

namespace {

// canonical key of a stable graph under a vertex permutation
using Key = std::string;

Key key_of(const StableGraph& g) {
  std::vector<std::pair<int, int>> es = g.edges;
  for (auto& [a, b] : es)
    if (a > b) std::swap(a, b);
  std::sort(es.begin(), es.end());
  std::string s;
  for (const auto& v : g.vertices)
    s += std::to_string(v.genus) + (v.locus == Locus::Q ? "q" : "p") + ";";
  s += "|";
  for (const auto& [a, b] : es) s += std::to_string(a) + "-" + std::to_string(b) + ";";
  s += "|";
  for (int l : g.legs) s += std::to_string(l) + ";";
  return s;
}

StableGraph permuted(const StableGraph& g, const std::vector<int>& perm) {
  StableGraph r = g;
  for (size_t v = 0; v < g.vertices.size(); ++v)
    r.vertices[static_cast<size_t>(perm[v])] = g.vertices[v];
  for (auto& [a, b] : r.edges) {
    a = perm[static_cast<size_t>(a)];
    b = perm[static_cast<size_t>(b)];
  }
  for (auto& l : r.legs) l = perm[static_cast<size_t>(l)];
  return r;
}

// automorphism order: vertex permutations preserving the structure times
// parallel-edge permutations and loop flips.
long aut_order(const StableGraph& g) {
  int nv = static_cast<int>(g.vertices.size());
  std::vector<int> perm(static_cast<size_t>(nv));
  std::iota(perm.begin(), perm.end(), 0);
  Key base = key_of(g);
  long total = 0;
  do {
    StableGraph pg = permuted(g, perm);
    if (key_of(pg) != base) continue;
    // count multiplicities per unordered pair/loop in the permuted graph
    std::map<std::pair<int, int>, int> mult;
    for (auto [a, b] : g.edges) {
      if (a > b) std::swap(a, b);
      mult[{a, b}]++;
    }
    long flags = 1;
    for (const auto& [pair, m] : mult) {
      flags *= factorial_long(m);
      if (pair.first == pair.second)
        for (int i = 0; i < m; ++i) flags *= 2;  // loop flips
    }
    total += flags;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

std::vector<CountedGraph> enumerate_stable_impl(int g, int n, bool decorate) {
  if (2 * g - 2 + n <= 0)
    throw GenusUnsupported("enumerate_stable: unstable (g,n)");
  if (g > 3) throw GenusUnsupported("enumerate_stable: genus must be <= 3");
  std::vector<CountedGraph> out;
  std::set<Key> seen;
  int vmax = 2 * g - 2 + n;
  for (int nv = 1; nv <= vmax; ++nv) {
    // unordered pairs including loops
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < nv; ++i)
      for (int j = i; j < nv; ++j) slots.push_back({i, j});
    int emax = g + nv - 1;
    // multiplicities per slot summing to <= emax
    std::vector<int> mult(slots.size());
    std::function<void(size_t, int)> rec_edges = [&](size_t idx, int used) {
      if (idx == slots.size()) {
        int ne = used;
        int h1 = ne - nv + 1;
        if (h1 < 0) return;
        int gsum = g - h1;
        if (gsum < 0) return;
        std::vector<std::pair<int, int>> edges;
        for (size_t s = 0; s < slots.size(); ++s)
          for (int m = 0; m < mult[s]; ++m) edges.push_back(slots[s]);
        if (!connected_impl(nv, edges)) return;
        // genus assignments
        std::vector<int> gv(static_cast<size_t>(nv));
        std::function<void(int, int)> rec_genus = [&](int v, int left) {
          if (v == nv) {
            if (left != 0) return;
            // leg assignments
            std::vector<int> legs(static_cast<size_t>(n));
            std::function<void(int)> rec_legs = [&](int li) {
              if (li == n) {
                // decorations
                int ndec = decorate ? (1 << nv) : 1;
                for (int mask = 0; mask < ndec; ++mask) {
                  StableGraph sg;
                  sg.vertices.resize(static_cast<size_t>(nv));
                  for (int v2 = 0; v2 < nv; ++v2) {
                    sg.vertices[static_cast<size_t>(v2)].genus = gv[static_cast<size_t>(v2)];
                    sg.vertices[static_cast<size_t>(v2)].locus =
                        (decorate && (mask & (1 << v2))) ? Locus::PT : Locus::Q;
                  }
                  sg.edges = edges;
                  sg.legs = legs;
                  if (!sg.stable()) continue;
                  // canonical dedupe
                  std::vector<int> perm(static_cast<size_t>(nv));
                  std::iota(perm.begin(), perm.end(), 0);
                  Key best = key_of(sg);
                  do {
                    Key k = key_of(permuted(sg, perm));
                    if (k < best) best = k;
                  } while (std::next_permutation(perm.begin(), perm.end()));
                  if (seen.count(best)) continue;
                  seen.insert(best);
                  out.push_back({sg, aut_order(sg)});
                }
                return;
              }
              for (int v2 = 0; v2 < nv; ++v2) {
                legs[static_cast<size_t>(li)] = v2;
                rec_legs(li + 1);
              }
            };
            rec_legs(0);
            return;
          }
          for (int gg = 0; gg <= left; ++gg) {
            gv[static_cast<size_t>(v)] = gg;
            rec_genus(v + 1, left - gg);
          }
        };
        rec_genus(0, gsum);
        return;
      }
      for (int m = 0; used + m <= emax; ++m) {
        mult[idx] = m;
        rec_edges(idx + 1, used + m);
      }
      mult[idx] = 0;
    };
    rec_edges(0, 0);
  }
  return out;
}

}  // namespace

std::vector<CountedGraph> enumerate_stable(int g, int n) {
  return enumerate_stable_impl(g, n, true);
}

std::vector<CountedGraph> enumerate_stable_shapes(int g, int n) {
  return enumerate_stable_impl(g, n, false);
}

// ---------------------------------------------------------------------------
// bipartite graphs

int BipartiteGraph::h1() const {
  int nv = static_cast<int>(whites.size() + blacks.size());
  return static_cast<int>(edges.size()) - nv + 1;
}

int BipartiteGraph::total_genus() const {
  int g = h1();
  for (const auto& w : whites) g += w.genus;
  for (const auto& b : blacks) g += b.genus;
  return g;
}

bool BipartiteGraph::connected() const {
  int nw = static_cast<int>(whites.size());
  std::vector<std::pair<int, int>> es;
  for (const auto& e : edges) es.push_back({e.white, nw + e.black});
  return connected_impl(nw + static_cast<int>(blacks.size()), es);
}

std::string BipartiteGraph::str() const {
  std::string s = "W[";
  for (size_t v = 0; v < whites.size(); ++v) {
    if (v) s += ",";
    s += "g" + std::to_string(whites[v].genus);
  }
  s += "] B[";
  for (size_t v = 0; v < blacks.size(); ++v) {
    if (v) s += ",";
    s += "g" + std::to_string(blacks[v].genus) + "d" + std::to_string(blacks[v].d_inf);
  }
  s += "] E[";
  for (size_t e = 0; e < edges.size(); ++e) {
    if (e) s += ",";
    s += std::to_string(edges[e].white) + "-" + std::to_string(edges[e].black) + ":a" +
         std::to_string(edges[e].a);
  }
  s += "] L[";
  for (size_t l = 0; l < legs.size(); ++l) {
    if (l) s += ",";
    s += std::to_string(legs[l]);
  }
  return s + "]";
}

namespace {

Key bkey_of(const BipartiteGraph& g) {
  std::vector<std::tuple<int, int, int>> es;
  for (const auto& e : g.edges) es.push_back({e.white, e.black, e.a});
  std::sort(es.begin(), es.end());
  std::string s;
  for (const auto& w : g.whites) s += "w" + std::to_string(w.genus) + ";";
  s += "|";
  for (const auto& b : g.blacks)
    s += "b" + std::to_string(b.genus) + "d" + std::to_string(b.d_inf) + ";";
  s += "|";
  for (const auto& [w, b, a] : es)
    s += std::to_string(w) + "-" + std::to_string(b) + ":" + std::to_string(a) + ";";
  s += "|";
  for (int l : g.legs) s += std::to_string(l) + ";";
  return s;
}

BipartiteGraph bpermuted(const BipartiteGraph& g, const std::vector<int>& wp,
                         const std::vector<int>& bp) {
  BipartiteGraph r = g;
  for (size_t v = 0; v < g.whites.size(); ++v) r.whites[static_cast<size_t>(wp[v])] = g.whites[v];
  for (size_t v = 0; v < g.blacks.size(); ++v) r.blacks[static_cast<size_t>(bp[v])] = g.blacks[v];
  for (auto& e : r.edges) {
    e.white = wp[static_cast<size_t>(e.white)];
    e.black = bp[static_cast<size_t>(e.black)];
  }
  for (auto& l : r.legs) l = wp[static_cast<size_t>(l)];
  return r;
}

long baut_order(const BipartiteGraph& g) {
  int nw = static_cast<int>(g.whites.size());
  int nb = static_cast<int>(g.blacks.size());
  std::vector<int> wp(static_cast<size_t>(nw)), bp(static_cast<size_t>(nb));
  std::iota(wp.begin(), wp.end(), 0);
  Key base = bkey_of(g);
  long total = 0;
  do {
    std::iota(bp.begin(), bp.end(), 0);
    do {
      if (bkey_of(bpermuted(g, wp, bp)) != base) continue;
      // parallel edges with equal decorations are interchangeable
      std::map<std::tuple<int, int, int>, int> mult;
      for (const auto& e : g.edges) mult[{e.white, e.black, e.a}]++;
      long flags = 1;
      for (const auto& [k, m] : mult) flags *= factorial_long(m);
      total += flags;
    } while (std::next_permutation(bp.begin(), bp.end()));
  } while (std::next_permutation(wp.begin(), wp.end()));
  return total;
}

}  // namespace

std::vector<CountedBipartite> enumerate_bipartite(int g, int n, int r) {
  std::vector<CountedBipartite> out;
  std::set<Key> seen;
  // Global budget from the black-vertex inequality summed over blacks:
  // sum_e (a_e - 1) <= 5r + 2 sum g_b - 2|B| <= 5r + 2g - 2|B|.
  int v_cap = 2 * g + n + std::abs(r) + 2;
  for (int nw = 0; nw <= v_cap; ++nw)
    for (int nb = 0; nb <= v_cap; ++nb) {
      if (nw + nb == 0) continue;
      if (nw == 0 && (n > 0 || nb != 1)) continue;
      if (nb == 0 && nw != 1) continue;
      int emax = g + nw + nb - 1;
      if (nw == 0 || nb == 0) emax = 0;
      int slack_cap = 5 * r + 2 * g - 2 * nb;  // max total sum (a_e - 1)
      if (nb > 0 && slack_cap < 0) continue;
      // enumerate nondecreasing edge lists (w, b, a)
      std::vector<BipartiteGraph::Edge> edges;
      std::function<void(int, int, int, int, int)> rec_edges = [&](int w0, int b0,
                                                                   int a0, int left,
                                                                   int slack_left) {
        // attempt to close with the current edge list
        do {
          int ne = static_cast<int>(edges.size());
          int h1 = ne - (nw + nb) + 1;
          if (h1 < 0 || g - h1 < 0) break;
          // every vertex needs an edge when there is more than one vertex
          if (nw + nb > 1) {
            std::vector<char> deg(static_cast<size_t>(nw + nb), 0);
            for (const auto& e : edges) {
              deg[static_cast<size_t>(e.white)] = 1;
              deg[static_cast<size_t>(nw + e.black)] = 1;
            }
            bool ok = true;
            for (char d : deg) ok = ok && d;
            if (!ok) break;
          }
          {
            BipartiteGraph probe;
            probe.whites.resize(static_cast<size_t>(nw));
            probe.blacks.resize(static_cast<size_t>(nb));
            probe.edges = edges;
            if (!probe.connected()) break;
          }
          int gsum = g - h1;
          // per-black edge slack s_v and minimal d_inf floor for genus 0
          std::vector<int> slack(static_cast<size_t>(std::max(nb, 1)), 0);
          for (const auto& e : edges) slack[static_cast<size_t>(e.black)] += e.a - 1;
          // genus assignments
          std::vector<int> gw(static_cast<size_t>(std::max(nw, 1)));
          std::vector<int> gb(static_cast<size_t>(std::max(nb, 1)));
          std::function<void(int, int)> rec_gw = [&](int v, int leftg) {
            if (v == nw) {
              std::function<void(int, int)> rec_gb = [&](int v2, int leftg2) {
                if (v2 == nb) {
                  if (leftg2 != 0) return;
                  // d_inf with exact sum r and per-vertex floors
                  std::vector<int> lo(static_cast<size_t>(std::max(nb, 1)));
                  int lo_suffix = 0;
                  for (int v3 = 0; v3 < nb; ++v3) {
                    int num = 2 - 2 * gb[static_cast<size_t>(v3)] + slack[static_cast<size_t>(v3)];
                    // ceil(num/5)
                    lo[static_cast<size_t>(v3)] = (num >= 0) ? (num + 4) / 5 : -((-num) / 5);
                    lo_suffix += lo[static_cast<size_t>(v3)];
                  }
                  if (lo_suffix > r) return;
                  std::vector<int> dinf(static_cast<size_t>(std::max(nb, 1)));
                  std::function<void(int, int, int)> rec_d = [&](int v3, int leftd,
                                                                 int lo_rest) {
                    if (v3 == nb) {
                      if (leftd != 0) return;
                      std::vector<int> legs(static_cast<size_t>(std::max(n, 1)));
                      std::function<void(int)> rec_legs = [&](int li) {
                        if (li == n) {
                          BipartiteGraph bg;
                          bg.whites.resize(static_cast<size_t>(nw));
                          bg.blacks.resize(static_cast<size_t>(nb));
                          for (int v4 = 0; v4 < nw; ++v4)
                            bg.whites[static_cast<size_t>(v4)].genus = gw[static_cast<size_t>(v4)];
                          for (int v4 = 0; v4 < nb; ++v4) {
                            bg.blacks[static_cast<size_t>(v4)].genus = gb[static_cast<size_t>(v4)];
                            bg.blacks[static_cast<size_t>(v4)].d_inf = dinf[static_cast<size_t>(v4)];
                          }
                          bg.edges = edges;
                          bg.legs.assign(legs.begin(), legs.begin() + n);
                          // genus-0 whites need at least two flags
                          for (int v4 = 0; v4 < nw; ++v4) {
                            if (bg.whites[static_cast<size_t>(v4)].genus > 0) continue;
                            int fl = 0;
                            for (const auto& e : edges)
                              if (e.white == v4) ++fl;
                            for (int li2 = 0; li2 < n; ++li2)
                              if (bg.legs[static_cast<size_t>(li2)] == v4) ++fl;
                            if (fl < 2) return;
                          }
                          std::vector<int> wp(static_cast<size_t>(std::max(nw, 1)));
                          std::vector<int> bp(static_cast<size_t>(std::max(nb, 1)));
                          std::iota(wp.begin(), wp.begin() + nw, 0);
                          Key best = bkey_of(bg);
                          std::sort(wp.begin(), wp.begin() + nw);
                          do {
                            std::iota(bp.begin(), bp.begin() + nb, 0);
                            std::sort(bp.begin(), bp.begin() + nb);
                            do {
                              Key k = bkey_of(bpermuted(bg, wp, bp));
                              if (k < best) best = k;
                            } while (std::next_permutation(bp.begin(), bp.begin() + nb));
                          } while (std::next_permutation(wp.begin(), wp.begin() + nw));
                          if (seen.count(best)) return;
                          seen.insert(best);
                          out.push_back({bg, baut_order(bg)});
                          return;
                        }
                        for (int v4 = 0; v4 < nw; ++v4) {
                          legs[static_cast<size_t>(li)] = v4;
                          rec_legs(li + 1);
                        }
                      };
                      rec_legs(0);
                      return;
                    }
                    int lo_after = lo_rest - lo[static_cast<size_t>(v3)];
                    // leave at least the floors for the rest
                    for (int dv = lo[static_cast<size_t>(v3)]; dv <= leftd - lo_after; ++dv) {
                      dinf[static_cast<size_t>(v3)] = dv;
                      rec_d(v3 + 1, leftd - dv, lo_after);
                    }
                  };
                  rec_d(0, r, lo_suffix);
                  return;
                }
                for (int gg = 0; gg <= leftg2; ++gg) {
                  gb[static_cast<size_t>(v2)] = gg;
                  rec_gb(v2 + 1, leftg2 - gg);
                }
              };
              rec_gb(0, leftg);
              return;
            }
            for (int gg = 0; gg <= leftg; ++gg) {
              gw[static_cast<size_t>(v)] = gg;
              rec_gw(v + 1, leftg - gg);
            }
          };
          rec_gw(0, gsum);
        } while (false);
        if (left == 0) return;
        for (int w = w0; w < nw; ++w)
          for (int b = (w == w0 ? b0 : 0); b < nb; ++b)
            for (int a = (w == w0 && b == b0 ? a0 : 1); a - 1 <= slack_left; ++a) {
              edges.push_back({w, b, a});
              rec_edges(w, b, a, left - 1, slack_left - (a - 1));
              edges.pop_back();
            }
      };
      rec_edges(0, 0, 1, emax, std::max(slack_cap, 0));
    }
  return out;
}

// ---------------------------------------------------------------------------
// stabilization

Stabilized stabilize(const StableGraph& input) {
  if (2 * input.total_genus() - 2 + static_cast<int>(input.legs.size()) <= 0)
    throw Unstabilizable("stabilize: 2g-2+n <= 0");
  // mutable working copy with alive flags
  std::vector<StableGraph::Vertex> verts = input.vertices;
  std::vector<std::pair<int, int>> edges = input.edges;
  std::vector<int> legs = input.legs;
  std::vector<bool> alive(verts.size(), true);
  // carrier[v]: representative in the original indexing (for leg map)
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < static_cast<int>(verts.size()); ++v) {
      if (!alive[static_cast<size_t>(v)] || verts[static_cast<size_t>(v)].genus > 0) continue;
      // count flags
      std::vector<size_t> inc;
      int legflags = 0;
      for (size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].first == v) inc.push_back(e);
        if (edges[e].second == v) inc.push_back(e);  // loop counts twice
      }
      for (int l : legs)
        if (l == v) ++legflags;
      int flags = static_cast<int>(inc.size()) + legflags;
      if (flags >= 3) continue;  // stable
      changed = true;
      if (flags <= 1 && legflags == 0) {
        // rational tail (or isolated): drop the vertex and its edge
        alive[static_cast<size_t>(v)] = false;
        if (!inc.empty()) edges.erase(edges.begin() + static_cast<long>(inc[0]));
      } else if (legflags == flags) {
        // legs only (flags <= 2): reattachment target needed; with no edge
        // this component is unstabilizable
        throw Unstabilizable("stabilize: bare rational component with legs");
      } else if (flags == 2 && inc.size() == 2 && inc[0] == inc[1]) {
        // a loop at a genus-0 vertex with nothing else: not stabilizable
        throw Unstabilizable("stabilize: rational loop component");
      } else if (flags == 2 && inc.size() == 2) {
        // chain middle: contract one incident edge into the other neighbor
        size_t e0 = inc[0], e1 = inc[1];
        int u = (edges[e0].first == v) ? edges[e0].second : edges[e0].first;
        // reattach edge e1's v-end to u, drop e0 and the vertex
        if (edges[e1].first == v) edges[e1].first = u;
        if (edges[e1].second == v) edges[e1].second = u;
        edges.erase(edges.begin() + static_cast<long>(e0));
        alive[static_cast<size_t>(v)] = false;
      } else if (flags == 2 && inc.size() == 1 && legflags == 1) {
        // end: move the leg to the neighbor, drop the edge and vertex
        size_t e0 = inc[0];
        int u = (edges[e0].first == v) ? edges[e0].second : edges[e0].first;
        for (auto& l : legs)
          if (l == v) l = u;
        edges.erase(edges.begin() + static_cast<long>(e0));
        alive[static_cast<size_t>(v)] = false;
      }
      break;  // restart scan after a mutation
    }
  }
  // compact
  std::vector<int> newindex(verts.size(), -1);
  Stabilized out;
  for (size_t v = 0; v < verts.size(); ++v)
    if (alive[v]) {
      newindex[v] = static_cast<int>(out.graph.vertices.size());
      out.graph.vertices.push_back(verts[v]);
    }
  for (auto [a, b] : edges)
    out.graph.edges.push_back({newindex[static_cast<size_t>(a)], newindex[static_cast<size_t>(b)]});
  for (int l : legs) out.graph.legs.push_back(newindex[static_cast<size_t>(l)]);
  out.leg_carrier = out.graph.legs;
  if (!out.graph.stable())
    throw Unstabilizable("stabilize: result not stable");
  return out;
}

}  // namespace mspgw
