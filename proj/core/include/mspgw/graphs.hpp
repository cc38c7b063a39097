#pragma once

#include "mspgw/rational.hpp"

#include <map>
#include <vector>

namespace mspgw {

// Fixed-locus decoration of a stable-graph vertex. Point vertices carry no
// hour: hour sums are performed by the weight algebra at evaluation time.
enum class Locus { Q, PT };

// Stable graph: vertices decorated by genus and fixed locus, edges as
// unordered vertex pairs (loops allowed), legs labeled 1..n.
struct StableGraph {
  struct Vertex {
    int genus = 0;
    Locus locus = Locus::Q;
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> legs;  // legs[i] = incident vertex of leg i+1

  int num_flags(int v) const;
  int h1() const;  // first Betti number |E| - |V| + 1
  int total_genus() const;
  bool connected() const;
  bool stable() const;
  std::string str() const;
};

// enumerate all stable graphs of type (g, n) with decorations in {Q, PT},
// together with automorphism orders (automorphisms fix legs pointwise,
// permute vertices/edges/flags preserving decorations; a loop contributes
// its flag swap).
struct CountedGraph {
  StableGraph graph;
  long aut = 1;
};
std::vector<CountedGraph> enumerate_stable(int g, int n);
// undecorated enumeration (locus ignored; all Q) for oracles
std::vector<CountedGraph> enumerate_stable_shapes(int g, int n);

// Decorated bipartite graph: white vertices carry genus and legs, black
// vertices carry genus and an integer degree d_inf, edges carry a
// multiplicity a_e > 0; hours are again left to the weight algebra.
struct BipartiteGraph {
  struct White {
    int genus = 0;
  };
  struct Black {
    int genus = 0;
    int d_inf = 0;
  };
  std::vector<White> whites;
  std::vector<Black> blacks;
  struct Edge {
    int white = 0, black = 0, a = 1;
  };
  std::vector<Edge> edges;
  std::vector<int> legs;  // incident white vertex per leg

  int h1() const;
  int total_genus() const;
  bool connected() const;
  std::string str() const;
};

struct CountedBipartite {
  BipartiteGraph graph;
  long aut = 1;
};
// all decorated bipartite graphs of genus g, n legs, total degree r, with
// each black vertex satisfying d_inf[v] >= (2 - 2g_v + sum_e (a_e-1))/5 and
// every genus-0 white vertex having |L_v| + |E_v| >= 2.
std::vector<CountedBipartite> enumerate_bipartite(int g, int n, int r);

// Stabilization of a genus-decorated graph: remove rational tails, contract
// rational chains. Input is a StableGraph-shaped object that need not be
// stable; returns the stabilization plus the map sending each original leg
// to its stable carrier vertex (indices into the returned graph).
struct Stabilized {
  StableGraph graph;
  std::vector<int> leg_carrier;
};
Stabilized stabilize(const StableGraph& g);

}  // namespace mspgw
