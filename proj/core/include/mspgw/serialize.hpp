#pragma once

#include "mspgw/assembler.hpp"

#include <string>

namespace mspgw {

// JSON renderings of the exact objects: series as {"order", "coeffs"} with
// rationals serialized as "num/den" strings, matrices row-major with
// "z_min"/"z_max", graphs as adjacency lists with decorations in a
// deterministic order. No floats anywhere.
std::string json_rational(const Rational& r);
std::string json_qseries(const QSeries& s);
std::string json_poly(const Poly& p, const std::string& var);
std::string json_zmatrix(const ZMatrix& m);
std::string json_stable_graph(const StableGraph& g, long aut);
std::string json_bipartite_graph(const BipartiteGraph& g, long aut);

// FNV-1a content hash for run manifests.
std::string fnv1a_hex(const std::string& bytes);

// Atomic-ish write: to <path>.tmp then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mspgw
