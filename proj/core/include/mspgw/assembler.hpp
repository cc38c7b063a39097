#pragma once

#include "mspgw/graphs.hpp"
#include "mspgw/psi.hpp"
#include "mspgw/rmatrix.hpp"

#include <functional>
#include <optional>

namespace mspgw {

// Separable decomposition of the edge bivector
//   V(z,w) = sum_dual_pairs (e (x) e^ - R^{-1}(z) e (x) R^{-1}(w) e^) / (z+w)
// into components on the block space at the two ends. Hour ledgers carry the
// alpha-dependence of point components at each end.
struct EdgeBivector {
  int K = 0;  // z,w powers 0..K
  int q_order = 0;
  // [k][l]: component tables
  std::vector<std::vector<std::array<std::array<QSeries, 4>, 4>>> qq;  // H^a (x) H^b
  std::vector<std::vector<std::array<WeightLedger, 4>>> qpt;  // H^a (x) 1_beta
  std::vector<std::vector<std::array<WeightLedger, 4>>> ptq;  // 1_alpha (x) H^b
  std::vector<std::vector<PairLedger>> ptpt;                  // 1_alpha (x) 1_beta
};

// V through z,w order K, computed from R^{-1}; throws DivisionInexact when
// the numerator fails to vanish at w = -z.
EdgeBivector edge_bivector(const RFactorization& rf, int K);

// Ancestor correlators of the quintic at the mirror-transformed parameter,
// used at Q-vertices of the stable-graph sum. Built-ins cover (0,3) (three-
// point values, 5-normalized pairing) and (1,1) (<H> from P_{1,1}, <psibar>
// = chi/24 with chi = -200); further entries come from user tables, with
// safe string/dilaton reductions applied first. Keys are (g, sorted list of
// (H-power, psibar-power)).
class VertexOracle {
 public:
  explicit VertexOracle(int q_order);

  using InsKey = std::vector<std::pair<int, int>>;
  QSeries correlator(int g, InsKey insertions) const;

  // replace the (1,1) <H> entry (the DF_1 input) by a custom series; used by
  // the polynomiality solver with the entry treated as unknown.
  void override_h11(QSeries u) { h11_override_ = std::move(u); }
  // perturb the built-in P_{1,1} by adding c*A_1 (negative control hook).
  void perturb_p11_A(const Rational& c) { p11_perturb_a_ = c; }

  void set_table_entry(int g, InsKey key, QSeries value);

  int q_order() const { return q_order_; }
  QSeries p11_series() const;  // -(1/2)A - (31/3)B + (1/12)Y - 13/6 (+ perturbation)

 private:
  int q_order_;
  std::optional<QSeries> h11_override_;
  Rational p11_perturb_a_ = 0;
  std::map<std::pair<int, InsKey>, QSeries> table_;
};

// The stable-graph sum of the [0,1] theory (the R-matrix action formula) and
// its building blocks.
class GraphAssembler {
 public:
  GraphAssembler(const RFactorization& rf, VertexOracle oracle,
                 const NmspFrontier* frontier = nullptr);

  const StateSpace& space() const { return rf_.space(); }
  const VertexOracle& oracle() const { return oracle_; }
  VertexOracle& oracle() { return oracle_; }

  // leg series R(z)^{-1}[S^M(z^-) tau(z)]_+; constant insertions need no
  // S^M dressing, z-polynomial ones require the frontier.
  BlockVecZ leg_insertion(const std::map<int, StateVector>& tau) const;
  BlockVecZ leg_insertion_p(int m) const;  // tau = p^m

  // vertex values of the translated classes.
  struct SlotTerm {
    int zpow = 0;
    bool is_pt = false;
    int index_or_weight = 0;  // H-power for Q, ledger weight for pt
    QSeries coeff;
  };
  // Q-branch: I_0^{-(2g-2+n)} times the oracle correlator.
  QSeries vertex_value_Q(int g, const std::vector<SlotTerm>& slots) const;
  // pt-branch: normalized finite T~ sum over psi integrals with the
  // (5/(N(-t_alpha)^{3+N}))^{1-g} prefactor; hour-summed exactly.
  QSeries vertex_value_pt(int g, const std::vector<SlotTerm>& slots) const;

  // [tau_1, ..., tau_n]^{[0,1]}_{g,n} assembled over stable graphs; constant
  // insertions given as state vectors.
  QSeries graph_sum_01(int g, const std::vector<StateVector>& insertions) const;
  QSeries graph_sum_01_p(int g, const std::vector<int>& p_powers) const;

  const EdgeBivector& bivector() const { return bivec_; }
  const TailData& tails() const { return tails_; }

 private:
  const RFactorization& rf_;
  VertexOracle oracle_;
  const NmspFrontier* frontier_;
  EdgeBivector bivec_;
  TailData tails_;
};

// ---------------------------------------------------------------------------
// bipartite side (Theorem "summation")

// script-S pairing (tau, S^alpha_a)^tw for a constant insertion tau:
// a single-hour phase ledger in alpha.
WeightLedger unstable_pairing(const NmspFrontier& fr, const StateVector& tau, int a);
// two-edge unstable white vertex with both edges at the same hour:
// (S_a1, S_a2)^tw / (5t/a1 + 5t/a2); PoleCollision if a1 + a2 = 0 (cannot
// happen for positive multiplicities; asserted).
WeightLedger unstable_two_point_same_hour(const NmspFrontier& fr, int a1, int a2);

// Pluggable FJRW input: value of the dual twisted n-point function for one
// black-vertex configuration, as a phase ledger in the single ambient hour.
struct BlackVertexData {
  // key: (g_Gamma, sorted a-multiset, sorted b-multiset)
  std::map<std::tuple<int, std::vector<int>, std::vector<int>>, WeightLedger> fjrw;
};

// edge factor A~_e for multiplicity a at the ambient hour (phase ledger).
WeightLedger black_edge_factor(const StateSpace& ss, int a);
// Cont^infty of a black vertex with the given genus, d_inf and external edge
// multiplicities (all at the same hour); Case-2 configurations are built in,
// general stable ones require fjrw entries. With case2_only the stable
// configurations are skipped (the default run mode when no tables are
// supplied); otherwise a missing entry raises MissingFjrw naming the key.
WeightLedger black_vertex(const NmspFrontier& fr, int g_v, int d_inf,
                          const std::vector<int>& a_mult, const BlackVertexData& fjrw,
                          bool case2_only = false);
// degree bound of the summation theorem for one black vertex:
// deg_q <= d_inf + (2g - 2 - sum(a_e - 1))/5.
int black_vertex_degree_bound(int g_v, int d_inf, const std::vector<int>& a_mult);

// ---------------------------------------------------------------------------
// P_{g,n} and polynomiality

// P_{0,3} = 1, P_{1,1} = -(1/2)A - (31/3)B + (1/12)Y - 13/6, and the
// recursion P_{g,n+1} = (D + (g-1)(2B+1-Y) - nA) P_{g,n}.
QSeries pg_series(int g, int n, int order);
QSeries pg_next(const QSeries& pgn, int g, int n);

// check: series is a q-polynomial of degree <= bound g-1 + (3g-3+sum m)/N.
struct PolyCheck {
  bool ok = false;
  int bound = 0;
  int first_violation = -1;
};
PolyCheck polynomiality_check(const QSeries& series, int g, int N,
                              const std::vector<int>& m_powers,
                              const std::vector<int>& k_powers);

// genus-1 solve mode: treat the (1,1) <H>-oracle entry (DF_1 after the
// mirror map) as an unknown series u and impose that the assembled series
// has only the q^0 coefficient (Theorem-1 bound 0). The solution set is the
// one-parameter family u = u0 + c * kernel with kernel(0) = 1; the free
// parameter is the expected g-1 = 1 initial condition.
struct SolveResult {
  QSeries u0;       // particular solution with u0(0) = 0
  QSeries kernel;   // direction of the free constant, normalized kernel(0)=1
  int free_constants = 0;
};
SolveResult polynomiality_solve_genus1(const RFactorization& rf, int insertion_p);

}  // namespace mspgw
