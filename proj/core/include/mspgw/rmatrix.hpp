#pragma once

#include "mspgw/nmsp.hpp"

namespace mspgw {

// Finite sum of terms value(q) * L_delta^{w1} L_gamma^{w2} carried by an
// operator block that eats a point class at hour gamma and emits one at hour
// delta. Compositions contract the middle hour by the exact hour sum.
class PairLedger {
 public:
  PairLedger() {}

  void add(int w1, int w2, const QSeries& v);
  void add(const PairLedger& o);
  const std::map<std::pair<int, int>, QSeries>& terms() const { return terms_; }
  bool empty_or_zero() const;

  PairLedger operator-() const;
  PairLedger scaled(const QSeries& c) const;
  PairLedger shifted(int dw1, int dw2) const;
  PairLedger swapped() const;  // transpose the two hours
  PairLedger canonicalized(int N) const;

  // outer product of an out-hour ledger and an in-hour ledger
  static PairLedger outer(const WeightLedger& out, const WeightLedger& in);
  // sum_{gamma} A(delta, gamma) B(gamma, in2): contract A's second hour with
  // B's first hour
  static PairLedger compose(const PairLedger& a, const PairLedger& b, int N, int order);
  // sum_gamma A(delta, gamma) v(gamma): contraction against a vector ledger
  static WeightLedger apply(const PairLedger& a, const WeightLedger& v, int N, int order);
  // Kronecker delta_{delta,gamma} = (1/N) sum_{r=0}^{N-1} L_d^r L_g^{-r}
  static PairLedger hour_delta(int N, int order);

 private:
  std::map<std::pair<int, int>, QSeries> terms_;
};

// Vector in block coordinates v = sum_a h[a] H^a + sum_gamma pt(gamma) 1_gamma,
// one slot per z-power 0..deg (R-side objects are z-polynomials).
struct BlockVecZ {
  std::vector<std::array<QSeries, 4>> h;
  std::vector<WeightLedger> pt;

  static BlockVecZ zero(int zdeg, int q_order);
  int zdeg() const { return static_cast<int>(h.size()) - 1; }
};

// z-polynomial operator on the block space with hour-ledger entries; the
// concrete form of R(z), R(z)^{-1} and their products.
struct BlockOp {
  int N = 0;
  int q_order = 0;
  // per z-power 0..zdeg:
  std::vector<std::array<std::array<QSeries, 4>, 4>> qq;  // out a <- in b
  std::vector<std::array<WeightLedger, 4>> qpt;           // out H^a <- in 1_gamma
  std::vector<std::array<WeightLedger, 4>> ptq;           // out 1_delta <- in H^b
  std::vector<PairLedger> ptpt;                           // out delta <- in gamma

  static BlockOp identity(int N, int q_order, int zdeg);
  static BlockOp zero(int N, int q_order, int zdeg);
  int zdeg() const { return static_cast<int>(qq.size()) - 1; }

  BlockOp operator-() const;
  friend BlockOp operator+(const BlockOp& a, const BlockOp& b);
  friend BlockOp operator-(const BlockOp& a, const BlockOp& b);
  // composition with hour contraction; z-degree capped at the operands' max
  friend BlockOp operator*(const BlockOp& a, const BlockOp& b);
  BlockOp zflip() const;
  // pairing adjoint: (A x, y)^tw = (x, A^dagger y)^tw
  BlockOp adjoint() const;
  // Neumann inverse (A = Id + positive (z,q)-filtration part)
  BlockOp inverse() const;
  bool equals_identity() const;

  BlockVecZ apply(const BlockVecZ& v) const;
};

struct TailData {
  // T(z) = z(1 - R(z)^{-1}) 1 in block coordinates
  BlockVecZ T;
  // point part of T-tilde: T~_alpha(z) = z + L^{(N+3)/2}(T|_pt - z 1_alpha);
  // coefficient of z^{l} is a weight ledger, zero for l < 2.
  std::vector<WeightLedger> Tt_pt;
  // quintic part of T~ vanishes to O(z^{N-2}) at desk scale.
};

// The Givental R-matrix of the Birkhoff factorization
//   S^M diag{Delta^{pt}} = R diag{S^{pt}, S^Q},
// produced by the paper's explicit recursions (exact, window-free):
// Q block seeded by (R_k)_0^b = delta, point block seeded by the
// Picard-Fuchs first column, both stepped in j. The matrix route through an
// actual NmspFrontier instance is the verifier, not the production path.
class RFactorization {
 public:
  RFactorization(int N, int q_order, int K_max);

  int N() const { return n_; }
  int K_max() const { return kmax_; }
  const StateSpace& space() const { return ss_; }

  // sum_{m=1}^{N-1} (1 - zeta^m)^{-j}, exact rational.
  static Rational sigma_root_sum(int N, int j);
  // Newton-identity route on (w-1)^N - w^N (independent oracle).
  static Rational sigma_root_sum_newton(int N, int j);

  // z^k coefficient of Delta^{pt_alpha}; value at weight -k.
  Rational delta_coeff(int k) const;

  // Q block (R_k)_j^b; zero unless j = b + k mod N.
  const QSeries& rq(int k, int j, int b) const;
  // first point column r_k in Q[X], r_0 = 1.
  const Poly& r_first(int k) const;
  // point block (R_k)_j in Q[Y]_{k + floor(j/N)}, alpha-independent.
  const Poly& rpt(int k, int j) const;

  // (R(z) 1bar^alpha, p^j) z^k coefficient: weight j-k, value rpt as series.
  WeightedSeries r_pt_pairing(int k, int j) const;

  // R(z) as a block operator on z-powers 0..K_max, and its inverse.
  const BlockOp& R_op() const { return r_op_; }
  const BlockOp& R_inv_op() const { return r_inv_op_; }

  // structural checks
  void check_vanishing() const;       // (R_k)_j^b = 0 off the residue class
  void check_pt_degrees() const;      // Q[Y]-degree bounds
  void check_ring_membership() const; // Eq. polyofRQ fits in the YY ring
  void check_symplectic() const;      // R(z) R^dagger(-z) = Id
  void check_first_column_delta() const;  // r_k(X=0) = delta_k

  // Verifier: compare S^M diag{Delta} and R blockdiag(S^pt, S^Q) through
  // pairings against the block dual basis on the derivable z-window.
  // Throws BirkhoffMismatch with the first failing entry.
  void verify_birkhoff(const NmspFrontier& frontier) const;

  TailData tails() const;

 private:
  void build_delta();
  void build_q_block();
  void build_pt_first();
  void build_pt_block();
  void build_ops();

  int n_, q_order_, kmax_;
  StateSpace ss_;
  std::vector<Rational> delta_;                 // z^k values (weight -k)
  std::vector<std::vector<std::vector<QSeries>>> rq_;  // [k][j][b]
  std::vector<Poly> rfirst_;                    // X-polys
  std::vector<std::vector<Poly>> rpt_;          // [k][j] Y-polys
  BlockOp r_op_, r_inv_op_;
};

}  // namespace mspgw
