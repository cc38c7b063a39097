#pragma once

#include "mspgw/weighted.hpp"

#include <array>
#include <vector>

namespace mspgw {

// Element of the (N+4)-dimensional even state space in the p-power basis,
// reduced by p^{N+4} = t^N p^4 = -p^4.
using StateVector = std::vector<QSeries>;

// The state space of the N-mixed-spin-P theory after the specialization
// t^N = -1 (which makes q' = q and every scalar rational): basis {p^i},
// twisted pairing, restriction to the quintic / point sectors, and the
// L-weight algebra that performs hour sums exactly.
class StateSpace {
 public:
  StateSpace(int N, int q_order);

  int N() const { return n_; }
  int dim() const { return n_ + 4; }
  int q_order() const { return q_order_; }

  // p^k as (index, sign) after reduction into 0..N+3.
  std::pair<int, int> reduce_p_power(int k) const;

  StateVector zero_vector() const;
  StateVector basis_vector(int i) const;  // p^i

  // eta_{ij}: 5 at i+j = N+3, 5 t^N = -5 at i+j = 2N+3, else 0.
  Rational eta(int i, int j) const;
  QSeries pair(const StateVector& x, const StateVector& y) const;

  // phi^i with pair(phi_i, phi^j) = delta_i^j.
  StateVector dual_basis(int i) const;

  // p^j|_Q = H^j (zero for j >= 4): components of x on 1, H, H^2, H^3.
  std::array<QSeries, 4> restrict_Q(const StateVector& x) const;
  // p^j|_{pt_alpha} = (-t_alpha)^j = (zeta^alpha t)^j, one phase class per
  // power; the whole restriction is the merged ledger.
  WeightLedger restrict_pt(const StateVector& x) const;

  QSeries hour_sum(const WeightedSeries& w) const {
    return mspgw::hour_sum(w, n_);
  }

  // H^j as a state vector: p^j (t^N - p^N)/t^N = p^j + p^{N+j}, j = 0..3.
  StateVector H_class(int j) const;

  // 1^alpha = (1/5) sum_{j=0}^{N-1} (-t_alpha)^{N-1-j} p^{4+j}:
  // list of (p-index, phase weight, rational coefficient).
  struct PhaseTerm {
    int p_index;
    int phase;
    Rational coeff;
  };
  std::vector<PhaseTerm> one_alpha_dual() const;
  // 1_alpha = -(1/N) sum_j (zeta^alpha t)^{N-4-j} p^{4+j}.
  std::vector<PhaseTerm> one_alpha() const;

  // (1bar_alpha, 1bar_alpha)^tw = -(5/N) Y L_alpha^{-3}.
  WeightedSeries normalized_pt_pairing() const;
  // (1_alpha, 1_alpha)^{pt,tw} = -(5/N) L^3 L_alpha^{-3}.
  WeightedSeries pt_pairing_scalar() const;

  QSeries L_power(int m) const { return L_pow(m, n_, q_order_); }
  QSeries Y() const { return L_power(-n_); }

 private:
  int n_;
  int q_order_;
};

// Element of the block space {H^0..H^3 on Q} + {1_alpha at a generic hour},
// the natural value type for restricted classes. The point component of the
// vector at hour alpha is the ledger evaluated at that alpha.
struct LocalVector {
  std::array<QSeries, 4> q;
  WeightLedger pt;

  static LocalVector zero(int q_order);
  bool is_zero() const;
};

LocalVector operator+(const LocalVector& a, const LocalVector& b);
LocalVector operator-(const LocalVector& a, const LocalVector& b);
LocalVector scale(const QSeries& c, const LocalVector& a);
LocalVector scale(const Rational& c, const LocalVector& a);

// Twisted pairing of two restricted classes: the Q block pairs by
// (H^a, H^b) = 5 delta_{a+b,3}, the point block by the scalar
// -(5/N) L^3 L_alpha^{-3} followed by the exact hour sum.
QSeries pair_local(const StateSpace& ss, const LocalVector& x, const LocalVector& y);

// Restriction of a state vector to the block space.
LocalVector to_local(const StateSpace& ss, const StateVector& x);

}  // namespace mspgw
