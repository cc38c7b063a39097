#include "mspgw/state_space.hpp"

namespace mspgw {

StateSpace::StateSpace(int N, int q_order) : n_(N), q_order_(q_order) {
  if (N <= 5) throw ConfigInvalid("StateSpace: requires N > 5");
  if (q_order < 0) throw ConfigInvalid("StateSpace: negative q order");
}

std::pair<int, int> StateSpace::reduce_p_power(int k) const {
  int sign = 1;
  while (k >= n_ + 4) {
    k -= n_;
    sign = -sign;  // p^{k} = t^N p^{k-N} with t^N = -1
  }
  return {k, sign};
}

StateVector StateSpace::zero_vector() const {
  return StateVector(static_cast<size_t>(dim()), QSeries::zero(q_order_));
}

StateVector StateSpace::basis_vector(int i) const {
  if (i < 0)
    throw IndexOutOfRange("StateSpace: negative basis index");
  auto [j, sign] = reduce_p_power(i);
  StateVector v = zero_vector();
  v[static_cast<size_t>(j)] = QSeries::constant(sign, q_order_);
  return v;
}

Rational StateSpace::eta(int i, int j) const {
  if (i + j == n_ + 3) return 5;
  if (i + j == 2 * n_ + 3) return -5;  // 5 t^N
  return 0;
}

QSeries StateSpace::pair(const StateVector& x, const StateVector& y) const {
  if (static_cast<int>(x.size()) != dim() || static_cast<int>(y.size()) != dim())
    throw DimensionMismatch("StateSpace: pair() dimension mismatch");
  QSeries acc = QSeries::zero(q_order_);
  for (int i = 0; i < dim(); ++i) {
    if (x[static_cast<size_t>(i)].is_zero()) continue;
    for (int j = 0; j < dim(); ++j) {
      Rational e = eta(i, j);
      if (e.is_zero()) continue;
      acc += e * (x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)]);
    }
  }
  return acc;
}

StateVector StateSpace::dual_basis(int i) const {
  if (i < 0 || i > n_ + 3)
    throw IndexOutOfRange("StateSpace: dual basis index out of range");
  StateVector v = zero_vector();
  Rational fifth(1, 5);
  if (i <= 3) {
    // p^{3-i}(p^N - t^N)/5 = (p^{N+3-i} + p^{3-i})/5 under t^N = -1.
    v[static_cast<size_t>(n_ + 3 - i)] = QSeries::constant(fifth, q_order_);
    v[static_cast<size_t>(3 - i)] = QSeries::constant(fifth, q_order_);
  } else {
    v[static_cast<size_t>(n_ + 3 - i)] = QSeries::constant(fifth, q_order_);
  }
  return v;
}

std::array<QSeries, 4> StateSpace::restrict_Q(const StateVector& x) const {
  return {x[0], x[1], x[2], x[3]};
}

WeightLedger StateSpace::restrict_pt(const StateVector& x) const {
  WeightLedger led;
  for (int j = 0; j < dim(); ++j) {
    if (x[static_cast<size_t>(j)].is_zero()) continue;
    led.add(from_phase(x[static_cast<size_t>(j)], j, n_));
  }
  return led;
}

StateVector StateSpace::H_class(int j) const {
  if (j < 0 || j > 3) throw IndexOutOfRange("StateSpace: H^j needs 0 <= j <= 3");
  StateVector v = zero_vector();
  v[static_cast<size_t>(j)] = QSeries::one(q_order_);
  v[static_cast<size_t>(n_ + j)] = QSeries::one(q_order_);
  return v;
}

std::vector<StateSpace::PhaseTerm> StateSpace::one_alpha_dual() const {
  std::vector<PhaseTerm> out;
  out.reserve(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j)
    out.push_back({4 + j, n_ - 1 - j, Rational(1, 5)});
  return out;
}

std::vector<StateSpace::PhaseTerm> StateSpace::one_alpha() const {
  std::vector<PhaseTerm> out;
  out.reserve(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j)
    out.push_back({4 + j, n_ - 4 - j, Rational(-1, BigInt(n_))});
  return out;
}

WeightedSeries StateSpace::normalized_pt_pairing() const {
  return WeightedSeries(-3, Rational(-5, BigInt(n_)) * Y());
}

WeightedSeries StateSpace::pt_pairing_scalar() const {
  return WeightedSeries(-3, Rational(-5, BigInt(n_)) * L_power(3));
}

LocalVector LocalVector::zero(int q_order) {
  LocalVector v;
  for (auto& c : v.q) c = QSeries::zero(q_order);
  return v;
}

bool LocalVector::is_zero() const {
  for (const auto& c : q)
    if (!c.is_zero()) return false;
  return pt.empty_or_zero();
}

LocalVector operator+(const LocalVector& a, const LocalVector& b) {
  LocalVector r;
  for (int i = 0; i < 4; ++i) r.q[static_cast<size_t>(i)] = a.q[static_cast<size_t>(i)] + b.q[static_cast<size_t>(i)];
  r.pt = a.pt + b.pt;
  return r;
}

LocalVector operator-(const LocalVector& a, const LocalVector& b) {
  LocalVector r;
  for (int i = 0; i < 4; ++i) r.q[static_cast<size_t>(i)] = a.q[static_cast<size_t>(i)] - b.q[static_cast<size_t>(i)];
  r.pt = a.pt + (-b.pt);
  return r;
}

LocalVector scale(const QSeries& c, const LocalVector& a) {
  LocalVector r;
  for (int i = 0; i < 4; ++i) r.q[static_cast<size_t>(i)] = a.q[static_cast<size_t>(i)] * c;
  r.pt = a.pt.scaled(c);
  return r;
}

LocalVector scale(const Rational& c, const LocalVector& a) {
  LocalVector r;
  for (int i = 0; i < 4; ++i) r.q[static_cast<size_t>(i)] = c * a.q[static_cast<size_t>(i)];
  r.pt = a.pt.scaled(c);
  return r;
}

QSeries pair_local(const StateSpace& ss, const LocalVector& x, const LocalVector& y) {
  QSeries acc = QSeries::zero(ss.q_order());
  for (int a = 0; a < 4; ++a) {
    const QSeries& xa = x.q[static_cast<size_t>(a)];
    if (xa.is_zero()) continue;
    const QSeries& yb = y.q[static_cast<size_t>(3 - a)];
    if (yb.is_zero()) continue;
    acc += Rational(5) * (xa * yb);
  }
  WeightLedger prod = x.pt * y.pt;
  WeightedSeries s = ss.pt_pairing_scalar();
  acc += prod.scaled(s.value).shifted_weight(s.weight).hour_summed(ss.N(), ss.q_order());
  return acc;
}

LocalVector to_local(const StateSpace& ss, const StateVector& x) {
  LocalVector v;
  v.q = ss.restrict_Q(x);
  v.pt = ss.restrict_pt(x);
  return v;
}

}  // namespace mspgw
