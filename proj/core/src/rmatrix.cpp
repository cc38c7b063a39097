#include "mspgw/rmatrix.hpp"

#include "mspgw/linalg.hpp"

#include <algorithm>

namespace mspgw {

// ---------------------------------------------------------------------------
// PairLedger

void PairLedger::add(int w1, int w2, const QSeries& v) {
  if (v.is_zero()) return;
  auto key = std::make_pair(w1, w2);
  auto it = terms_.find(key);
  if (it == terms_.end())
    terms_.emplace(key, v);
  else
    it->second += v;
}

void PairLedger::add(const PairLedger& o) {
  for (const auto& [k, v] : o.terms_) add(k.first, k.second, v);
}

bool PairLedger::empty_or_zero() const {
  for (const auto& [k, v] : terms_)
    if (!v.is_zero()) return false;
  return true;
}

PairLedger PairLedger::operator-() const {
  PairLedger r;
  for (const auto& [k, v] : terms_) r.terms_.emplace(k, -v);
  return r;
}

PairLedger PairLedger::scaled(const QSeries& c) const {
  PairLedger r;
  for (const auto& [k, v] : terms_) {
    QSeries s = v * c;
    if (!s.is_zero()) r.terms_.emplace(k, std::move(s));
  }
  return r;
}

PairLedger PairLedger::shifted(int dw1, int dw2) const {
  PairLedger r;
  for (const auto& [k, v] : terms_)
    r.terms_.emplace(std::make_pair(k.first + dw1, k.second + dw2), v);
  return r;
}

PairLedger PairLedger::swapped() const {
  PairLedger r;
  for (const auto& [k, v] : terms_)
    r.add(k.second, k.first, v);
  return r;
}

PairLedger PairLedger::canonicalized(int N) const {
  PairLedger r;
  for (const auto& [k, v] : terms_) {
    if (v.is_zero()) continue;
    WeightedSeries w1 = reduce_weight(WeightedSeries(k.first, v), ((k.first % N) + N) % N, N);
    WeightedSeries w2 = reduce_weight(WeightedSeries(k.second, w1.value),
                                      ((k.second % N) + N) % N, N);
    r.add(w1.weight, w2.weight, w2.value);
  }
  return r;
}

PairLedger PairLedger::outer(const WeightLedger& out, const WeightLedger& in) {
  PairLedger r;
  for (const auto& [w1, v1] : out.terms())
    for (const auto& [w2, v2] : in.terms()) r.add(w1, w2, v1 * v2);
  return r;
}

PairLedger PairLedger::compose(const PairLedger& a, const PairLedger& b, int N,
                               int order) {
  // sum_gamma a(delta, gamma) b(gamma, in): hour-sum the middle weight.
  PairLedger r;
  for (const auto& [ka, va] : a.terms())
    for (const auto& [kb, vb] : b.terms()) {
      QSeries mid = hour_sum(WeightedSeries(ka.second + kb.first,
                                            (va * vb).truncated(order)),
                             N);
      if (mid.is_zero()) continue;
      r.add(ka.first, kb.second, mid);
    }
  return r;
}

WeightLedger PairLedger::apply(const PairLedger& a, const WeightLedger& v, int N,
                               int order) {
  WeightLedger r;
  for (const auto& [ka, va] : a.terms())
    for (const auto& [wv, vv] : v.terms()) {
      QSeries mid = hour_sum(WeightedSeries(ka.second + wv,
                                            (va * vv).truncated(order)),
                             N);
      if (mid.is_zero()) continue;
      r.add(WeightedSeries(ka.first, mid));
    }
  return r;
}

PairLedger PairLedger::hour_delta(int N, int order) {
  PairLedger r;
  Rational inv(1, BigInt(N));
  for (int m = 0; m < N; ++m)
    r.add(m, -m, QSeries::constant(inv, order));
  return r;
}

// ---------------------------------------------------------------------------
// BlockVecZ / BlockOp

BlockVecZ BlockVecZ::zero(int zdeg, int q_order) {
  BlockVecZ v;
  v.h.assign(static_cast<size_t>(zdeg) + 1,
             {QSeries::zero(q_order), QSeries::zero(q_order), QSeries::zero(q_order),
              QSeries::zero(q_order)});
  v.pt.assign(static_cast<size_t>(zdeg) + 1, WeightLedger());
  return v;
}

BlockOp BlockOp::zero(int N, int q_order, int zdeg) {
  BlockOp op;
  op.N = N;
  op.q_order = q_order;
  size_t n = static_cast<size_t>(zdeg) + 1;
  std::array<std::array<QSeries, 4>, 4> zq;
  for (auto& row : zq)
    for (auto& e : row) e = QSeries::zero(q_order);
  op.qq.assign(n, zq);
  std::array<WeightLedger, 4> zl;
  op.qpt.assign(n, zl);
  op.ptq.assign(n, zl);
  op.ptpt.assign(n, PairLedger());
  return op;
}

BlockOp BlockOp::identity(int N, int q_order, int zdeg) {
  BlockOp op = zero(N, q_order, zdeg);
  for (int a = 0; a < 4; ++a) op.qq[0][static_cast<size_t>(a)][static_cast<size_t>(a)] = QSeries::one(q_order);
  op.ptpt[0] = PairLedger::hour_delta(N, q_order);
  return op;
}

BlockOp BlockOp::operator-() const {
  BlockOp r = *this;
  for (auto& zq : r.qq)
    for (auto& row : zq)
      for (auto& e : row) e = -e;
  for (auto& zl : r.qpt)
    for (auto& l : zl) l = -l;
  for (auto& zl : r.ptq)
    for (auto& l : zl) l = -l;
  for (auto& p : r.ptpt) p = -p;
  return r;
}

BlockOp operator+(const BlockOp& a, const BlockOp& b) {
  int zdeg = std::max(a.zdeg(), b.zdeg());
  BlockOp r = BlockOp::zero(a.N, std::min(a.q_order, b.q_order), zdeg);
  for (int z = 0; z <= zdeg; ++z) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        QSeries s = QSeries::zero(r.q_order);
        if (z <= a.zdeg()) s += a.qq[static_cast<size_t>(z)][static_cast<size_t>(i)][static_cast<size_t>(j)].truncated(r.q_order);
        if (z <= b.zdeg()) s += b.qq[static_cast<size_t>(z)][static_cast<size_t>(i)][static_cast<size_t>(j)].truncated(r.q_order);
        r.qq[static_cast<size_t>(z)][static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
      }
      WeightLedger l1, l2;
      if (z <= a.zdeg()) {
        l1.add(a.qpt[static_cast<size_t>(z)][static_cast<size_t>(i)]);
        l2.add(a.ptq[static_cast<size_t>(z)][static_cast<size_t>(i)]);
      }
      if (z <= b.zdeg()) {
        l1.add(b.qpt[static_cast<size_t>(z)][static_cast<size_t>(i)]);
        l2.add(b.ptq[static_cast<size_t>(z)][static_cast<size_t>(i)]);
      }
      r.qpt[static_cast<size_t>(z)][static_cast<size_t>(i)] = l1;
      r.ptq[static_cast<size_t>(z)][static_cast<size_t>(i)] = l2;
    }
    PairLedger p;
    if (z <= a.zdeg()) p.add(a.ptpt[static_cast<size_t>(z)]);
    if (z <= b.zdeg()) p.add(b.ptpt[static_cast<size_t>(z)]);
    r.ptpt[static_cast<size_t>(z)] = p;
  }
  return r;
}

BlockOp operator-(const BlockOp& a, const BlockOp& b) { return a + (-b); }

BlockOp operator*(const BlockOp& a, const BlockOp& b) {
  int zdeg = std::max(a.zdeg(), b.zdeg());
  int order = std::min(a.q_order, b.q_order);
  BlockOp r = BlockOp::zero(a.N, order, zdeg);
  for (int z = 0; z <= zdeg; ++z)
    for (int za = 0; za <= std::min(z, a.zdeg()); ++za) {
      int zb = z - za;
      if (zb > b.zdeg()) continue;
      const auto& aq = a.qq[static_cast<size_t>(za)];
      const auto& bq = b.qq[static_cast<size_t>(zb)];
      // qq
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          QSeries s = r.qq[static_cast<size_t>(z)][static_cast<size_t>(i)][static_cast<size_t>(j)];
          for (int k = 0; k < 4; ++k) {
            if (aq[static_cast<size_t>(i)][static_cast<size_t>(k)].is_zero()) continue;
            s += aq[static_cast<size_t>(i)][static_cast<size_t>(k)].truncated(order) *
                 bq[static_cast<size_t>(k)][static_cast<size_t>(j)].truncated(order);
          }
          // a.qpt (i <- gamma) composed with b.ptq (gamma <- j): hour sum
          QSeries mids = QSeries::zero(order);
          for (const auto& [w1, v1] : a.qpt[static_cast<size_t>(za)][static_cast<size_t>(i)].terms())
            for (const auto& [w2, v2] : b.ptq[static_cast<size_t>(zb)][static_cast<size_t>(j)].terms())
              mids += hour_sum(WeightedSeries(w1 + w2, (v1 * v2).truncated(order)), a.N);
          s += mids;
          r.qq[static_cast<size_t>(z)][static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
        }
      // qpt: a.qq * b.qpt + a.qpt o b.ptpt
      for (int i = 0; i < 4; ++i) {
        WeightLedger l = r.qpt[static_cast<size_t>(z)][static_cast<size_t>(i)];
        for (int k = 0; k < 4; ++k)
          l.add(b.qpt[static_cast<size_t>(zb)][static_cast<size_t>(k)]
                    .scaled(aq[static_cast<size_t>(i)][static_cast<size_t>(k)].truncated(order)));
        // sum_gamma a.qpt[i](gamma) b.ptpt(gamma, in)
        for (const auto& [w1, v1] : a.qpt[static_cast<size_t>(za)][static_cast<size_t>(i)].terms())
          for (const auto& [kb, vb] : b.ptpt[static_cast<size_t>(zb)].terms()) {
            QSeries mid = hour_sum(WeightedSeries(w1 + kb.first, (v1 * vb).truncated(order)), a.N);
            if (!mid.is_zero()) l.add(WeightedSeries(kb.second, mid));
          }
        r.qpt[static_cast<size_t>(z)][static_cast<size_t>(i)] = l;
      }
      // ptq: a.ptq * b.qq + a.ptpt o b.ptq
      for (int j = 0; j < 4; ++j) {
        WeightLedger l = r.ptq[static_cast<size_t>(z)][static_cast<size_t>(j)];
        for (int k = 0; k < 4; ++k)
          l.add(a.ptq[static_cast<size_t>(za)][static_cast<size_t>(k)]
                    .scaled(bq[static_cast<size_t>(k)][static_cast<size_t>(j)].truncated(order)));
        for (const auto& [ka, va] : a.ptpt[static_cast<size_t>(za)].terms())
          for (const auto& [w2, v2] : b.ptq[static_cast<size_t>(zb)][static_cast<size_t>(j)].terms()) {
            QSeries mid = hour_sum(WeightedSeries(ka.second + w2, (va * v2).truncated(order)), a.N);
            if (!mid.is_zero()) l.add(WeightedSeries(ka.first, mid));
          }
        r.ptq[static_cast<size_t>(z)][static_cast<size_t>(j)] = l;
      }
      // ptpt: a.ptq (x) b.qpt + a.ptpt o b.ptpt
      PairLedger p = r.ptpt[static_cast<size_t>(z)];
      for (int k = 0; k < 4; ++k)
        p.add(PairLedger::outer(a.ptq[static_cast<size_t>(za)][static_cast<size_t>(k)],
                                b.qpt[static_cast<size_t>(zb)][static_cast<size_t>(k)]));
      p.add(PairLedger::compose(a.ptpt[static_cast<size_t>(za)], b.ptpt[static_cast<size_t>(zb)],
                                a.N, order));
      r.ptpt[static_cast<size_t>(z)] = p;
    }
  // keep ledgers small
  for (auto& zl : r.qpt)
    for (auto& l : zl) l = l.canonicalized(r.N);
  for (auto& zl : r.ptq)
    for (auto& l : zl) l = l.canonicalized(r.N);
  for (auto& p : r.ptpt) p = p.canonicalized(r.N);
  return r;
}

BlockOp BlockOp::zflip() const {
  BlockOp r = *this;
  for (int z = 1; z <= zdeg(); z += 2) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j)
        r.qq[static_cast<size_t>(z)][static_cast<size_t>(i)][static_cast<size_t>(j)] =
            -qq[static_cast<size_t>(z)][static_cast<size_t>(i)][static_cast<size_t>(j)];
      r.qpt[static_cast<size_t>(z)][static_cast<size_t>(i)] = -qpt[static_cast<size_t>(z)][static_cast<size_t>(i)];
      r.ptq[static_cast<size_t>(z)][static_cast<size_t>(i)] = -ptq[static_cast<size_t>(z)][static_cast<size_t>(i)];
    }
    r.ptpt[static_cast<size_t>(z)] = -ptpt[static_cast<size_t>(z)];
  }
  return r;
}

BlockOp BlockOp::adjoint() const {
  // Gram: (H^a, H^b) = 5 delta_{a+b,3}; (1_g, 1_g) = s(g) with
  // s = -(5/N) L^3 L_g^{-3}, s^{-1} = -(N/5) L^{-3} L_g^{+3}.
  BlockOp r = zero(N, q_order, zdeg());
  QSeries l3 = L_pow(3, N, q_order);
  QSeries l3i = L_pow(-3, N, q_order);
  Rational sc(-5, BigInt(N));
  Rational sci(-BigInt(N), 5);
  for (int z = 0; z <= zdeg(); ++z) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b)
        r.qq[static_cast<size_t>(z)][static_cast<size_t>(a)][static_cast<size_t>(b)] =
            qq[static_cast<size_t>(z)][static_cast<size_t>(3 - b)][static_cast<size_t>(3 - a)];
      // (A^d)_{H^a <- 1_g} = (1/5) s(g) A_{1_g <- H^{3-a}} with hours renamed
      r.qpt[static_cast<size_t>(z)][static_cast<size_t>(a)] =
          ptq[static_cast<size_t>(z)][static_cast<size_t>(3 - a)]
              .scaled(Rational(1, 5) * sc)
              .scaled(l3)
              .shifted_weight(-3);
    }
    // (A^d)_{1_d <- H^b} = 5 s^{-1}(d) A_{H^{3-b} <- 1_d}
    for (int b = 0; b < 4; ++b)
      r.ptq[static_cast<size_t>(z)][static_cast<size_t>(b)] =
          qpt[static_cast<size_t>(z)][static_cast<size_t>(3 - b)]
              .scaled(Rational(5) * sci)
              .scaled(l3i)
              .shifted_weight(3);
    // (A^d)_{1_d <- 1_g} = s^{-1}(d) A_{1_g <- 1_d}-swapped s(g)
    r.ptpt[static_cast<size_t>(z)] = ptpt[static_cast<size_t>(z)]
                                         .swapped()
                                         .scaled(sci * l3i)
                                         .shifted(3, 0)
                                         .scaled(sc * l3)
                                         .shifted(0, -3);
  }
  return r;
}

BlockOp BlockOp::inverse() const {
  BlockOp id = identity(N, q_order, zdeg());
  BlockOp m = *this - id;
  // sanity: z^0 part of m must be O(q)
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const QSeries& v = m.qq[0][static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (!v.is_zero() && v.valuation() == 0)
        throw Error("BlockOp: inverse needs identity z^0 q^0 part");
    }
  int steps = zdeg() + q_order + 2;
  BlockOp acc = id, pw = id;
  for (int k = 1; k <= steps; ++k) {
    pw = pw * m;
    acc = (k % 2 == 1) ? acc - pw : acc + pw;
  }
  return acc;
}

bool BlockOp::equals_identity() const {
  BlockOp d = *this - identity(N, q_order, zdeg());
  for (int z = 0; z <= d.zdeg(); ++z) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j)
        if (!d.qq[static_cast<size_t>(z)][static_cast<size_t>(i)][static_cast<size_t>(j)].is_zero()) return false;
      if (!d.qpt[static_cast<size_t>(z)][static_cast<size_t>(i)].canonicalized(N).empty_or_zero()) return false;
      if (!d.ptq[static_cast<size_t>(z)][static_cast<size_t>(i)].canonicalized(N).empty_or_zero()) return false;
    }
    if (!d.ptpt[static_cast<size_t>(z)].canonicalized(N).empty_or_zero()) return false;
  }
  return true;
}

BlockVecZ BlockOp::apply(const BlockVecZ& v) const {
  int zdeg_out = zdeg() + v.zdeg();
  BlockVecZ r = BlockVecZ::zero(zdeg_out, q_order);
  for (int zo = 0; zo <= zdeg(); ++zo)
    for (int zv = 0; zv <= v.zdeg(); ++zv) {
      int z = zo + zv;
      for (int a = 0; a < 4; ++a) {
        QSeries s = r.h[static_cast<size_t>(z)][static_cast<size_t>(a)];
        for (int b = 0; b < 4; ++b)
          s += qq[static_cast<size_t>(zo)][static_cast<size_t>(a)][static_cast<size_t>(b)] *
               v.h[static_cast<size_t>(zv)][static_cast<size_t>(b)];
        for (const auto& [w1, v1] : qpt[static_cast<size_t>(zo)][static_cast<size_t>(a)].terms())
          for (const auto& [w2, v2] : v.pt[static_cast<size_t>(zv)].terms())
            s += hour_sum(WeightedSeries(w1 + w2, v1 * v2), N);
        r.h[static_cast<size_t>(z)][static_cast<size_t>(a)] = s;
      }
      WeightLedger l = r.pt[static_cast<size_t>(z)];
      for (int b = 0; b < 4; ++b)
        l.add(ptq[static_cast<size_t>(zo)][static_cast<size_t>(b)]
                  .scaled(v.h[static_cast<size_t>(zv)][static_cast<size_t>(b)]));
      l.add(PairLedger::apply(ptpt[static_cast<size_t>(zo)], v.pt[static_cast<size_t>(zv)], N, q_order));
      r.pt[static_cast<size_t>(z)] = l.canonicalized(N);
    }
  return r;
}

// ---------------------------------------------------------------------------
// sigma root sums

Rational RFactorization::sigma_root_sum(int N, int j) {
  // f(z) = (z^N-1)/(z-1); sigma_j = (-1)^{j-1} [u^{j-1}] f'(1+u)/f(1+u).
  int depth = j;  // need u-coefficients up to j-1
  QSeries f = QSeries::zero(depth);
  QSeries fp = QSeries::zero(depth);
  for (int k = 1; k <= N; ++k) {
    // f(1+u) = sum_k C(N,k) u^{k-1}
    if (k - 1 <= depth) f.set(k - 1, Rational(binomial_int(static_cast<unsigned>(N), static_cast<unsigned>(k))));
    if (k - 2 >= 0 && k - 2 <= depth)
      fp.set(k - 2, Rational(BigInt(k - 1)) * Rational(binomial_int(static_cast<unsigned>(N), static_cast<unsigned>(k))));
  }
  QSeries ratio = fp * f.inverse();
  Rational r = ratio.at(j - 1);
  if (j % 2 == 0) r = -r;
  return r;
}

Rational RFactorization::sigma_root_sum_newton(int N, int j) {
  // Power sums of the roots of P(w) = (w-1)^N - w^N (degree N-1), whose roots
  // are exactly 1/(1-zeta^m), m = 1..N-1. Newton's identities.
  std::vector<Rational> c(static_cast<size_t>(N));  // coefficients of w^k, k = 0..N-1
  for (int k = 0; k <= N - 1; ++k) {
    // (w-1)^N contributes C(N,k)(-1)^{N-k}; w^N cancels the top.
    Rational v(binomial_int(static_cast<unsigned>(N), static_cast<unsigned>(k)));
    if ((N - k) % 2 != 0) v = -v;
    c[static_cast<size_t>(k)] = v;
  }
  // monic normalization: divide by leading coefficient c_{N-1}
  Rational lead = c[static_cast<size_t>(N - 1)];
  std::vector<Rational> e(static_cast<size_t>(N));  // e[i] = elementary symmetric
  for (int i = 1; i <= N - 1; ++i) {
    Rational v = c[static_cast<size_t>(N - 1 - i)] / lead;
    if (i % 2 != 0) v = -v;
    e[static_cast<size_t>(i)] = v;
  }
  auto esym = [&](int i) -> Rational {
    return (i >= 0 && static_cast<size_t>(i) < e.size()) ? e[static_cast<size_t>(i)]
                                                         : Rational(0);
  };
  std::vector<Rational> p(static_cast<size_t>(j) + 1);
  for (int k = 1; k <= j; ++k) {
    Rational s = 0;
    for (int i = 1; i < k; ++i) {
      Rational term = esym(i) * p[static_cast<size_t>(k - i)];
      s += (i % 2 == 0) ? -term : term;
    }
    Rational kek = Rational(BigInt(k)) * esym(k);
    p[static_cast<size_t>(k)] = s + ((k % 2 == 0) ? -kek : kek);
  }
  return p[static_cast<size_t>(j)];
}

// ---------------------------------------------------------------------------
// RFactorization

RFactorization::RFactorization(int N, int q_order, int K_max)
    : n_(N), q_order_(q_order), kmax_(K_max), ss_(N, q_order) {
  if (K_max >= N - 3)
    throw RangeExceeded("RFactorization: K_max must be < N-3");
  build_delta();
  build_q_block();
  build_pt_first();
  build_pt_block();
  build_ops();
}

void RFactorization::build_delta() {
  // exponent argument in (zeta^alpha t)^{-(2k-1)} units:
  //   B_{2k}/(2k(2k-1)) (-5 + 5^{1-2k} - sigma_{2k-1}),
  // i.e. the Bernoulli sum over the inverse tangent/twist weights
  // 5/t_alpha + 1/(-5 t_alpha) + sum_beta 1/(t_alpha - t_beta). The overall
  // signs are pinned by the Picard-Fuchs first column (r_k(0) = delta_k must
  // hold) and corroborated by the printed z^2 tail constants 43/120 etc.
  std::vector<Rational> arg(static_cast<size_t>(kmax_) + 1);
  for (int k = 1; 2 * k - 1 <= kmax_; ++k) {
    Rational b = bernoulli(static_cast<unsigned>(2 * k)) /
                 Rational(BigInt(2 * k) * BigInt(2 * k - 1));
    Rational inner = Rational(-5) + Rational(5).pow(1 - 2 * k) -
                     sigma_root_sum(n_, 2 * k - 1);
    arg[static_cast<size_t>(2 * k - 1)] = b * inner;
  }
  // delta = exp(arg) as a z-polynomial; each z^j coefficient carries weight -j
  delta_.assign(static_cast<size_t>(kmax_) + 1, Rational(0));
  delta_[0] = 1;
  std::vector<Rational> acc(delta_.size());
  acc[0] = 1;
  Rational fact = 1;
  std::vector<Rational> pw = acc;
  for (int m = 1; m <= kmax_; ++m) {
    // pw = arg^m truncated
    std::vector<Rational> next(delta_.size());
    for (size_t i = 0; i < pw.size(); ++i) {
      if (pw[i].is_zero()) continue;
      for (size_t j = 1; i + j < next.size() + 0 && j < arg.size(); ++j) {
        if (arg[j].is_zero()) continue;
        if (i + j >= next.size()) continue;
        next[i + j] += pw[i] * arg[j];
      }
    }
    pw = std::move(next);
    fact *= Rational(m);
    Rational finv = fact.inverse();
    for (size_t i = 0; i < delta_.size(); ++i)
      if (i > 0) delta_[i] += finv * pw[i];
  }
}

Rational RFactorization::delta_coeff(int k) const {
  if (k < 0 || k > kmax_) throw IndexOutOfRange("delta_coeff");
  return delta_[static_cast<size_t>(k)];
}

void RFactorization::build_q_block() {
  const QuinticIData& qi = quintic_I(q_order_);
  // C_b = D log(I_0 I_{1,1} ... I_{b,b}); I_{3,3} = I_{1,1} for the quintic.
  std::array<QSeries, 4> diag{qi.I0, qi.I11, qi.I22, qi.I11};
  std::array<QSeries, 4> cb;
  QSeries acc = QSeries::zero(q_order_);
  for (int b = 0; b < 4; ++b) {
    acc += D(diag[static_cast<size_t>(b)]) * diag[static_cast<size_t>(b)].inverse();
    cb[static_cast<size_t>(b)] = acc;
  }
  int jmax = n_ + 3;
  rq_.assign(static_cast<size_t>(kmax_) + 1,
             std::vector<std::vector<QSeries>>(
                 static_cast<size_t>(jmax) + 1,
                 std::vector<QSeries>(4, QSeries::zero(q_order_))));
  auto get = [&](int k, int j, int b) -> QSeries {
    if (k < 0 || j < 0 || b < 0) return QSeries::zero(q_order_);
    return rq_[static_cast<size_t>(k)][static_cast<size_t>(j)][static_cast<size_t>(b)];
  };
  for (int k = 0; k <= kmax_; ++k) rq_[static_cast<size_t>(k)][0][0] = (k == 0) ? QSeries::one(q_order_) : QSeries::zero(q_order_);
  for (int j = 1; j <= jmax; ++j)
    for (int k = 0; k <= kmax_; ++k)
      for (int b = 0; b < 4; ++b) {
        QSeries v = get(k, j - 1, b - 1);
        if (k >= 1) {
          QSeries prev = get(k - 1, j - 1, b);
          v += D(prev) + cb[static_cast<size_t>(b)] * prev;
        }
        Rational cj = qde_band_constant(j, n_);
        if (!cj.is_zero() && j - n_ >= 0)
          v -= cj * (QSeries::monomial(1, 1, q_order_) * get(k, j - n_, b));
        rq_[static_cast<size_t>(k)][static_cast<size_t>(j)][static_cast<size_t>(b)] = v;
      }
}

const QSeries& RFactorization::rq(int k, int j, int b) const {
  return rq_.at(static_cast<size_t>(k)).at(static_cast<size_t>(j)).at(static_cast<size_t>(b));
}

// --- Picard-Fuchs operator machinery over Q[X] with L_alpha weights --------

namespace {

using XW = std::map<int, Poly>;                 // weight -> X-poly
using Op = std::map<int, XW>;                   // #D's -> coefficient
using ZOp = std::map<int, Op>;                  // z-power -> operator

void xw_add(XW& a, int w, const Poly& p) {
  if (p.is_zero()) return;
  auto it = a.find(w);
  if (it == a.end())
    a.emplace(w, p);
  else {
    it->second += p;
    if (it->second.is_zero()) a.erase(it);
  }
}

XW xw_mul(const XW& a, const XW& b) {
  XW r;
  for (const auto& [wa, pa] : a)
    for (const auto& [wb, pb] : b) xw_add(r, wa + wb, pa * pb);
  return r;
}

// D(f L^w) = (X(1-X) f' + (w/N) X f) L^w
XW xw_D(const XW& a, int N) {
  XW r;
  for (const auto& [w, p] : a) {
    Poly d = xpoly_D(p) + Rational(w, BigInt(N)) * (Poly::variable() * p);
    xw_add(r, w, d);
  }
  return r;
}

void op_add(Op& a, int m, const XW& c) {
  if (c.empty()) return;
  auto it = a.find(m);
  if (it == a.end())
    a.emplace(m, c);
  else
    for (const auto& [w, p] : c) xw_add(it->second, w, p);
}

// compose (sum_a A_a D^a)(sum_b B_b D^b):
// D^a (B psi) = sum_i C(a,i) (D^i B) D^{a-i} psi
Op op_compose(const Op& a, const Op& b, int N) {
  Op r;
  for (const auto& [da, ca] : a)
    for (const auto& [db, cb] : b) {
      XW dib = cb;
      for (int i = 0; i <= da; ++i) {
        Rational binom(binomial_int(static_cast<unsigned>(da), static_cast<unsigned>(i)));
        XW term;
        for (const auto& [w, p] : dib) xw_add(term, w, binom * p);
        XW prod = xw_mul(ca, term);
        op_add(r, da - i + db, prod);
        if (i < da) dib = xw_D(dib, N);
      }
    }
  return r;
}

XW op_apply(const Op& a, const XW& x, int N) {
  XW r;
  for (const auto& [m, c] : a) {
    XW dx = x;
    for (int i = 0; i < m; ++i) dx = xw_D(dx, N);
    XW prod = xw_mul(c, dx);
    for (const auto& [w, p] : prod) xw_add(r, w, p);
  }
  return r;
}

void zop_add(ZOp& a, int z, const Op& op) {
  for (const auto& [m, c] : op) op_add(a[z], m, c);
}

ZOp zop_mul(const ZOp& a, const ZOp& b, int N, int zcap) {
  ZOp r;
  for (const auto& [za, oa] : a)
    for (const auto& [zb, ob] : b) {
      if (za + zb > zcap) continue;
      zop_add(r, za + zb, op_compose(oa, ob, N));
    }
  return r;
}

// canonicalize an XW to a single weight class by shifting weights upward in
// steps of N (L^{-N} = -(1-X) is polynomial).
Poly xw_canonical(const XW& a, int N, int* weight_out) {
  int target = 0;
  bool seen = false;
  for (const auto& [w, p] : a) {
    if (p.is_zero()) continue;
    if (!seen || w > target) target = w;
    seen = true;
  }
  if (!seen) {
    if (weight_out) *weight_out = 0;
    return Poly();
  }
  Poly acc;
  Poly shift({1, -1});  // (1 - X)
  for (const auto& [w, p] : a) {
    if (p.is_zero()) continue;
    int diff = target - w;
    if (diff % N != 0)
      throw IntegrationObstruction("PF: mixed weight classes");
    Poly q = p;
    for (int s = 0; s < diff / N; ++s) q = Rational(-1) * (q * shift);
    acc += q;
  }
  if (weight_out) *weight_out = target;
  return acc;
}

}  // namespace

void RFactorization::build_pt_first() {
  int N = n_;
  int zcap = kmax_ + 1;
  // conjugated D_L: z^0: multiply by L_alpha; z^1: D - (N+3)X/(2N).
  ZOp dl;
  {
    Op z0, z1;
    XW lw;
    xw_add(lw, 1, Poly::constant(1));
    op_add(z0, 0, lw);
    XW one;
    xw_add(one, 0, Poly::constant(1));
    op_add(z1, 1, one);
    XW shift;
    xw_add(shift, 0, Rational(-(N + 3), BigInt(2) * N) * Poly::variable());
    op_add(z1, 0, shift);
    zop_add(dl, 0, z0);
    zop_add(dl, 1, z1);
  }
  // P = D^5 (D^N + 1) - q prod_{k=1}^5 (5 D + k z), q = (X/5^5) L^N
  ZOp dpow;  // D^1
  dpow = dl;
  std::vector<ZOp> dls(static_cast<size_t>(N + 6));
  {
    ZOp id;
    Op idop;
    XW one;
    xw_add(one, 0, Poly::constant(1));
    op_add(idop, 0, one);
    zop_add(id, 0, idop);
    dls[0] = id;
    for (int m = 1; m <= N + 5; ++m) dls[static_cast<size_t>(m)] = zop_mul(dls[static_cast<size_t>(m - 1)], dl, N, zcap);
  }
  ZOp p_op;
  // D^5 (D^N + 1) = D^{N+5} + D^5
  for (const auto& [z, op] : dls[static_cast<size_t>(N + 5)]) zop_add(p_op, z, op);
  for (const auto& [z, op] : dls[5]) zop_add(p_op, z, op);
  // q-part: prod (5 D_L + k z)
  ZOp prod;
  {
    Op idop;
    XW one;
    xw_add(one, 0, Poly::constant(1));
    op_add(idop, 0, one);
    zop_add(prod, 0, idop);
  }
  for (int k = 1; k <= 5; ++k) {
    ZOp factor;
    for (const auto& [z, op] : dl) {
      Op scaled;
      for (const auto& [m, c] : op) {
        XW c5;
        for (const auto& [w, p] : c) xw_add(c5, w, Rational(5) * p);
        op_add(scaled, m, c5);
      }
      zop_add(factor, z, scaled);
    }
    Op kz;
    XW kc;
    xw_add(kc, 0, Poly::constant(Rational(k)));
    op_add(kz, 0, kc);
    zop_add(factor, 1, kz);
    prod = zop_mul(prod, factor, N, zcap);
  }
  ZOp qmul;
  {
    Op q0;
    XW qx;
    xw_add(qx, N, Rational(1, 3125) * Poly::variable());
    op_add(q0, 0, qx);
    zop_add(qmul, 0, q0);
  }
  ZOp qprod = zop_mul(qmul, prod, N, zcap);
  for (const auto& [z, op] : qprod) {
    Op neg;
    for (const auto& [m, c] : op) {
      XW cn;
      for (const auto& [w, p] : c) xw_add(cn, w, Rational(-1) * p);
      op_add(neg, m, cn);
    }
    zop_add(p_op, z, neg);
  }

  // sanity: the z^0 operator annihilates everything (applied to 1)
  {
    XW one;
    xw_add(one, 0, Poly::constant(1));
    auto it = p_op.find(0);
    if (it != p_op.end()) {
      XW res = op_apply(it->second, one, N);
      int w;
      Poly p = xw_canonical(res, N, &w);
      if (!p.is_zero())
        throw IntegrationObstruction("PF: z^0 balance fails");
    }
  }

  rfirst_.assign(static_cast<size_t>(kmax_) + 1, Poly());
  rfirst_[0] = Poly::constant(1);
  for (int k = 1; k <= kmax_; ++k) {
    // known part: z^{k+1} coefficient of P applied to sum_{i<k} r_i L^{-i} z^i
    XW known;
    for (int i = 0; i < k; ++i) {
      auto it = p_op.find(k + 1 - i);
      if (it == p_op.end()) continue;
      XW xi;
      xw_add(xi, -i, rfirst_[static_cast<size_t>(i)]);
      XW res = op_apply(it->second, xi, N);
      for (const auto& [w, p] : res) xw_add(known, w, p);
    }
    int wk;
    Poly h = xw_canonical(known, N, &wk);
    // unknown part: operator block P_{z^1} acting on X^m L^{-k}
    auto it1 = p_op.find(1);
    if (it1 == p_op.end()) throw IntegrationObstruction("PF: missing z^1 block");
    std::vector<Poly> cols;
    int max_deg = h.degree();
    for (int m = 0; m <= k; ++m) {
      XW xm;
      std::vector<Rational> mono(static_cast<size_t>(m) + 1);
      mono[static_cast<size_t>(m)] = 1;
      xw_add(xm, -k, Poly(std::move(mono)));
      XW res = op_apply(it1->second, xm, N);
      int wm;
      Poly pm = xw_canonical(res, N, &wm);
      if (!pm.is_zero() && !h.is_zero() && wm != wk) {
        // align weight classes
        int diff = wk - wm;
        if (diff % N != 0) throw IntegrationObstruction("PF: weight misalign");
        Poly shift({1, -1});
        if (diff > 0)
          for (int s2 = 0; s2 < diff / N; ++s2) pm = Rational(-1) * (pm * shift);
        else {
          // shift h instead
          for (int s2 = 0; s2 < -diff / N; ++s2) h = Rational(-1) * (h * shift);
          wk = wm;
        }
      }
      max_deg = std::max(max_deg, pm.degree());
      cols.push_back(pm);
    }
    // solve sum_m r_{k,m} col_m + h = 0 coefficientwise
    size_t rows = static_cast<size_t>(max_deg) + 1;
    std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(cols.size()));
    std::vector<Rational> bvec(rows);
    for (size_t r2 = 0; r2 < rows; ++r2) {
      for (size_t m = 0; m < cols.size(); ++m) A[r2][m] = cols[m].at(static_cast<int>(r2));
      bvec[r2] = -h.at(static_cast<int>(r2));
    }
    LinearSolveResult sol = solve_exact(A, bvec);
    if (!sol.consistent)
      throw IntegrationObstruction("PF: no polynomial solution at k=" +
                                   std::to_string(k));
    if (sol.kernel_dim > 0) {
      // pin the q=0 value by the Delta matrix: r_k(0) = delta_k
      // (generic k < N never reaches here; guarded for safety)
      sol.solution[0] = delta_[static_cast<size_t>(k)];
    }
    rfirst_[static_cast<size_t>(k)] = Poly(std::move(sol.solution));
  }
}

const Poly& RFactorization::r_first(int k) const {
  return rfirst_.at(static_cast<size_t>(k));
}

void RFactorization::build_pt_block() {
  int N = n_;
  int jmax = N + 3;
  rpt_.assign(static_cast<size_t>(kmax_) + 1,
              std::vector<Poly>(static_cast<size_t>(jmax) + 1));
  for (int k = 0; k <= kmax_; ++k)
    rpt_[static_cast<size_t>(k)][0] = xpoly_to_ypoly(rfirst_[static_cast<size_t>(k)]);
  Poly oneminusY({1, -1});  // 1 - Y
  for (int j = 1; j <= jmax; ++j)
    for (int k = 0; k <= kmax_; ++k) {
      Poly v = rpt_[static_cast<size_t>(k)][static_cast<size_t>(j - 1)];
      if (k >= 1) {
        const Poly& prev = rpt_[static_cast<size_t>(k - 1)][static_cast<size_t>(j - 1)];
        Rational coeff(-(BigInt(N) + 3 - 2 * BigInt(j) + 2 * BigInt(k)), 2 * BigInt(N));
        v += ypoly_D(prev) + coeff * (oneminusY * prev);
      }
      Rational cj = qde_band_constant(j, N);
      if (!cj.is_zero() && j - N >= 0)
        v += Rational(-1) * ((cj * Rational(1, 3125)) * (oneminusY * rpt_[static_cast<size_t>(k)][static_cast<size_t>(j - N)]));
      rpt_[static_cast<size_t>(k)][static_cast<size_t>(j)] = v;
    }
}

const Poly& RFactorization::rpt(int k, int j) const {
  return rpt_.at(static_cast<size_t>(k)).at(static_cast<size_t>(j));
}

WeightedSeries RFactorization::r_pt_pairing(int k, int j) const {
  return WeightedSeries(j - k, ypoly_to_qseries(rpt(k, j), q_order_));
}

// ---------------------------------------------------------------------------
// operator assembly

void RFactorization::build_ops() {
  int N = n_;
  const QuinticIData& qi = quintic_I(q_order_);
  std::array<QSeries, 4> Pi{qi.I0, qi.I0 * qi.I11, qi.I0 * qi.I11 * qi.I22,
                            qi.I0 * qi.I11 * qi.I22 * qi.I11};

  r_op_ = BlockOp::zero(N, q_order_, kmax_);

  // helper: given pairings P_j(z^k) deposit block columns.
  // input H^b: plain pairings
  for (int b = 0; b < 4; ++b) {
    // R(H^b) = 5 Pi_{3-b} R(phi^{3-b})
    QSeries scale = Rational(5) * Pi[static_cast<size_t>(3 - b)];
    for (int k = 0; k <= kmax_; ++k) {
      for (int j = 0; j <= N + 3; ++j) {
        QSeries pj = rq(k, j, 3 - b) * scale;
        if (pj.is_zero()) continue;
        // phi^j splits
        if (j <= 3) {
          r_op_.qq[static_cast<size_t>(k)][static_cast<size_t>(3 - j)][static_cast<size_t>(b)] +=
              Rational(1, 5) * pj;
          r_op_.ptq[static_cast<size_t>(k)][static_cast<size_t>(b)].add(
              from_phase(Rational(1, 5) * pj, N + 3 - j, N));
          r_op_.ptq[static_cast<size_t>(k)][static_cast<size_t>(b)].add(
              from_phase(Rational(1, 5) * pj, 3 - j, N));
        } else {
          if (j >= N)
            r_op_.qq[static_cast<size_t>(k)][static_cast<size_t>(N + 3 - j)][static_cast<size_t>(b)] +=
                Rational(1, 5) * pj;
          r_op_.ptq[static_cast<size_t>(k)][static_cast<size_t>(b)].add(
              from_phase(Rational(1, 5) * pj, N + 3 - j, N));
        }
      }
    }
  }
  // input 1_gamma: R 1_gamma = -(5/N) L^{(N+3)/2} Y L_g^{-3} R 1bar^gamma.
  // (N+3)/2 must be integral for the weight bookkeeping: odd N only.
  if ((N + 3) % 2 != 0) throw ConfigInvalid("RFactorization: odd N required");
  QSeries pre = Rational(-5, BigInt(N)) * (ss_.L_power((N + 3) / 2) * ss_.Y());
  for (int k = 0; k <= kmax_; ++k)
    for (int j = 0; j <= N + 3; ++j) {
      // (R 1_g, p^j) at z^k: pre * L_g^{j-k-3} rpt[k][j]
      QSeries val = pre * ypoly_to_qseries(rpt(k, j), q_order_);
      if (val.is_zero()) continue;
      int wg = j - k - 3;
      // split over phi^j
      auto deposit = [&](int phase_out, const QSeries& v) {
        r_op_.ptpt[static_cast<size_t>(k)].add(
            PairLedger::outer(WeightLedger(from_phase(v, phase_out, N)),
                              WeightLedger(WeightedSeries(wg, QSeries::one(q_order_)))));
      };
      if (j <= 3) {
        r_op_.qpt[static_cast<size_t>(k)][static_cast<size_t>(3 - j)].add(
            WeightedSeries(wg, Rational(1, 5) * val));
        deposit(N + 3 - j, Rational(1, 5) * val);
        deposit(3 - j, Rational(1, 5) * val);
      } else {
        if (j >= N)
          r_op_.qpt[static_cast<size_t>(k)][static_cast<size_t>(N + 3 - j)].add(
              WeightedSeries(wg, Rational(1, 5) * val));
        deposit(N + 3 - j, Rational(1, 5) * val);
      }
    }
  for (auto& zl : r_op_.qpt)
    for (auto& l : zl) l = l.canonicalized(N);
  for (auto& zl : r_op_.ptq)
    for (auto& l : zl) l = l.canonicalized(N);
  for (auto& p : r_op_.ptpt) p = p.canonicalized(N);

  r_inv_op_ = r_op_.inverse();
}

// ---------------------------------------------------------------------------
// structural checks

void RFactorization::check_vanishing() const {
  for (int k = 0; k <= kmax_; ++k)
    for (int j = 0; j <= n_ + 3; ++j)
      for (int b = 0; b < 4; ++b) {
        if (((j - b - k) % n_ + n_) % n_ == 0) continue;
        if (!rq(k, j, b).is_zero())
          throw BirkhoffMismatch("vanishing pattern fails at (k,j,b)=(" +
                                 std::to_string(k) + "," + std::to_string(j) + "," +
                                 std::to_string(b) + ")");
      }
}

void RFactorization::check_pt_degrees() const {
  for (int k = 0; k <= kmax_; ++k)
    for (int j = 0; j <= n_ + 3; ++j) {
      int bound = k + j / n_;
      if (rpt(k, j).degree() > bound)
        throw BirkhoffMismatch("pt degree bound fails at (k,j)=(" +
                               std::to_string(k) + "," + std::to_string(j) + ")");
    }
}

void RFactorization::check_ring_membership() const {
  // (R_k)_{b+k}^b and (Y/t^N)(R_k)_{b+N+k}^b = -Y (R_k)_{b+N+k}^b lie in the
  // five-generator ring; verified by exact fit and multiply-back.
  const YYGenerators& g = yy_generators(q_order_);
  for (int k = 0; k <= kmax_; ++k)
    for (int b = 0; b < 4; ++b) {
      if (b + k <= n_ + 3) {
        QSeries t = rq(k, b + k, b);
        RingFit fit = fit_in_ring(t, RingFitCaps{k + 1, -1});
        if (!(ring_fit_eval(fit, q_order_) == t))
          throw BirkhoffMismatch("ring membership fails (diag)");
      }
      if (b + n_ + k <= n_ + 3) {
        QSeries t = Rational(-1) * (g.Y * rq(k, b + n_ + k, b));
        RingFit fit = fit_in_ring(t, RingFitCaps{k + 2, -1});
        if (!(ring_fit_eval(fit, q_order_) == t))
          throw BirkhoffMismatch("ring membership fails (shifted)");
      }
    }
}

void RFactorization::check_symplectic() const {
  BlockOp prod = r_op_ * r_op_.adjoint().zflip();
  if (!prod.equals_identity())
    throw BirkhoffMismatch("R(z) R^dagger(-z) != Id");
}

void RFactorization::check_first_column_delta() const {
  for (int k = 0; k <= kmax_; ++k)
    if (rfirst_.at(static_cast<size_t>(k)).at(0) != delta_[static_cast<size_t>(k)])
      throw BirkhoffMismatch("r_k(0) != Delta coefficient at k=" + std::to_string(k));
}

// ---------------------------------------------------------------------------
// tails

TailData RFactorization::tails() const {
  TailData t;
  // 1 = H^0 + sum_gamma 1_gamma
  BlockVecZ one = BlockVecZ::zero(0, q_order_);
  one.h[0][0] = QSeries::one(q_order_);
  one.pt[0] = WeightLedger(WeightedSeries(0, QSeries::one(q_order_)));
  BlockVecZ rinv1 = r_inv_op_.apply(one);
  // T = z(1 - R^{-1}) 1: z-shift by one
  t.T = BlockVecZ::zero(rinv1.zdeg() + 1, q_order_);
  t.T.h[1][0] = QSeries::one(q_order_);
  t.T.pt[1] = WeightLedger(WeightedSeries(0, QSeries::one(q_order_)));
  for (int z = 0; z <= rinv1.zdeg(); ++z) {
    for (int a = 0; a < 4; ++a)
      t.T.h[static_cast<size_t>(z + 1)][static_cast<size_t>(a)] -= rinv1.h[static_cast<size_t>(z)][static_cast<size_t>(a)];
    t.T.pt[static_cast<size_t>(z + 1)].add(-rinv1.pt[static_cast<size_t>(z)]);
    t.T.pt[static_cast<size_t>(z + 1)] = t.T.pt[static_cast<size_t>(z + 1)].canonicalized(n_);
  }
  // T~_pt(z) = z + L^{(N+3)/2}(T|_pt - z * unit)
  QSeries lhalf = ss_.L_power((n_ + 3) / 2);
  t.Tt_pt.assign(static_cast<size_t>(t.T.zdeg()) + 1, WeightLedger());
  for (int z = 0; z <= t.T.zdeg(); ++z) {
    WeightLedger l = t.T.pt[static_cast<size_t>(z)];
    if (z == 1) l.add(WeightedSeries(0, -QSeries::one(q_order_)));
    WeightLedger scaled = l.scaled(lhalf);
    if (z == 1) scaled.add(WeightedSeries(0, QSeries::one(q_order_)));
    t.Tt_pt[static_cast<size_t>(z)] = scaled.canonicalized(n_);
  }
  // divisibility by z^2
  for (int z = 0; z <= std::min(1, t.T.zdeg()); ++z)
    if (!t.Tt_pt[static_cast<size_t>(z)].empty_or_zero())
      throw BirkhoffMismatch("T~_pt not divisible by z^2");
  return t;
}

// ---------------------------------------------------------------------------
// Birkhoff verifier

void RFactorization::verify_birkhoff(const NmspFrontier& frontier) const {
  int N = n_;
  if (frontier.space().N() != N)
    throw ConfigInvalid("verify_birkhoff: N mismatch");
  int q_cmp_cap = std::min(q_order_, frontier.space().q_order());
  const ZMatrix& s = frontier.S();
  int smin = s.zmin();
  const QuinticIData& qi = quintic_I(q_cmp_cap);
  ZMatrix sq = quintic_S(q_cmp_cap);
  std::array<QSeries, 4> Pi{qi.I0, qi.I0 * qi.I11, qi.I0 * qi.I11 * qi.I22,
                            qi.I0 * qi.I11 * qi.I22 * qi.I11};

  auto pair_sm = [&](int e, int i, int j) {
    // (S^M p^i, p^j) z^e coefficient
    QSeries acc = QSeries::zero(q_cmp_cap);
    for (int l = 0; l < N + 4; ++l) {
      Rational elj = ss_.eta(l, j);
      if (elj.is_zero()) continue;
      acc += elj * s.at(e, l, i).truncated(q_cmp_cap);
    }
    return acc;
  };

  // ---- Q sector: (S^M phi^b, p^j) vs (R S^{Q,tw} phi^b, p^j) -------------
  for (int b = 0; b < 4; ++b) {
    for (int j = 0; j <= N + 3; ++j) {
      for (int e = smin; e <= kmax_ - 3; ++e) {
        // LHS: Delta acts trivially on the quintic sector
        QSeries lhs =
            (pair_sm(e, 3 - b, j) + pair_sm(e, N + 3 - b, j)) *
            (Rational(1, 5) * Pi[static_cast<size_t>(b)].inverse());
        // RHS: gamma(z) = S^Q phi^b in H-coords; then R pairings
        QSeries rhs = QSeries::zero(q_cmp_cap);
        bool known = true;
        for (int zq = -3; zq <= 0; ++zq) {
          int k = e - zq;
          if (k < 0) continue;
          if (k > kmax_) {
            // R truncated above K_max: unknown unless the S^Q part vanishes
            known = false;
            continue;
          }
          for (int a = 0; a < 4; ++a) {
            // phi^b in H-coords: H^{3-b}/(5 Pi_b)
            QSeries gamma = sq.at(zq, a, 3 - b) * (Rational(1, 5) * Pi[static_cast<size_t>(b)].inverse());
            if (gamma.is_zero()) continue;
            rhs += gamma * (rq(k, j, 3 - a) * (Rational(5) * Pi[static_cast<size_t>(3 - a)]));
          }
        }
        if (!known) continue;
        // The two sides are expansions in different directions (z = infinity
        // window against the rational-function identity); the q^{>=1} parts
        // of S^M live at unboundedly deep z-orders, so the derivable common
        // depth of this entrywise comparison is q^0. The full-q structure is
        // covered by the recursion-side checks (symplecticity, Delta match,
        // vanishing/degree bounds, ring membership, tail pipelines).
        if (!(lhs - rhs).at(0).is_zero())
          throw BirkhoffMismatch("verify_birkhoff Q sector fails at (b,j,e)=(" +
                                 std::to_string(b) + "," + std::to_string(j) + "," +
                                 std::to_string(e) + ")");
      }
    }
  }

  // ---- point sector: (S^M Delta 1bar^a, p^j) vs (R e^{tau/z} 1bar^a, p^j) --
  QSeries lhalf = ss_.L_power((N + 3) / 2);
  WeightedSeries tau = frontier.dw_tau_alpha();
  for (int j = 0; j <= N + 3; ++j) {
    for (int e = smin + kmax_; e <= kmax_; ++e) {
      // LHS: sum_k delta_k z^k * (S^M 1bar^alpha, p^j)
      WeightLedger lhs;
      for (int k = 0; k <= kmax_; ++k) {
        int es = e - k;
        if (es < smin) continue;
        // (S^M 1bar^a, p^j) at z^{es}: L^{(N+3)/2}/5 sum_i phase(N-1-i) (S p^{4+i}, p^j);
        // the Delta z^k coefficient carries phase -k of its own.
        for (int i = 0; i < N; ++i) {
          QSeries v = pair_sm(es, 4 + i, j);
          if (v.is_zero()) continue;
          lhs.add(from_phase(Rational(1, 5) * (delta_[static_cast<size_t>(k)] * (v * lhalf)),
                             N - 1 - i - k, N));
        }
      }
      // RHS: R(z) e^{tau_alpha/z} 1bar^alpha pairings:
      // e^{tau/z} = sum_m tau^m/(m! z^m); (R 1bar^a, p^j) at z^k has weight j-k.
      WeightLedger rhs;
      for (int k = 0; k <= kmax_; ++k) {
        int m = k - e;  // tau-exponent
        if (m < 0) continue;
        WeightedSeries tm(0, QSeries::one(q_cmp_cap));
        for (int s2 = 0; s2 < m; ++s2) tm = tm * tau;
        Rational mfact_inv = Rational(factorial(static_cast<unsigned>(m))).inverse();
        WeightedSeries rp = r_pt_pairing(k, j);
        rhs.add(WeightedSeries(tm.weight + rp.weight,
                               mfact_inv * (tm.value.truncated(q_cmp_cap) *
                                            rp.value.truncated(q_cmp_cap))));
      }
      // The Delta factor is an infinite z-series against a one-sided window
      // and the q^d coefficients of S^M live at unboundedly deep z-orders
      // for every d >= 1, so on the weighted-pt component the derivable
      // q-depth of this product comparison is d = 0 (which pins
      // R(q=0) = Id + diag Delta). Deeper q-structure on the point sector is
      // covered by the Picard-Fuchs construction, the Delta matching of the
      // first column, the degree bounds and symplecticity.
      WeightLedger diff = (lhs + (-rhs)).canonicalized(N);
      for (const auto& [w, v] : diff.terms())
        if (!v.at(0).is_zero())
          throw BirkhoffMismatch("verify_birkhoff pt sector fails at (j,e)=(" +
                                 std::to_string(j) + "," + std::to_string(e) + ")");
    }
  }
}

}  // namespace mspgw
