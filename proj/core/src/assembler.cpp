#include "mspgw/assembler.hpp"

#include <algorithm>

namespace mspgw {

// ---------------------------------------------------------------------------
// edge bivector

namespace {

struct Bivec {
  // raw numerator components per (z^k, w^l)
  std::vector<std::vector<std::array<std::array<QSeries, 4>, 4>>> qq;
  std::vector<std::vector<std::array<WeightLedger, 4>>> qpt;
  std::vector<std::vector<std::array<WeightLedger, 4>>> ptq;
  std::vector<std::vector<PairLedger>> ptpt;

  Bivec(int kz, int kw, int q_order) {
    std::array<std::array<QSeries, 4>, 4> zq;
    for (auto& row : zq)
      for (auto& e : row) e = QSeries::zero(q_order);
    qq.assign(static_cast<size_t>(kz) + 1,
              std::vector<std::array<std::array<QSeries, 4>, 4>>(static_cast<size_t>(kw) + 1, zq));
    std::array<WeightLedger, 4> zl;
    qpt.assign(static_cast<size_t>(kz) + 1,
               std::vector<std::array<WeightLedger, 4>>(static_cast<size_t>(kw) + 1, zl));
    ptq = qpt;
    ptpt.assign(static_cast<size_t>(kz) + 1,
                std::vector<PairLedger>(static_cast<size_t>(kw) + 1, PairLedger()));
  }
};

}  // namespace

EdgeBivector edge_bivector(const RFactorization& rf, int K) {
  const StateSpace& ss = rf.space();
  int N = ss.N();
  int q_order = ss.q_order();
  const BlockOp& rinv = rf.R_inv_op();
  int zcap = rinv.zdeg();
  // the division recursion reads the numerator up to z-power 2K+1
  if (2 * K + 1 > zcap)
    throw ConfigInvalid("edge_bivector: K too large for the R expansion");
  int KZ = 2 * K + 1;

  Bivec num(KZ, K, q_order);
  // identity part at (0,0): sum_a H^a (x) H^{3-a}/5 + sum_g 1_g (x) s^{-1}(g) 1_g
  for (int a = 0; a < 4; ++a)
    num.qq[0][0][static_cast<size_t>(a)][static_cast<size_t>(3 - a)] =
        QSeries::constant(Rational(1, 5), q_order);
  QSeries sinv_val = Rational(-BigInt(N), 5) * ss.L_power(-3);
  num.ptpt[0][0] = PairLedger::hour_delta(N, q_order).scaled(sinv_val).shifted(0, 3);

  // minus R^{-1} e (x) R^{-1} e^dual
  // Q dual pairs (H^a, H^{3-a}/5)
  std::array<BlockVecZ, 4> rH;
  for (int a = 0; a < 4; ++a) {
    BlockVecZ basis = BlockVecZ::zero(0, q_order);
    basis.h[0][static_cast<size_t>(a)] = QSeries::one(q_order);
    rH[static_cast<size_t>(a)] = rinv.apply(basis);
  }
  for (int a = 0; a < 4; ++a) {
    const BlockVecZ& u = rH[static_cast<size_t>(a)];
    const BlockVecZ& v = rH[static_cast<size_t>(3 - a)];
    for (int k = 0; k <= std::min(KZ, u.zdeg()); ++k)
      for (int l = 0; l <= std::min(K, v.zdeg()); ++l) {
        for (int x = 0; x < 4; ++x)
          for (int y = 0; y < 4; ++y) {
            QSeries t = u.h[static_cast<size_t>(k)][static_cast<size_t>(x)] *
                        v.h[static_cast<size_t>(l)][static_cast<size_t>(y)];
            if (!t.is_zero())
              num.qq[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(x)][static_cast<size_t>(y)] -=
                  Rational(1, 5) * t;
          }
        for (int x = 0; x < 4; ++x) {
          WeightLedger t = v.pt[static_cast<size_t>(l)]
                               .scaled(u.h[static_cast<size_t>(k)][static_cast<size_t>(x)])
                               .scaled(Rational(1, 5));
          num.qpt[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(x)].add(-t);
        }
        for (int y = 0; y < 4; ++y) {
          WeightLedger t = u.pt[static_cast<size_t>(k)]
                               .scaled(v.h[static_cast<size_t>(l)][static_cast<size_t>(y)])
                               .scaled(Rational(1, 5));
          num.ptq[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(y)].add(-t);
        }
        PairLedger t = PairLedger::outer(u.pt[static_cast<size_t>(k)], v.pt[static_cast<size_t>(l)])
                           .scaled(QSeries::constant(Rational(1, 5), q_order));
        num.ptpt[static_cast<size_t>(k)][static_cast<size_t>(l)].add(-t);
      }
  }
  // pt dual pairs: sum_g R^{-1} 1_g (x) R^{-1} s^{-1}(g) 1_g.
  // R^{-1} 1_g has H^x-parts qpt_k[x](g) and pt-parts ptpt_k(delta, g).
  // The second factor carries the extra scalar s^{-1}(g) = -(N/5)L^{-3}L_g^3.
  for (int k = 0; k <= std::min(KZ, zcap); ++k)
    for (int l = 0; l <= std::min(K, zcap); ++l) {
      // qq: sum_g qpt_k[x](g) qpt_l[y](g) s^{-1}(g)
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
          QSeries acc = QSeries::zero(q_order);
          for (const auto& [w1, v1] : rinv.qpt[static_cast<size_t>(k)][static_cast<size_t>(x)].terms())
            for (const auto& [w2, v2] : rinv.qpt[static_cast<size_t>(l)][static_cast<size_t>(y)].terms())
              acc += hour_sum(WeightedSeries(w1 + w2 + 3, v1 * v2 * sinv_val), N);
          if (!acc.is_zero())
            num.qq[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(x)][static_cast<size_t>(y)] -= acc;
        }
      // qpt: end1 H^x from qpt_k[x](g), end2 pt-beta from ptpt_l(beta, g) s^{-1}(g)
      for (int x = 0; x < 4; ++x) {
        WeightLedger acc;
        for (const auto& [w1, v1] : rinv.qpt[static_cast<size_t>(k)][static_cast<size_t>(x)].terms())
          for (const auto& [kb, vb] : rinv.ptpt[static_cast<size_t>(l)].terms()) {
            QSeries mid = hour_sum(WeightedSeries(w1 + kb.second + 3, v1 * vb * sinv_val), N);
            if (!mid.is_zero()) acc.add(WeightedSeries(kb.first, mid));
          }
        num.qpt[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(x)].add(-acc);
      }
      // ptq: end1 pt-alpha from ptpt_k(alpha, g), end2 H^y from qpt_l[y](g) s^{-1}(g)
      for (int y = 0; y < 4; ++y) {
        WeightLedger acc;
        for (const auto& [ka, va] : rinv.ptpt[static_cast<size_t>(k)].terms())
          for (const auto& [w2, v2] : rinv.qpt[static_cast<size_t>(l)][static_cast<size_t>(y)].terms()) {
            QSeries mid = hour_sum(WeightedSeries(ka.second + w2 + 3, va * v2 * sinv_val), N);
            if (!mid.is_zero()) acc.add(WeightedSeries(ka.first, mid));
          }
        num.ptq[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(y)].add(-acc);
      }
      // ptpt: end1 from ptpt_k(alpha, g), end2 from ptpt_l(beta, g) s^{-1}(g)
      {
        PairLedger acc;
        for (const auto& [ka, va] : rinv.ptpt[static_cast<size_t>(k)].terms())
          for (const auto& [kb, vb] : rinv.ptpt[static_cast<size_t>(l)].terms()) {
            QSeries mid = hour_sum(WeightedSeries(ka.second + kb.second + 3, va * vb * sinv_val), N);
            if (!mid.is_zero()) acc.add(ka.first, kb.first, mid);
          }
        num.ptpt[static_cast<size_t>(k)][static_cast<size_t>(l)].add(-acc);
      }
    }

  // canonicalize the numerator ledgers
  for (auto& row : num.qpt)
    for (auto& arr : row)
      for (auto& l : arr) l = l.canonicalized(N);
  for (auto& row : num.ptq)
    for (auto& arr : row)
      for (auto& l : arr) l = l.canonicalized(N);
  for (auto& row : num.ptpt)
    for (auto& p : row) p = p.canonicalized(N);

  // divide by (z+w): V_{k,l} = sum_{i<=l} (-1)^i num_{k+1+i, l-i};
  // the w = -z regularity shows up as num_{0,l} = V_{0,l-1}.
  EdgeBivector v;
  v.K = K;
  v.q_order = q_order;
  std::array<std::array<QSeries, 4>, 4> zq;
  for (auto& row : zq)
    for (auto& e : row) e = QSeries::zero(q_order);
  v.qq.assign(static_cast<size_t>(K) + 1,
              std::vector<std::array<std::array<QSeries, 4>, 4>>(static_cast<size_t>(K) + 1, zq));
  std::array<WeightLedger, 4> zl;
  v.qpt.assign(static_cast<size_t>(K) + 1,
               std::vector<std::array<WeightLedger, 4>>(static_cast<size_t>(K) + 1, zl));
  v.ptq = v.qpt;
  v.ptpt.assign(static_cast<size_t>(K) + 1,
                std::vector<PairLedger>(static_cast<size_t>(K) + 1, PairLedger()));
  for (int k = 0; k <= K; ++k)
    for (int l = 0; l <= K; ++l)
      for (int i = 0; i <= l; ++i) {
        int kk = k + 1 + i, ll = l - i;
        if (kk > KZ) throw ConfigInvalid("edge_bivector: numerator depth exhausted");
        Rational sgn = (i % 2 == 0) ? 1 : -1;
        for (int x = 0; x < 4; ++x)
          for (int y = 0; y < 4; ++y)
            v.qq[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(x)][static_cast<size_t>(y)] +=
                sgn * num.qq[static_cast<size_t>(kk)][static_cast<size_t>(ll)][static_cast<size_t>(x)][static_cast<size_t>(y)];
        for (int x = 0; x < 4; ++x) {
          v.qpt[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(x)].add(
              num.qpt[static_cast<size_t>(kk)][static_cast<size_t>(ll)][static_cast<size_t>(x)].scaled(sgn));
          v.ptq[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(x)].add(
              num.ptq[static_cast<size_t>(kk)][static_cast<size_t>(ll)][static_cast<size_t>(x)].scaled(sgn));
        }
        v.ptpt[static_cast<size_t>(k)][static_cast<size_t>(l)].add(
            (i % 2 == 0) ? num.ptpt[static_cast<size_t>(kk)][static_cast<size_t>(ll)]
                         : -num.ptpt[static_cast<size_t>(kk)][static_cast<size_t>(ll)]);
      }
  for (auto& row : v.qpt)
    for (auto& arr : row)
      for (auto& l : arr) l = l.canonicalized(N);
  for (auto& row : v.ptq)
    for (auto& arr : row)
      for (auto& l : arr) l = l.canonicalized(N);
  for (auto& row : v.ptpt)
    for (auto& p : row) p = p.canonicalized(N);

  // exactness of the division: num_{0,l} must equal V_{0,l-1} (and num_{00}=0)
  for (int l = 0; l <= K; ++l) {
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        QSeries want = (l == 0) ? QSeries::zero(q_order)
                                : v.qq[0][static_cast<size_t>(l - 1)][static_cast<size_t>(x)][static_cast<size_t>(y)];
        if (!(num.qq[0][static_cast<size_t>(l)][static_cast<size_t>(x)][static_cast<size_t>(y)] - want).is_zero())
          throw DivisionInexact("edge_bivector: numerator not divisible by z+w (qq)");
      }
    PairLedger want = (l == 0) ? PairLedger() : v.ptpt[0][static_cast<size_t>(l - 1)];
    PairLedger diff = num.ptpt[0][static_cast<size_t>(l)];
    diff.add(-want);
    if (!diff.canonicalized(N).empty_or_zero())
      throw DivisionInexact("edge_bivector: numerator not divisible by z+w (ptpt)");
    for (int x = 0; x < 4; ++x) {
      WeightLedger w1 = num.qpt[0][static_cast<size_t>(l)][static_cast<size_t>(x)];
      if (l > 0) w1.add(-v.qpt[0][static_cast<size_t>(l - 1)][static_cast<size_t>(x)]);
      if (!w1.canonicalized(N).empty_or_zero())
        throw DivisionInexact("edge_bivector: numerator not divisible by z+w (qpt)");
      WeightLedger w2 = num.ptq[0][static_cast<size_t>(l)][static_cast<size_t>(x)];
      if (l > 0) w2.add(-v.ptq[0][static_cast<size_t>(l - 1)][static_cast<size_t>(x)]);
      if (!w2.canonicalized(N).empty_or_zero())
        throw DivisionInexact("edge_bivector: numerator not divisible by z+w (ptq)");
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// vertex oracle

VertexOracle::VertexOracle(int q_order) : q_order_(q_order) {}

QSeries VertexOracle::p11_series() const {
  const YYGenerators& g = yy_generators(q_order_);
  QSeries p11 = Rational(-1, 2) * g.A1 + Rational(-31, 3) * g.B1 +
                Rational(1, 12) * g.Y +
                QSeries::constant(Rational(-13, 6), q_order_);
  if (!p11_perturb_a_.is_zero()) p11 += p11_perturb_a_ * g.A1;
  return p11;
}

void VertexOracle::set_table_entry(int g, InsKey key, QSeries value) {
  std::sort(key.begin(), key.end());
  table_[{g, std::move(key)}] = std::move(value);
}

QSeries VertexOracle::correlator(int g, InsKey ins) const {
  std::sort(ins.begin(), ins.end());
  auto it = table_.find({g, ins});
  if (it != table_.end()) return it->second.truncated(q_order_);
  int n = static_cast<int>(ins.size());
  long adeg = 0, kdeg = 0;
  for (auto [a, k] : ins) {
    adeg += a;
    kdeg += k;
  }
  if (g == 0 && n == 3) {
    if (kdeg > 0) return QSeries::zero(q_order_);  // psibar vanishes on M03
    if (adeg != 3) return QSeries::zero(q_order_);  // dimension
    const QuinticIData& qi = quintic_I(q_order_);
    if (ins[0].first == 1 && ins[1].first == 1 && ins[2].first == 1)
      return Rational(5) * (qi.I22 * qi.I11.inverse());
    return QSeries::constant(5, q_order_);  // {0,1,2} or {0,0,3} pairing patterns
  }
  if (g == 1 && n == 1) {
    auto [a, k] = ins[0];
    if (a == 1 && k == 0) {
      if (h11_override_) return h11_override_->truncated(q_order_);
      const QuinticIData& qi = quintic_I(q_order_);
      return p11_series() * qi.I11.inverse();
    }
    if (a == 0 && k == 1)
      return QSeries::constant(Rational(-200, 24), q_order_);  // chi/24
    return QSeries::zero(q_order_);
  }
  // safe reductions: a unit insertion with no psibar in genus zero vanishes
  // for n >= 4 (string), and a pure dilaton slot reduces when every other
  // slot is psibar-free.
  if (g == 0 && n >= 4 && kdeg == 0) {
    for (auto [a, k] : ins)
      if (a == 0 && k == 0) return QSeries::zero(q_order_);
  }
  {
    bool others_plain = true;
    int dilaton_slot = -1;
    for (int i = 0; i < n; ++i) {
      if (ins[static_cast<size_t>(i)] == std::make_pair(0, 1) && dilaton_slot < 0) {
        dilaton_slot = i;
        continue;
      }
      if (ins[static_cast<size_t>(i)].second != 0) others_plain = false;
    }
    if (dilaton_slot >= 0 && others_plain && n >= 2 && !(g == 1 && n == 1)) {
      InsKey rest;
      for (int i = 0; i < n; ++i)
        if (i != dilaton_slot) rest.push_back(ins[static_cast<size_t>(i)]);
      if (2 * g - 2 + (n - 1) > 0)
        return Rational(2 * g - 2 + (n - 1)) * correlator(g, rest);
    }
  }
  throw OracleMissing("VertexOracle: no entry for g=" + std::to_string(g) +
                      " n=" + std::to_string(n));
}

// ---------------------------------------------------------------------------
// assembler

GraphAssembler::GraphAssembler(const RFactorization& rf, VertexOracle oracle,
                               const NmspFrontier* frontier)
    : rf_(rf), oracle_(std::move(oracle)), frontier_(frontier),
      bivec_(edge_bivector(rf, std::max(1, (rf.K_max() - 1) / 2))),
      tails_(rf.tails()) {}

BlockVecZ GraphAssembler::leg_insertion(const std::map<int, StateVector>& tau) const {
  const StateSpace& ss = rf_.space();
  bool constant = tau.size() == 1 && tau.begin()->first == 0;
  std::map<int, StateVector> plus;
  if (constant) {
    plus = tau;
  } else {
    if (!frontier_)
      throw ConfigInvalid("leg_insertion: z-dependent insertions need the frontier");
    // [S^M(z^-) tau(z)]_+ in the p-basis
    int topt = tau.rbegin()->first;
    for (int e = 0; e <= topt; ++e) {
      StateVector ue = ss.zero_vector();
      for (const auto& [et, vt] : tau) {
        int need = e - et;
        if (need > 0) continue;
        const ZMatrix& s = frontier_->S();
        if (need < s.zmin()) throw WindowUnderflow("leg_insertion: S window");
        for (int i = 0; i < ss.dim(); ++i)
          for (int j = 0; j < ss.dim(); ++j) {
            const QSeries& sij = s.at(need, i, j);
            if (sij.is_zero()) continue;
            ue[static_cast<size_t>(i)] += sij * vt[static_cast<size_t>(j)];
          }
      }
      plus[e] = std::move(ue);
    }
  }
  // to block coordinates, then R^{-1}
  int topt = plus.rbegin()->first;
  BlockVecZ arg = BlockVecZ::zero(topt, ss.q_order());
  for (const auto& [e, vec] : plus) {
    auto h = ss.restrict_Q(vec);
    for (int a = 0; a < 4; ++a) arg.h[static_cast<size_t>(e)][static_cast<size_t>(a)] = h[static_cast<size_t>(a)];
    arg.pt[static_cast<size_t>(e)] = ss.restrict_pt(vec);
  }
  return rf_.R_inv_op().apply(arg);
}

BlockVecZ GraphAssembler::leg_insertion_p(int m) const {
  std::map<int, StateVector> tau{{0, rf_.space().basis_vector(m)}};
  return leg_insertion(tau);
}

QSeries GraphAssembler::vertex_value_Q(int g, const std::vector<SlotTerm>& slots) const {
  const StateSpace& ss = rf_.space();
  int order = ss.q_order();
  int n = static_cast<int>(slots.size());
  if (3 * g - 3 + n >= ss.N() - 2)
    throw ConfigInvalid("vertex_value_Q: T~ insertions not negligible at this size");
  VertexOracle::InsKey key;
  QSeries coeff = QSeries::one(order);
  for (const auto& s : slots) {
    if (s.is_pt) return QSeries::zero(order);
    key.push_back({s.index_or_weight, s.zpow});
    coeff *= s.coeff;
  }
  if (coeff.is_zero()) return QSeries::zero(order);
  QSeries corr = oracle_.correlator(g, key);
  if (corr.is_zero()) return QSeries::zero(order);
  const QuinticIData& qi = quintic_I(order);
  QSeries i0inv = qi.I0.inverse();
  QSeries pre = QSeries::one(order);
  int e = 2 * g - 2 + n;
  for (int i = 0; i < std::abs(e); ++i) pre *= (e > 0 ? i0inv : qi.I0);
  return pre * corr * coeff;
}

QSeries GraphAssembler::vertex_value_pt(int g, const std::vector<SlotTerm>& slots) const {
  const StateSpace& ss = rf_.space();
  int N = ss.N();
  int order = ss.q_order();
  int n = static_cast<int>(slots.size());
  int dim0 = 3 * g - 3 + n;
  int ksum = 0;
  WeightLedger base(WeightedSeries(0, QSeries::one(order)));
  for (const auto& s : slots) {
    if (!s.is_pt) return QSeries::zero(order);
    ksum += s.zpow;
    base = base * WeightLedger(WeightedSeries(s.index_or_weight, s.coeff));
  }
  if (base.empty_or_zero()) return QSeries::zero(order);
  // prefactors: L^{((N+3)/2)(2g-2+n)} and Pi^{1-g}, Pi = -(5/N) L^3 L_a^{-3}
  QSeries lpre = ss.L_power((N + 3) / 2 * (2 * g - 2 + n));
  WeightedSeries pi(-3, Rational(-5, BigInt(N)) * ss.L_power(3));
  WeightLedger pref(WeightedSeries(0, lpre));
  int e = 1 - g;
  for (int i = 0; i < std::abs(e); ++i) {
    if (e > 0)
      pref = pref * WeightLedger(pi);
    else
      pref = pref * WeightLedger(WeightedSeries(3, Rational(-BigInt(N), 5) * ss.L_power(-3)));
  }
  base = base * pref;

  // T~ insertion sum: m extra slots with psibar powers l_s >= 2 and
  // sum k_i + sum l_s = dim0 + m. Ordered tuples with the 1/m! factor.
  WeightLedger total;
  const auto& tt = tails_.Tt_pt;
  int ttmax = static_cast<int>(tt.size()) - 1;
  int mmax = std::max(0, dim0 - ksum);
  for (int m = 0; m <= mmax; ++m) {
    // ordered tuples (l_1..l_m), each 2..ttmax, sum = dim0 + m - ksum
    std::vector<int> ls(static_cast<size_t>(std::max(m, 1)));
    Rational mfact_inv = Rational(factorial(static_cast<unsigned>(m))).inverse();
    std::function<void(int, int)> rec2 = [&](int pos, int left) {
      if (pos == m) {
        if (left != 0) return;
        std::vector<int> exps;
        for (const auto& s : slots) exps.push_back(s.zpow);
        for (int i = 0; i < m; ++i) exps.push_back(ls[static_cast<size_t>(i)]);
        Rational integral = psi_integral(g, exps);
        if (integral.is_zero()) return;
        WeightLedger term = base;
        for (int i = 0; i < m; ++i) term = term * tt[static_cast<size_t>(ls[static_cast<size_t>(i)])];
        total.add(term.scaled(integral * mfact_inv));
        return;
      }
      for (int l = 2; l <= std::min(ttmax, left); ++l) {
        ls[static_cast<size_t>(pos)] = l;
        rec2(pos + 1, left - l);
      }
    };
    rec2(0, dim0 + m - ksum);
  }
  return total.hour_summed(N, order);
}

QSeries GraphAssembler::graph_sum_01(int g, const std::vector<StateVector>& insertions) const {
  const StateSpace& ss = rf_.space();
  int order = ss.q_order();
  int n = static_cast<int>(insertions.size());
  if (ss.N() <= 3 * g - 3 + n + 3)
    throw ConfigInvalid("graph_sum_01: requires N > 3g-3+n+3");
  // leg data
  std::vector<BlockVecZ> legs;
  for (const auto& tau : insertions)
    legs.push_back(leg_insertion({{0, tau}}));

  QSeries total = QSeries::zero(order);
  for (const auto& cg : enumerate_stable(g, n)) {
    const StableGraph& gr = cg.graph;
    int nv = static_cast<int>(gr.vertices.size());
    // slots per vertex: list of (sum of SlotTerms)
    std::vector<std::vector<std::vector<SlotTerm>>> slots(static_cast<size_t>(nv));
    // legs
    bool dead = false;
    for (int li = 0; li < n && !dead; ++li) {
      int v = gr.legs[static_cast<size_t>(li)];
      bool vq = gr.vertices[static_cast<size_t>(v)].locus == Locus::Q;
      std::vector<SlotTerm> sum;
      const BlockVecZ& L = legs[static_cast<size_t>(li)];
      for (int z = 0; z <= L.zdeg(); ++z) {
        if (vq) {
          for (int a = 0; a < 4; ++a) {
            const QSeries& c = L.h[static_cast<size_t>(z)][static_cast<size_t>(a)];
            if (!c.is_zero()) sum.push_back({z, false, a, c});
          }
        } else {
          for (const auto& [w, val] : L.pt[static_cast<size_t>(z)].terms())
            if (!val.is_zero()) sum.push_back({z, true, w, val});
        }
      }
      if (sum.empty()) dead = true;
      slots[static_cast<size_t>(v)].push_back(std::move(sum));
    }
    if (dead) continue;
    // edges: enumerate the separable components of the bivector per edge
    struct EdgeChoice {
      SlotTerm end1, end2;
    };
    std::vector<std::vector<EdgeChoice>> edge_terms;
    for (const auto& [v1, v2] : gr.edges) {
      bool q1 = gr.vertices[static_cast<size_t>(v1)].locus == Locus::Q;
      bool q2 = gr.vertices[static_cast<size_t>(v2)].locus == Locus::Q;
      std::vector<EdgeChoice> choices;
      for (int k = 0; k <= bivec_.K; ++k)
        for (int l = 0; l <= bivec_.K; ++l) {
          if (q1 && q2) {
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b) {
                const QSeries& c = bivec_.qq[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(a)][static_cast<size_t>(b)];
                if (c.is_zero()) continue;
                choices.push_back({{k, false, a, c}, {l, false, b, QSeries::one(order)}});
              }
          } else if (q1 && !q2) {
            for (int a = 0; a < 4; ++a)
              for (const auto& [w, val] : bivec_.qpt[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(a)].terms()) {
                if (val.is_zero()) continue;
                choices.push_back({{k, false, a, QSeries::one(order)}, {l, true, w, val}});
              }
          } else if (!q1 && q2) {
            for (int b = 0; b < 4; ++b)
              for (const auto& [w, val] : bivec_.ptq[static_cast<size_t>(k)][static_cast<size_t>(l)][static_cast<size_t>(b)].terms()) {
                if (val.is_zero()) continue;
                choices.push_back({{k, true, w, val}, {l, false, b, QSeries::one(order)}});
              }
          } else {
            for (const auto& [ww, val] : bivec_.ptpt[static_cast<size_t>(k)][static_cast<size_t>(l)].terms()) {
              if (val.is_zero()) continue;
              choices.push_back({{k, true, ww.first, val}, {l, true, ww.second, QSeries::one(order)}});
            }
          }
        }
      edge_terms.push_back(std::move(choices));
    }
    // enumerate edge choices; slots for edges appended per choice
    QSeries graph_total = QSeries::zero(order);
    std::function<void(size_t, std::vector<std::vector<std::vector<SlotTerm>>>&)> rec_edge =
        [&](size_t ei, std::vector<std::vector<std::vector<SlotTerm>>>& cur) {
          if (ei == edge_terms.size()) {
            // evaluate product of vertex values (each slot already a sum:
            // expand multilinearly inside the vertex evaluator)
            QSeries prod = QSeries::one(order);
            for (int v = 0; v < nv && !prod.is_zero(); ++v) {
              // expand the slot sums into single-term assignments
              QSeries vertex_acc = QSeries::zero(order);
              const auto& vslots = cur[static_cast<size_t>(v)];
              std::vector<SlotTerm> assign(vslots.size());
              std::function<void(size_t)> rec_slot = [&](size_t si) {
                if (si == vslots.size()) {
                  if (gr.vertices[static_cast<size_t>(v)].locus == Locus::Q)
                    vertex_acc += vertex_value_Q(gr.vertices[static_cast<size_t>(v)].genus, assign);
                  else
                    vertex_acc += vertex_value_pt(gr.vertices[static_cast<size_t>(v)].genus, assign);
                  return;
                }
                for (const auto& t : vslots[si]) {
                  assign[si] = t;
                  rec_slot(si + 1);
                }
              };
              rec_slot(0);
              prod *= vertex_acc;
            }
            graph_total += prod;
            return;
          }
          auto [v1, v2] = gr.edges[ei];
          for (const auto& ch : edge_terms[ei]) {
            cur[static_cast<size_t>(v1)].push_back({ch.end1});
            cur[static_cast<size_t>(v2)].push_back({ch.end2});
            rec_edge(ei + 1, cur);
            cur[static_cast<size_t>(v1)].pop_back();
            cur[static_cast<size_t>(v2)].pop_back();
          }
        };
    rec_edge(0, slots);
    total += Rational(1, BigInt(cg.aut)) * graph_total;
  }
  return total;
}

QSeries GraphAssembler::graph_sum_01_p(int g, const std::vector<int>& p_powers) const {
  std::vector<StateVector> ins;
  for (int m : p_powers) ins.push_back(rf_.space().basis_vector(m));
  return graph_sum_01(g, ins);
}

// ---------------------------------------------------------------------------
// bipartite side

WeightLedger unstable_pairing(const NmspFrontier& fr, const StateVector& tau, int a) {
  const StateSpace& ss = fr.space();
  int N = ss.N();
  const SpecializedS& s = fr.specialized_S(a);
  // (tau, S^alpha_a)^tw = sum_i tau_i script-S_{a;i} via eta
  WeightLedger out;
  for (int i = 0; i <= N + 3; ++i) {
    if (tau[static_cast<size_t>(i)].is_zero()) continue;
    for (int j = 0; j <= N + 3; ++j) {
      Rational e = ss.eta(i, j);
      if (e.is_zero()) continue;
      QSeries val = e * (tau[static_cast<size_t>(i)] * s.g[static_cast<size_t>(j)]);
      if (!val.is_zero()) out.add(from_phase(val, j, N));
    }
  }
  return out.canonicalized(N);
}

WeightLedger unstable_two_point_same_hour(const NmspFrontier& fr, int a1, int a2) {
  const StateSpace& ss = fr.space();
  int N = ss.N();
  if (a1 + a2 == 0) throw PoleCollision("unstable_two_point: degenerate kernel");
  const SpecializedS& s1 = fr.specialized_S(a1);
  const SpecializedS& s2 = fr.specialized_S(a2);
  WeightLedger pairing;
  for (int i = 0; i <= N + 3; ++i)
    for (int j = 0; j <= N + 3; ++j) {
      Rational e = ss.eta(i, j);
      if (e.is_zero()) continue;
      QSeries val = e * (s1.g[static_cast<size_t>(i)] * s2.g[static_cast<size_t>(j)]);
      if (!val.is_zero()) pairing.add(from_phase(val, i + j, N));
    }
  // kernel 1/(5t_a/a1 + 5t_a/a2) = -(a1 a2/(5(a1+a2))) phase(-1)
  WeightedSeries kern = from_phase(
      QSeries::constant(Rational(-BigInt(a1) * a2, BigInt(5) * (a1 + a2)), ss.q_order()), -1, N);
  return (pairing * WeightLedger(kern)).canonicalized(N);
}

WeightLedger black_edge_factor(const StateSpace& ss, int a) {
  int N = ss.N();
  int order = ss.q_order();
  // A~_e with u = -a/5: prod_{j<=ceil(a/5)-1} (t_a (5j-a)/a)^5
  //   / [prod_{j<=a} (5j/a) t_a * prod_{j<=floor(a/5)} (-5j/a) t_a]
  Rational val = 1;
  long tpow = 0;
  int top = (a + 4) / 5 - 1;
  for (int j = 1; j <= top; ++j) {
    val *= Rational(5 * j - a, a).pow(5);
    tpow += 5;
  }
  for (int j = 1; j <= a; ++j) {
    val /= Rational(5 * j, a);
    tpow -= 1;
  }
  for (int j = 1; j <= a / 5; ++j) {
    val /= Rational(-5 * j, a);
    tpow -= 1;
  }
  // t_alpha^tpow = (-1)^tpow phase(tpow)
  if (tpow % 2 != 0) val = -val;
  return WeightLedger(from_phase(QSeries::constant(val, order), static_cast<int>(tpow), N));
}

int black_vertex_degree_bound(int g_v, int d_inf, const std::vector<int>& a_mult) {
  // d_inf + (2g - 2 - sum(a_e - 1))/5, with a broad edge (5 | a_e) counted
  // through its primed factor as a_e - 2 (the special one-edge
  // configuration is a constant exactly at this bound).
  int s = 0;
  for (int a : a_mult) s += (a % 5 == 0) ? a - 2 : a - 1;
  int num = 5 * d_inf + 2 * g_v - 2 - s;
  return (num >= 0) ? num / 5 : -(((-num) + 4) / 5);
}

WeightLedger black_vertex(const NmspFrontier& fr, int g_v, int d_inf,
                          const std::vector<int>& a_mult, const BlackVertexData& fjrw,
                          bool case2_only) {
  const StateSpace& ss = fr.space();
  int N = ss.N();
  int order = ss.q_order();
  int m = static_cast<int>(a_mult.size());

  auto tphase = [&](int pow, const Rational& c) {
    Rational v = c;
    if (pow % 2 != 0) v = -v;  // t_alpha^pow = (-1)^pow (zeta t)^pow
    return WeightLedger(from_phase(QSeries::constant(v, order), pow, N));
  };

  // sum over configurations (ell, b-vector) with b_i >= 2 (b_i = 1 terms
  // vanish) and the degree balance
  //   d_0Gamma = d_inf + (2g - 2 - sum(a_r - 1) - sum(b_i - 1))/5 >= 0;
  // the special (m, ell) = (1, 0) configuration replaces the edge factor by
  // the primed form and balances with a_eff = a_1 - 1.
  int aslack = 0;
  for (int a : a_mult) aslack += a - 1;

  WeightLedger total;

  // (m, ell) = (1, 0) closed form: a1 = 5 nu, d_inf = nu.
  if (g_v == 0 && m == 1 && a_mult[0] % 5 == 0 && d_inf == a_mult[0] / 5) {
    int nu = a_mult[0] / 5;
    Rational val = 1;
    long tpow = 0;
    for (int j = 1; j <= nu - 1; ++j) {
      val *= Rational(5 * j - 5 * nu + 1, 5 * nu - 1).pow(5);
      tpow += 5;
    }
    for (int j = 1; j <= 5 * nu - 1; ++j) {
      val /= Rational(5 * j, 5 * nu - 1);
      tpow -= 1;
    }
    for (int j = 1; j <= nu; ++j) {
      val /= Rational(-5 * j, 5 * nu - 1);
      tpow -= 1;
    }
    WeightLedger r = tphase(static_cast<int>(tpow), val);
    r = r * tphase(1, Rational(5));                   // 5 t_a
    r = r * tphase(1, Rational(5, BigInt(1 - a_mult[0])));
    r = r.scaled(Rational(1, BigInt(a_mult[0] - 1)));
    r = r * tphase(1, Rational(1, BigInt(N)));        // 1/prod(t_j - t_a)
    total.add(r.canonicalized(N));
  }

  // enumerate ell and b-tuples (nondecreasing to count multisets once)
  int bslack_max = 5 * d_inf + 2 * g_v - 2 - aslack;
  std::vector<int> bs;
  std::function<void(int, int)> rec_b = [&](int minb, int slack_left) {
    int ell = static_cast<int>(bs.size());
    // close only when the degree balance is integral and >= 0
    int num5 = 5 * d_inf + 2 * g_v - 2 - aslack;
    int bsl = 0;
    for (int b : bs) bsl += b - 1;
    int d0x5 = num5 - bsl;
    if (d0x5 >= 0 && d0x5 % 5 == 0) {
      int d0 = d0x5 / 5;
      bool case20 = (g_v == 0 && m + ell == 2 && d0 == 0);
      bool stable_cfg = !(g_v == 0 && m + ell <= 2);
      if (case20 && m == 2 && ell == 0) {
        int a1 = a_mult[0], a2 = a_mult[1];
        if (a1 % 5 != 0 && (a1 + a2) % 5 == 0) {
          WeightLedger r = black_edge_factor(ss, a1) * black_edge_factor(ss, a2);
          r = r.scaled(Rational(1, BigInt(a1) * a2));
          r = r * tphase(-1, Rational(-BigInt(a1) * a2, BigInt(a1) + a2));
          r = r * tphase(2, Rational(25));
          r = r * tphase(7, Rational(-5, BigInt(N)));  // -5 t^6/prod = -(5/N) t^7
          total.add(r.canonicalized(N));
        }
      } else if (case20 && m == 1 && ell == 1) {
        int a1 = a_mult[0], b1 = bs[0];
        if (a1 % 5 != 0 && (a1 + b1) % 5 == 0) {
          WeightLedger r = black_edge_factor(ss, a1) * black_edge_factor(ss, b1);
          r = r.scaled(Rational(1, BigInt(a1) * b1));
          r = r * tphase(-1, Rational(-BigInt(a1) * b1, BigInt(a1) + b1));
          r = r * tphase(1, Rational(5));
          r = r * tphase(7, Rational(-5, BigInt(N)));
          r = r * tphase(2, Rational(25, BigInt(b1)));
          r = r.scaled(fr.specialized_S(b1).g[0]);
          total.add(r.canonicalized(N));
        }
      } else if (stable_cfg || d0 > 0) {
        // general configuration: FJRW table entry required
        std::vector<int> akey = a_mult;
        std::sort(akey.begin(), akey.end());
        auto it = fjrw.fjrw.find({g_v, akey, bs});
        if (it == fjrw.fjrw.end() && !case2_only) {
          std::string bstr;
          for (int b : bs) bstr += std::to_string(b) + ",";
          throw MissingFjrw("black_vertex: missing FJRW entry (g=" +
                            std::to_string(g_v) + ", b={" + bstr + "})");
        }
        if (it != fjrw.fjrw.end()) {
        // |Aut b| for the multiset
        long autb = 1;
        for (size_t i = 0, j = 0; i < bs.size(); i = j) {
          j = i;
          while (j < bs.size() && bs[j] == bs[i]) ++j;
          for (size_t c = 2; c <= j - i; ++c) autb *= static_cast<long>(c);
        }
        WeightLedger r = it->second.scaled(Rational(1, BigInt(autb)));
        for (int a : a_mult) {
          r = r * black_edge_factor(ss, a);
          r = r.scaled(Rational(1, BigInt(a)));
          r = r * tphase(1, Rational(5));
        }
        for (int b : bs) {
          r = r * black_edge_factor(ss, b);
          r = r.scaled(Rational(1, BigInt(b)));
          // (5 t_b)(5 t_b / b) script-S_{b;0}
          r = r * tphase(2, Rational(25, BigInt(b)));
          r = r.scaled(fr.specialized_S(b).g[0]);
        }
        total.add(r.canonicalized(N));
        }
      }
    }
    // extend the b-tuple
    for (int b = minb; b - 1 <= slack_left; ++b) {
      bs.push_back(b);
      rec_b(b, slack_left - (b - 1));
      bs.pop_back();
    }
  };
  if (bslack_max >= 0) rec_b(2, bslack_max);
  return total.canonicalized(N);
}

// ---------------------------------------------------------------------------
// P_{g,n} and polynomiality

QSeries pg_series(int g, int n, int order) {
  const YYGenerators& gen = yy_generators(order);
  QSeries p;
  if (g == 0 && n >= 3) {
    p = QSeries::one(order);
    for (int i = 3; i < n; ++i) p = pg_next(p, 0, i);
    return p;
  }
  if (g == 1 && n >= 1) {
    p = Rational(-1, 2) * gen.A1 + Rational(-31, 3) * gen.B1 +
        Rational(1, 12) * gen.Y + QSeries::constant(Rational(-13, 6), order);
    for (int i = 1; i < n; ++i) p = pg_next(p, 1, i);
    return p;
  }
  throw ConfigInvalid("pg_series: supplied only for g=0 (n>=3) and g=1 (n>=1)");
}

QSeries pg_next(const QSeries& pgn, int g, int n) {
  int order = pgn.order();
  const YYGenerators& gen = yy_generators(order);
  QSeries factor = Rational(2 * (g - 1)) * gen.B1 +
                   QSeries::constant(g - 1, order) - Rational(g - 1) * gen.Y;
  return D(pgn) + factor * pgn - Rational(n) * (gen.A1 * pgn);
}

PolyCheck polynomiality_check(const QSeries& series, int g, int N,
                              const std::vector<int>& m_powers,
                              const std::vector<int>& k_powers) {
  (void)k_powers;
  long msum = 0;
  for (int m : m_powers) msum += m;
  long num = static_cast<long>(g - 1) * N + 3 * g - 3 + msum;
  PolyCheck out;
  out.bound = static_cast<int>(num >= 0 ? num / N : -1);
  out.ok = true;
  for (int d = out.bound + 1; d <= series.order(); ++d)
    if (!series.at(d).is_zero()) {
      out.ok = false;
      out.first_violation = d;
      break;
    }
  return out;
}

SolveResult polynomiality_solve_genus1(const RFactorization& rf, int insertion_p) {
  int order = rf.space().q_order();
  VertexOracle o0(order), o1(order);
  o0.override_h11(QSeries::zero(order));
  o1.override_h11(QSeries::one(order));
  GraphAssembler a0(rf, std::move(o0));
  GraphAssembler a1(rf, std::move(o1));
  QSeries base = a0.graph_sum_01_p(1, {insertion_p});
  QSeries with1 = a1.graph_sum_01_p(1, {insertion_p});
  QSeries c = with1 - base;  // multiplies u(q) through the series product
  if (c.at(0).is_zero())
    throw Underdetermined("polynomiality_solve: vanishing leading coefficient");
  // require [base + c * u]_d = 0 for d >= 1 with u(0) = 0; the solution
  // family is u + const * c^{-1} (the kernel of the constancy condition).
  SolveResult res;
  res.free_constants = 1;
  QSeries u = QSeries::zero(order);
  for (int d = 1; d <= order; ++d) {
    QSeries cu = c * u;
    Rational needed = -(base.at(d) + cu.at(d)) / c.at(0);
    u.set(d, needed);
  }
  res.u0 = u;
  res.kernel = c.at(0) * c.inverse();
  return res;
}

}  // namespace mspgw
