#include "mspgw/nmsp.hpp"

namespace mspgw {

namespace {

// Exact rational-coefficient element of the reduced p-ring tensored with a
// finite z-Laurent window: val[p][z - floor]. Only used while expanding the
// I-function, where all q-dependence is an overall monomial.
struct PZ {
  int dim, floor, top;
  std::vector<std::vector<Rational>> val;  // [p][z-floor]

  PZ(int dim_, int floor_, int top_)
      : dim(dim_), floor(floor_), top(top_),
        val(static_cast<size_t>(dim_),
            std::vector<Rational>(static_cast<size_t>(top_ - floor_ + 1))) {}

  static PZ one(int dim_, int floor_, int top_) {
    PZ x(dim_, floor_, top_);
    if (0 >= floor_ && 0 <= top_) x.val[0][static_cast<size_t>(-floor_)] = 1;
    return x;
  }
};

// Multiply by coeff * p^dp z^dz with the reduction p^{N+4} = -p^4.
void add_shifted(PZ& out, const PZ& in, int N, int dp, int dz, const Rational& coeff) {
  for (int p = 0; p < in.dim; ++p) {
    int pp = p + dp, sign = 1;
    while (pp >= N + 4) {
      pp -= N;
      sign = -sign;
    }
    for (int z = in.floor; z <= in.top; ++z) {
      const Rational& v = in.val[static_cast<size_t>(p)][static_cast<size_t>(z - in.floor)];
      if (v.is_zero()) continue;
      int zz = z + dz;
      if (zz < out.floor || zz > out.top) continue;
      Rational add = coeff * v;
      if (sign < 0) add = -add;
      out.val[static_cast<size_t>(pp)][static_cast<size_t>(zz - out.floor)] += add;
    }
  }
}

// Multiply in place by (1 + c p/z)^r for integer r (binomial series in p/z).
void mul_binomial(PZ& x, int N, const Rational& c, long long r) {
  PZ out(x.dim, x.floor, x.top);
  int depth = x.top - x.floor;
  for (int i = 0; i <= depth; ++i) {
    Rational coeff = binomial(Rational(r), static_cast<unsigned>(i)) * c.pow(i);
    if (coeff.is_zero()) continue;
    add_shifted(out, x, N, i, -i, coeff);
  }
  x = std::move(out);
}

}  // namespace

Rational qde_band_constant(int j, int N) {
  if (j == N) return 120;
  if (j == N + 1) return 770;
  if (j == N + 2) return 1345;
  if (j == N + 3) return 770;
  return 0;
}

NmspFrontier::NmspFrontier(int N, int q_order, int z_min)
    : ss_(N, q_order), q_order_(q_order), z_min_(z_min),
      floor_(z_min - (N + 3)) {
  if (z_min > -1) throw ConfigInvalid("NmspFrontier: z_min must be <= -1");
  build_I();
  build_birkhoff();
}

void NmspFrontier::build_I() {
  int N = ss_.N();
  for (int e = floor_; e <= 1; ++e) imap_[e] = ss_.zero_vector();
  // d = 0 term: z * 1.
  imap_[1][0] = QSeries::one(q_order_);
  // q^d term sits at z-orders <= 1 - N d.
  for (int d = 1; 1 - N * d >= floor_ && d <= q_order_; ++d) {
    int top = 1 - N * d;
    PZ acc = PZ::one(N + 4, floor_ - top, 0);  // relative z-orders
    for (int m = 1; m <= 5 * d; ++m) mul_binomial(acc, N, Rational(5, m), 1);
    for (int m = 1; m <= d; ++m) mul_binomial(acc, N, Rational(1, m), -5);
    // each m contributes sum_j (-1)^j m^{-Nj} z^{-Nj} (1+p/(mz))^{-N(j+1)}
    for (int m = 1; m <= d; ++m) {
      PZ factor(N + 4, acc.floor, 0);
      int jmax = (0 - acc.floor) / N;
      for (int j = 0; j <= jmax; ++j) {
        PZ unit = PZ::one(N + 4, acc.floor, 0);
        mul_binomial(unit, N, Rational(1, m), -static_cast<long long>(N) * (j + 1));
        Rational coeff = Rational(1, BigInt(m)).pow(static_cast<long long>(N) * j);
        if (j % 2 != 0) coeff = -coeff;
        add_shifted(factor, unit, N, 0, -N * j, coeff);
      }
      PZ out(N + 4, acc.floor, 0);
      for (int p = 0; p < N + 4; ++p)
        for (int z = factor.floor; z <= 0; ++z) {
          const Rational& v = factor.val[static_cast<size_t>(p)][static_cast<size_t>(z - factor.floor)];
          if (v.is_zero()) continue;
          add_shifted(out, acc, N, p, z, v);
        }
      acc = std::move(out);
    }
    Rational lead(factorial(static_cast<unsigned>(5 * d)),
                  boost::multiprecision::pow(factorial(static_cast<unsigned>(d)),
                                             static_cast<unsigned>(5 + N)));
    for (int p = 0; p < N + 4; ++p)
      for (int rz = acc.floor; rz <= 0; ++rz) {
        const Rational& v = acc.val[static_cast<size_t>(p)][static_cast<size_t>(rz - acc.floor)];
        if (v.is_zero()) continue;
        int e = top + rz;
        if (e < floor_) continue;
        QSeries& slot = imap_[e][static_cast<size_t>(p)];
        slot.set(d, slot.at(d) + lead * v);
      }
  }
}

void NmspFrontier::build_birkhoff() {
  int N = ss_.N();
  int dim = N + 4;
  auto zero_col = [&](int lo) {
    std::map<int, StateVector> c;
    for (int e = lo; e <= 0; ++e) c[e] = ss_.zero_vector();
    return c;
  };

  std::vector<std::map<int, StateVector>> cols(static_cast<size_t>(dim));
  // column 0 = z^{-1} I^M
  cols[0] = zero_col(floor_);
  for (int e = floor_; e <= 0; ++e) {
    auto it = imap_.find(e + 1);
    if (it != imap_.end()) cols[0][e] = it->second;
  }

  a_m_.assign(static_cast<size_t>(dim),
              std::vector<QSeries>(static_cast<size_t>(dim), QSeries::zero(q_order_)));

  for (int k = 0; k <= N + 3; ++k) {
    int lo = floor_ + k;
    // W = D_p col_k = p col_k + z D(col_k), valid on [lo+1, 0].
    std::map<int, StateVector> w = zero_col(lo + 1);
    for (int e = lo + 1; e <= 0; ++e) {
      StateVector& we = w[e];
      const StateVector& ce = cols[static_cast<size_t>(k)].at(e);
      for (int p = 0; p < dim; ++p) {
        if (ce[static_cast<size_t>(p)].is_zero()) continue;
        auto [pp, sign] = ss_.reduce_p_power(p + 1);
        QSeries add = ce[static_cast<size_t>(p)];
        if (sign < 0) add = -add;
        we[static_cast<size_t>(pp)] += add;
      }
      auto below = cols[static_cast<size_t>(k)].find(e - 1);
      if (below != cols[static_cast<size_t>(k)].end())
        for (int p = 0; p < dim; ++p)
          we[static_cast<size_t>(p)] += D(below->second[static_cast<size_t>(p)]);
    }
    // The would-be z^{+1} part is D of the z^0 part, which is constant.
    for (int p = 0; p < dim; ++p)
      if (!D(cols[static_cast<size_t>(k)].at(0)[static_cast<size_t>(p)]).is_zero())
        throw EliminationFailure("birkhoff: z^0 part of a column is not constant");

    // Eliminate the z^{>=0} part against previous columns.
    StateVector v = w.at(0);
    int next = k + 1;
    for (int i = 0; i < dim; ++i) {
      const QSeries& vi = v[static_cast<size_t>(i)];
      if (vi.is_zero()) continue;
      if (i == next && next < dim) {
        if (vi != QSeries::one(q_order_))
          throw EliminationFailure("birkhoff: pivot coefficient is not 1");
        a_m_[static_cast<size_t>(i)][static_cast<size_t>(k)] += vi;
        continue;
      }
      if (i > k)
        throw EliminationFailure("birkhoff: unexpected support at index " +
                                 std::to_string(i) + " for column " + std::to_string(k));
      a_m_[static_cast<size_t>(i)][static_cast<size_t>(k)] += vi;
    }
    if (k == N + 3) {
      // No next column: W must be spanned by the existing ones.
      std::map<int, StateVector> resid = w;
      for (int i = 0; i < dim; ++i) {
        const QSeries& li = v[static_cast<size_t>(i)];
        if (li.is_zero()) continue;
        for (int e = lo + 1; e <= 0; ++e) {
          auto it = cols[static_cast<size_t>(i)].find(e);
          if (it == cols[static_cast<size_t>(i)].end()) continue;
          for (int p = 0; p < dim; ++p)
            resid[e][static_cast<size_t>(p)] -= li * it->second[static_cast<size_t>(p)];
        }
      }
      for (int e = lo + 1; e <= 0; ++e)
        for (int p = 0; p < dim; ++p)
          if (!resid[e][static_cast<size_t>(p)].is_zero())
            throw EliminationFailure("birkhoff: last column relation fails");
      break;
    }
    // col_{k+1} = W - sum_i lambda_i col_i with lambda from v (minus pivot).
    std::map<int, StateVector> cnew = zero_col(lo + 1);
    for (int e = lo + 1; e <= 0; ++e) cnew[e] = w.at(e);
    for (int i = 0; i < dim; ++i) {
      if (i == next) continue;
      const QSeries& li = v[static_cast<size_t>(i)];
      if (li.is_zero()) continue;
      for (int e = lo + 1; e <= 0; ++e) {
        auto it = cols[static_cast<size_t>(i)].find(e);
        if (it == cols[static_cast<size_t>(i)].end()) continue;
        for (int p = 0; p < dim; ++p)
          cnew[e][static_cast<size_t>(p)] -= li * it->second[static_cast<size_t>(p)];
      }
    }
    // sanity: new column's z^0 part is exactly phi_{k+1}
    for (int p = 0; p < dim; ++p) {
      const QSeries& c0 = cnew.at(0)[static_cast<size_t>(p)];
      if (p == next ? (c0 != QSeries::one(q_order_)) : !c0.is_zero())
        throw EliminationFailure("birkhoff: normalized column shape wrong");
    }
    cols[static_cast<size_t>(next)] = std::move(cnew);
  }

  // Assemble S^* on the common window [floor_ + N + 3, 0] = [z_min_, 0].
  s_star_ = ZMatrix(dim, z_min_, 0, q_order_, false, true);
  for (int e = z_min_; e <= 0; ++e)
    for (int j = 0; j < dim; ++j) {
      const StateVector& ce = cols[static_cast<size_t>(j)].at(e);
      for (int i = 0; i < dim; ++i) s_star_.set(e, i, j, ce[static_cast<size_t>(i)]);
    }

  // S = eta^{-1} (S^*)^T eta (the pairing adjoint), same window.
  std::vector<std::vector<Rational>> etainv(static_cast<size_t>(dim),
                                            std::vector<Rational>(static_cast<size_t>(dim)));
  for (int j = 0; j < dim; ++j) {
    StateVector dj = ss_.dual_basis(j);
    for (int i = 0; i < dim; ++i) etainv[static_cast<size_t>(i)][static_cast<size_t>(j)] = dj[static_cast<size_t>(i)].at(0);
  }
  s_ = ZMatrix(dim, z_min_, 0, q_order_, false, true);
  for (int e = z_min_; e <= 0; ++e)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        // S_{ij} = sum_{k,l} etainv_{ik} (S^*)_{lk} eta_{lj}
        QSeries acc = QSeries::zero(q_order_);
        for (int l = 0; l < dim; ++l) {
          Rational elj = ss_.eta(l, j);
          if (elj.is_zero()) continue;
          for (int k = 0; k < dim; ++k) {
            const Rational& eik = etainv[static_cast<size_t>(i)][static_cast<size_t>(k)];
            if (eik.is_zero()) continue;
            const QSeries& slk = s_star_.at(e, l, k);
            if (slk.is_zero()) continue;
            acc += (eik * elj) * slk;
          }
        }
        s_.set(e, i, j, acc);
      }
  s_inv_ = s_.inverse();
}

std::vector<std::vector<QSeries>> NmspFrontier::nmsp_qde_matrix() const {
  int N = ss_.N();
  int dim = N + 4;
  std::vector<std::vector<QSeries>> a(static_cast<size_t>(dim),
                                      std::vector<QSeries>(static_cast<size_t>(dim),
                                                           QSeries::zero(q_order_)));
  for (int k = 0; k + 1 < dim; ++k)
    a[static_cast<size_t>(k + 1)][static_cast<size_t>(k)] = QSeries::one(q_order_);
  // band entries (j-N, j-1) = c_j q for j = N..N+3
  for (int j = N; j <= N + 3; ++j)
    a[static_cast<size_t>(j - N)][static_cast<size_t>(j - 1)] =
        QSeries::monomial(1, qde_band_constant(j, N), q_order_);
  // corner (4, N+3) = 120 q + t^N = 120 q - 1
  a[4][static_cast<size_t>(N + 3)] =
      QSeries::monomial(1, 120, q_order_) - QSeries::one(q_order_);
  return a;
}

void NmspFrontier::check_qde() const {
  int dim = ss_.dim();
  // D_p S^* - S^* A^M must vanish where both sides are known:
  // the left side needs S^* at e-1 for the zD part, so check e > z_min_.
  for (int e = z_min_ + 1; e <= 0; ++e)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        QSeries lhs = QSeries::zero(q_order_);
        // (p S^*)_{ij}: p p^k = p^{k+1} folds; row i receives from i-1 and,
        // through the fold p^{N+4} = -p^4, row 4 receives -row N+3... handled
        // by summing over source rows.
        for (int p = 0; p < dim; ++p) {
          auto [pp, sign] = ss_.reduce_p_power(p + 1);
          if (pp != i) continue;
          QSeries t = s_star_.at(e, p, j);
          lhs += (sign < 0) ? -t : t;
        }
        lhs += D(s_star_.at(e - 1, i, j));
        QSeries rhs = QSeries::zero(q_order_);
        for (int l = 0; l < dim; ++l) {
          const QSeries& alj = a_m_[static_cast<size_t>(l)][static_cast<size_t>(j)];
          if (alj.is_zero()) continue;
          rhs += s_star_.at(e, i, l) * alj;
        }
        if (!(lhs - rhs).is_zero())
          throw BirkhoffMismatch("QDE fails at z^" + std::to_string(e) + " entry (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
      }
}

const SpecializedS& NmspFrontier::specialized_S(int a) const {
  auto it = spec_cache_.find(a);
  if (it != spec_cache_.end()) return it->second;
  if (a < 1) throw ConfigInvalid("specialized_S: a >= 1 required");
  int N = ss_.N();
  SpecializedS s;
  s.a = a;
  s.g.assign(static_cast<size_t>(N + 4), QSeries::zero(q_order_));
  // seed: closed form for script-S_{a;0}
  QSeries g0 = QSeries::zero(q_order_);
  g0.set(0, 1);
  int dmax = (a + 4) / 5 - 1;  // ceil(a/5) - 1
  for (int d = 1; d <= dmax && d <= q_order_; ++d) {
    Rational num = 1;
    for (int m = 1; m <= 5 * d; ++m) num *= Rational(m - a);
    num *= Rational(5).pow(5LL * d);
    Rational den = 1;
    for (int m = 1; m <= d; ++m) {
      den *= Rational(5 * m - a).pow(5);
      // (p+mz)^N - t^N at p = -t_alpha, z = 5 t_alpha/a: 1 - (-1)^N x_m^N
      Rational x = Rational(5 * m - a, a).pow(N);
      Rational f = (N % 2 == 0) ? (Rational(1) - x) : (Rational(1) + x);
      den *= f;
    }
    g0.set(d, num / den);
  }
  s.g[0] = g0;
  for (int i = 1; i <= N + 3; ++i) {
    QSeries gi = s.g[static_cast<size_t>(i - 1)] -
                 Rational(5, a) * D(s.g[static_cast<size_t>(i - 1)]);
    Rational c = qde_band_constant(i, N);
    if (!c.is_zero())
      gi += c * (QSeries::monomial(1, 1, q_order_) * s.g[static_cast<size_t>(i - N)]);
    s.g[static_cast<size_t>(i)] = gi;
  }
  auto res = spec_cache_.emplace(a, std::move(s));
  return res.first->second;
}

QSeries NmspFrontier::specialized_S0_oracle(int a) const {
  // (5 t_alpha/a) script-S_{a;0} = I^M(q, z)|_{z = 5 t_alpha/a, p = -t_alpha}.
  // Evaluate term by term with explicit factor cancellation; all t_alpha
  // phases cancel and the d-sum truncates when a numerator factor vanishes.
  int N = ss_.N();
  QSeries out = QSeries::zero(q_order_);
  out.set(0, 1);
  for (int d = 1; d <= q_order_; ++d) {
    bool zero = false;
    for (int m = 1; m <= 5 * d && !zero; ++m)
      if (m == a) zero = true;  // numerator factor (m - a) vanishes
    if (zero) break;
    // term/z = q^d 5^{5d} prod_{m<=5d}(m-a) /
    //          [prod_{m<=d}(5m-a)^5 (1 - (-1)^N ((5m-a)/a)^N)]
    Rational val = Rational(5).pow(5LL * d);
    for (int m = 1; m <= 5 * d; ++m) val *= Rational(m - a);
    for (int m = 1; m <= d; ++m) {
      Rational x = Rational(5 * m - a, a).pow(N);
      Rational f = (N % 2 == 0) ? (Rational(1) - x) : (Rational(1) + x);
      if (f.is_zero() || Rational(5 * m - a).is_zero())
        throw PoleCollision("specialized_S0_oracle: unexpected pole");
      val /= Rational(5 * m - a).pow(5) * f;
    }
    out.set(d, val);
  }
  return out;
}

std::map<int, StateVector> NmspFrontier::leg_contract(
    const std::map<int, StateVector>& tau) const {
  int dim = ss_.dim();
  // u(z) = [S(z) tau(z)]_+ on z-powers 0..topu.
  int topt = tau.empty() ? 0 : tau.rbegin()->first;
  std::map<int, StateVector> u;
  for (int e = 0; e <= topt; ++e) {
    StateVector ue = ss_.zero_vector();
    for (const auto& [et, vt] : tau) {
      int need = e - et;  // z-power of S
      if (need > 0) continue;
      if (need < s_.zmin()) throw WindowUnderflow("leg_contract: S window too small");
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          const QSeries& sij = s_.at(need, i, j);
          if (sij.is_zero()) continue;
          ue[static_cast<size_t>(i)] += sij * vt[static_cast<size_t>(j)];
        }
    }
    u[e] = std::move(ue);
  }
  // result = [S^{-1}(z) u(z)]_+
  std::map<int, StateVector> out;
  for (int e = 0; e <= topt; ++e) {
    StateVector oe = ss_.zero_vector();
    for (const auto& [eu, vu] : u) {
      int need = e - eu;
      if (need > 0) continue;
      if (need < s_inv_.zmin()) throw WindowUnderflow("leg_contract: S^{-1} window");
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          const QSeries& sij = s_inv_.at(need, i, j);
          if (sij.is_zero()) continue;
          oe[static_cast<size_t>(i)] += sij * vu[static_cast<size_t>(j)];
        }
    }
    out[e] = std::move(oe);
  }
  return out;
}

std::map<int, StateVector> NmspFrontier::w_corner(
    const std::map<int, StateVector>& tau) const {
  int dim = ss_.dim();
  int topt = tau.empty() ? 0 : tau.rbegin()->first;
  std::map<int, StateVector> out;
  for (int r = 0; r <= topt; ++r) out[r] = ss_.zero_vector();
  for (int alpha = 0; alpha < dim; ++alpha) {
    StateVector ea = ss_.basis_vector(alpha);
    StateVector eda = ss_.dual_basis(alpha);
    // c(z) := (S^{-1}(-z) e^alpha, tau(z)): coefficient of z^{et-k} is
    // (-1)^k (S^{-1}_k e^alpha, tau_{et}).
    std::map<int, QSeries> c;
    for (int e = s_inv_.zmin(); e <= 0; ++e) {
      StateVector v = ss_.zero_vector();
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          const QSeries& sij = s_inv_.at(e, i, j);
          if (sij.is_zero()) continue;
          v[static_cast<size_t>(i)] += sij * eda[static_cast<size_t>(j)];
        }
      for (const auto& [et, vt] : tau) {
        QSeries pairing = ss_.pair(v, vt);
        if (e % 2 != 0) pairing = -pairing;
        int zp = et + e;
        auto it = c.find(zp);
        if (it == c.end())
          c.emplace(zp, pairing);
        else
          it->second += pairing;
      }
    }
    // -W-term gives + S^{-1}(psi) e_alpha c(z) sum_r psi^r z^{-1-r};
    // Res_z picks c_{z^r}; the final [.]_+ keeps psi^{r+e} >= 0 parts of
    // the S^{-1}(psi)-column (z-power e <= 0 read as psi-power e).
    for (int r = 0; r <= topt; ++r) {
      auto cit = c.find(r);
      if (cit == c.end() || cit->second.is_zero()) continue;
      const QSeries& cr = cit->second;
      for (int e = s_inv_.zmin(); e <= 0; ++e) {
        int psi_pow = r + e;
        if (psi_pow < 0 || psi_pow > topt) continue;
        for (int i = 0; i < dim; ++i) {
          QSeries term = QSeries::zero(q_order_);
          for (int j = 0; j < dim; ++j) {
            const QSeries& sij = s_inv_.at(e, i, j);
            if (sij.is_zero()) continue;
            term += sij * ea[static_cast<size_t>(j)];
          }
          out[psi_pow][static_cast<size_t>(i)] += term * cr;
        }
      }
    }
  }
  return out;
}


NmspFrontier::LocalTail NmspFrontier::local_tail_L() const {
  const QuinticIData& qi = quintic_I(q_order_);
  LocalTail t;
  t.valid_below = ss_.N() - 2;
  std::array<QSeries, 4> z0{QSeries::zero(q_order_), qi.I1, QSeries::zero(q_order_),
                            QSeries::zero(q_order_)};
  std::array<QSeries, 4> z1{QSeries::one(q_order_) - qi.I0, QSeries::zero(q_order_),
                            QSeries::zero(q_order_), QSeries::zero(q_order_)};
  t.q_part[0] = z0;
  t.q_part[1] = z1;
  return t;
}

QSeries NmspFrontier::dw_tau_Q() const {
  const QuinticIData& qi = quintic_I(q_order_);
  return qi.I1 * qi.I0.inverse();
}

WeightedSeries NmspFrontier::dw_tau_alpha() const {
  QSeries l = ss_.L_power(1);
  QSeries integrand = l - QSeries::one(q_order_);
  return from_phase(D_integrate(integrand, 0), 1, ss_.N());
}

}  // namespace mspgw
