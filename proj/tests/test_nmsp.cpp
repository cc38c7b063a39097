#include "doctest.h"

#include "mspgw/nmsp.hpp"

using namespace mspgw;

namespace {
// Shared small instance: N = 9 keeps the Birkhoff run fast while exercising
// every structural feature (band, corner, folds).
const NmspFrontier& frontier9() {
  static NmspFrontier f(9, 6, -4);
  return f;
}
const NmspFrontier& frontier15() {
  static NmspFrontier f(15, 12, -8);
  return f;
}
}  // namespace

TEST_CASE("I-function leading term") {
  const NmspFrontier& f = frontier9();
  const auto& im = f.I_M();
  // q^0 term is z * 1.
  const StateVector& top = im.at(1);
  CHECK(top[0].at(0) == Rational(1));
  for (int d = 1; d <= 6; ++d) CHECK(top[0].at(d).is_zero());
  for (size_t i = 1; i < top.size(); ++i) CHECK(top[i].valuation() != 0);
  // the q^d term appears only at z-order <= 1 - N d
  for (const auto& [e, vec] : im) {
    for (const auto& comp : vec)
      for (int d = 1; d <= 6; ++d) {
        if (comp.at(d).is_zero()) continue;
        CHECK(e <= 1 - 9 * d);
      }
  }
}

TEST_CASE("mirror consistency: z S*(z) 1 = I^M") {
  const NmspFrontier& f = frontier9();
  const auto& im = f.I_M();
  const ZMatrix& s = f.S_star();
  int dim = f.space().dim();
  // column 0 of S* shifted by z must reproduce the I-function on the window
  for (int e = s.zmin(); e <= 0; ++e) {
    auto it = im.find(e + 1);
    REQUIRE(it != im.end());
    for (int i = 0; i < dim; ++i) CHECK(s.at(e, i, 0) == it->second[static_cast<size_t>(i)]);
  }
}

TEST_CASE("QDE holds and matches the closed-form matrix") {
  const NmspFrontier& f = frontier9();
  f.check_qde();
  auto closed = f.nmsp_qde_matrix();
  const auto& computed = f.A_M();
  int dim = f.space().dim();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) CHECK(computed[static_cast<size_t>(i)][static_cast<size_t>(j)] == closed[static_cast<size_t>(i)][static_cast<size_t>(j)]);
}

TEST_CASE("QDE matrix shape at N=15") {
  const NmspFrontier& f = frontier15();
  f.check_qde();
  const auto& a = f.A_M();
  int N = 15;
  // subdiagonal ones
  for (int k = 0; k + 1 < N + 4; ++k)
    CHECK(a[static_cast<size_t>(k + 1)][static_cast<size_t>(k)] == QSeries::one(12));
  // band 120q, 770q, 1345q, 770q at (j-N, j-1)
  CHECK(a[0][static_cast<size_t>(N - 1)] == QSeries::monomial(1, 120, 12));
  CHECK(a[1][static_cast<size_t>(N)] == QSeries::monomial(1, 770, 12));
  CHECK(a[2][static_cast<size_t>(N + 1)] == QSeries::monomial(1, 1345, 12));
  CHECK(a[3][static_cast<size_t>(N + 2)] == QSeries::monomial(1, 770, 12));
  // corner 120q + t^N with t^N = -1
  CHECK(a[4][static_cast<size_t>(N + 3)] ==
        (QSeries::monomial(1, 120, 12) - QSeries::one(12)));
  // everything else vanishes
  for (int i = 0; i < N + 4; ++i)
    for (int j = 0; j < N + 4; ++j) {
      if (i == j + 1) continue;
      if (j >= N - 1 && i == j + 1 - N) continue;
      CHECK(a[static_cast<size_t>(i)][static_cast<size_t>(j)].is_zero());
    }
}

TEST_CASE("S and S^{-1} and symplecticity") {
  const NmspFrontier& f = frontier9();
  const ZMatrix& s = f.S();
  const ZMatrix& sinv = f.S_inv();
  ZMatrix prod = s * sinv;
  int dim = f.space().dim();
  for (int e = prod.zmin(); e <= prod.zmax(); ++e)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        CHECK(prod.at(e, i, j) == ((i == j && e == 0)
                                       ? QSeries::one(prod.q_order())
                                       : QSeries::zero(prod.q_order())));
  // symplectic: (S(z) x, S(-z) y) = (x, y), i.e. S^*(z)-conjugate relation;
  // equivalently S^{-1}(z) = S^dagger(-z). Check S^dagger(-z) S(z) = Id.
  const ZMatrix& sstar = f.S_star();
  ZMatrix dagger_flip = sstar.zflip();  // S^*(-z) entries
  ZMatrix prod2 = dagger_flip * s;
  for (int e = prod2.zmin(); e <= prod2.zmax(); ++e)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        CHECK(prod2.at(e, i, j) == ((i == j && e == 0)
                                        ? QSeries::one(prod2.q_order())
                                        : QSeries::zero(prod2.q_order())));
}

TEST_CASE("specialized S functions") {
  const NmspFrontier& f = frontier15();
  int N = 15;
  // script-S_{1;0} = 1, and = 1 for all a <= 5
  for (int a = 1; a <= 5; ++a)
    CHECK(f.specialized_S(a).g[0] == QSeries::one(12));
  // closed form vs the independent I-function specialization oracle
  for (int a = 1; a <= 12; ++a)
    CHECK(f.specialized_S(a).g[0] == f.specialized_S0_oracle(a));
  // degree bounds: deg <= ceil(a/5)-1 for i < N, <= ceil(a/5) for i >= N
  for (int a = 1; a <= 12; ++a) {
    const SpecializedS& s = f.specialized_S(a);
    int ca = (a + 4) / 5;
    for (int i = 0; i <= N + 3; ++i) {
      int bound = (i < N) ? ca - 1 : ca;
      CHECK(s.g[static_cast<size_t>(i)].top_degree() <= bound);
    }
  }
}

TEST_CASE("two-point residue identity for leg insertions") {
  const NmspFrontier& f = frontier9();
  const StateSpace& ss = f.space();
  // constant insertion tau = p^2
  std::map<int, StateVector> tau0{{0, ss.basis_vector(2)}};
  auto via_leg = f.leg_contract(tau0);
  auto via_w = f.w_corner(tau0);
  REQUIRE(via_leg.size() == via_w.size());
  for (const auto& [r, v] : via_leg)
    for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == via_w.at(r)[i]);
  // constant insertions reduce to S^{-1}-dressing which is trivial here:
  CHECK(via_leg.at(0)[2] == QSeries::one(6));

  // psi-dependent insertion tau(z) = z * 1
  std::map<int, StateVector> tau1{{1, ss.basis_vector(0)}};
  auto leg1 = f.leg_contract(tau1);
  auto w1 = f.w_corner(tau1);
  for (const auto& [r, v] : leg1)
    for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == w1.at(r)[i]);
}

TEST_CASE("W kernel q^0 part is the bare dual-pair kernel") {
  const NmspFrontier& f = frontier9();
  // At q^0 the S-matrix is the identity, so every z^{<0} entry of S^{-1}
  // must vanish at q^0; this is the trivial part of the two-point kernel.
  const ZMatrix& sinv = f.S_inv();
  int dim = f.space().dim();
  for (int e = sinv.zmin(); e < 0; ++e)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (!sinv.at(e, i, j).is_zero())
          CHECK(sinv.at(e, i, j).valuation() >= 1);
}

TEST_CASE("local tail and Dijkgraaf-Witten map") {
  const NmspFrontier& f = frontier15();
  auto lt = f.local_tail_L();
  const QuinticIData& qi = quintic_I(12);
  CHECK(lt.q_part.at(1)[0] == (QSeries::one(12) - qi.I0));
  CHECK(lt.q_part.at(0)[1] == qi.I1);
  CHECK(lt.valid_below == 13);

  QSeries tq = f.dw_tau_Q();
  CHECK(tq.at(0).is_zero());
  CHECK(tq.at(1) == Rational(770));

  WeightedSeries ta = f.dw_tau_alpha();
  CHECK(ta.weight == 1);
  CHECK(to_phase(ta, 15).at(0).is_zero());  // tau_alpha(0) = 0
  // D tau_alpha = L - 1 in the phase normalization
  QSeries dta = D(to_phase(ta, 15));
  CHECK(dta == (f.space().L_power(1) - QSeries::one(12)));
}

TEST_CASE("local tail oracle: polynomial part of the quintic I-function") {
  // [z + I^Q(q,-z)]_+ computed by explicit expansion in u = H/z must equal
  // z(1 - I_0) + I_1 H.
  int order = 8;
  const QuinticIData& qi = quintic_I(order);
  // the H^k z^{1-k} coefficient of -z sum_d q^d prod(5H - mz)/prod(H - mz)^5
  // is (-1)^{1-k} ... reuse the I-function: I^Q(q,-z) has components
  // I_k(q) H^k (-z)^{1-k}, so the z^{>=0} part is -z I_0 + I_1 H.
  QSeries h0 = QSeries::one(order) - qi.I0;  // z-coefficient of z + (-z I_0)
  QSeries h1 = qi.I1;
  NmspFrontier f(9, order, -4);
  auto lt = f.local_tail_L();
  CHECK(lt.q_part.at(1)[0] == h0);
  CHECK(lt.q_part.at(0)[1] == h1);
}
