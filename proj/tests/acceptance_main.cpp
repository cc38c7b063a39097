// Acceptance suite: the headline objects reproduced at desk scale.
// Parameters: N = 15, q-order 12, z-window [-8, 8], exact rational equality
// throughout. One pass/fail line per criterion; nonzero exit on any failure.

#include "mspgw/assembler.hpp"
#include "mspgw/serialize.hpp"

#include <functional>
#include <iostream>

using namespace mspgw;

namespace {

constexpr int kN = 15;
constexpr int kOrder = 12;
constexpr int kZmin = -8;
constexpr int kKmax = 5;

int failures = 0;

void criterion(int idx, const std::string& name, const std::function<bool()>& f) {
  bool ok = false;
  std::string detail;
  try {
    ok = f();
  } catch (const std::exception& e) {
    detail = std::string(" (") + e.what() + ")";
  }
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << idx << ": " << name
            << detail << "\n";
  if (!ok) ++failures;
}

bool constant_through(const QSeries& s, int order) {
  for (int d = 1; d <= std::min(order, s.order()); ++d)
    if (!s.at(d).is_zero()) return false;
  return true;
}

const NmspFrontier& frontier() {
  static NmspFrontier f(kN, kOrder, kZmin);
  return f;
}
const RFactorization& rfac() {
  static RFactorization r(kN, kOrder, kKmax);
  return r;
}

}  // namespace

int main() {
  std::cout << "acceptance run: N=" << kN << " q-order=" << kOrder
            << " z-window=[" << kZmin << "," << -kZmin << "] exact rationals\n";

  criterion(1, "I-function table: I0 coefficients (5d)!/(d!)^5, I1 q^1 = 770", [] {
    const QuinticIData& qi = quintic_I(kOrder);
    for (int d = 0; d <= 12; ++d) {
      Rational expect(factorial(static_cast<unsigned>(5 * d)),
                      boost::multiprecision::pow(factorial(static_cast<unsigned>(d)), 5));
      if (qi.I0.at(d) != expect) return false;
    }
    return qi.I1.at(1) == Rational(770);
  });

  criterion(2, "quintic S: QDE integration equals the closed form to q-order 10", [] {
    ZMatrix closed = quintic_S(10);
    ZMatrix integrated = quintic_S_from_qde(10);
    for (int e = -3; e <= 0; ++e)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (!(closed.at(e, i, j) == integrated.at(e, i, j))) return false;
    return true;
  });

  criterion(3, "NMSP QDE: D_p S* = S* A^M exactly; leadingR columns", [] {
    const NmspFrontier& fr = frontier();
    fr.check_qde();
    // computed matrix equals the closed-form band matrix
    auto closed = fr.nmsp_qde_matrix();
    const auto& computed = fr.A_M();
    for (int i = 0; i < kN + 4; ++i)
      for (int j = 0; j < kN + 4; ++j)
        if (!(computed[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
              closed[static_cast<size_t>(i)][static_cast<size_t>(j)]))
          return false;
    // Q-restricted columns 0,1 of the z=infinity expansion: the identity
    // parts are exact and the full-series displays live in the R data:
    // R*1|_Q = I_0 1_Q, R*p|_Q = z D(I_0) + H I_0 I_{1,1} in the
    // normalized-basis coefficients.
    const QuinticIData& qi = quintic_I(kOrder);
    const RFactorization& rf = rfac();
    if (!(rf.rq(0, 0, 0) == QSeries::one(kOrder))) return false;
    for (int k = 1; k <= kKmax; ++k)
      for (int b = 0; b < 4; ++b)
        if (!rf.rq(k, 0, b).is_zero()) return false;
    if (!(rf.rq(1, 1, 0) == D(qi.I0) * qi.I0.inverse())) return false;
    if (!(rf.rq(0, 1, 1) == QSeries::one(kOrder))) return false;
    // S^M columns 0,1 restricted to Q at z^0: identity classes
    const ZMatrix& s = fr.S_star();
    if (!(s.at(0, 0, 0) == QSeries::one(kOrder))) return false;
    if (!(s.at(0, 1, 1) == QSeries::one(kOrder))) return false;
    return true;
  });

  criterion(4, "specialized S: seeds, closed form vs oracle (a <= 12), degree bounds", [] {
    const NmspFrontier& fr = frontier();
    if (!(fr.specialized_S(1).g[0] == QSeries::one(kOrder))) return false;
    for (int a = 1; a <= 5; ++a)
      if (!(fr.specialized_S(a).g[0] == QSeries::one(kOrder))) return false;
    for (int a = 1; a <= 12; ++a) {
      if (!(fr.specialized_S(a).g[0] == fr.specialized_S0_oracle(a))) return false;
      const SpecializedS& s = fr.specialized_S(a);
      int ca = (a + 4) / 5;
      for (int i = 0; i <= kN + 3; ++i) {
        int bound = (i < kN) ? ca - 1 : ca;
        if (s.g[static_cast<size_t>(i)].top_degree() > bound) return false;
      }
    }
    return true;
  });

  criterion(5, "R-matrix: vanishing, Q[Y] bounds, YY-ring fits, symplectic, q=0 = Id + Delta", [] {
    const RFactorization& rf = rfac();
    rf.check_vanishing();
    rf.check_pt_degrees();
    rf.check_ring_membership();
    rf.check_symplectic();
    rf.check_first_column_delta();
    // q = 0 value against Id + diag Delta through the matrix-route verifier
    rf.verify_birkhoff(frontier());
    return true;
  });

  criterion(6, "tails: T|_Q, z^2 divisibility, printed z^2 point coefficient", [] {
    const RFactorization& rf = rfac();
    TailData t = rf.tails();
    const QuinticIData& qi = quintic_I(kOrder);
    if (!(t.T.h[1][0] == (QSeries::one(kOrder) - qi.I0))) return false;
    if (!t.T.h[0][0].is_zero()) return false;
    if (!t.Tt_pt[0].empty_or_zero() || !t.Tt_pt[1].empty_or_zero()) return false;
    // two pipelines for the z^2 point coefficient: production T against the
    // printed rational expression with constants 43/120, 47/24, 23/24, 1/12
    StateSpace ss(kN, kOrder);
    QSeries expr =
        QSeries::constant(Rational(kN, 24) + Rational(43, 120), kOrder) +
        Rational(1, BigInt(kN)) *
            ((ss.Y() - QSeries::one(kOrder)) *
             QSeries::constant(Rational(47, 24) + Rational(23 * kN, 24) +
                                   Rational(kN * kN, 12),
                               kOrder));
    WeightedSeries printed(-1, -(ss.L_power(-(kN + 3) / 2) * expr));
    WeightedSeries got = t.T.pt[2].canonicalized(kN).single(kN);
    WeightedSeries want = reduce_weight(printed, got.weight, kN);
    return got.value == want.value;
  });

  criterion(7, "graph counts: |Xi^0_{1,1}| = 2, |Xi^0_{2,0}| = 5, genus identity", [] {
    auto x11 = enumerate_bipartite(1, 1, 0);
    auto x20 = enumerate_bipartite(2, 0, 0);
    if (x11.size() != 2 || x20.size() != 5) return false;
    for (const auto& cb : x20) {
      int s = static_cast<int>(cb.graph.edges.size());
      for (const auto& w : cb.graph.whites) s += w.genus - 1;
      for (const auto& b : cb.graph.blacks) s += b.genus - 1;
      if (s != 1) return false;
    }
    for (const auto& cg : enumerate_stable(2, 1)) {
      int s = static_cast<int>(cg.graph.edges.size());
      for (const auto& v : cg.graph.vertices) s += v.genus - 1;
      if (s != 1) return false;
    }
    return true;
  });

  criterion(8, "psi integrals: <t0^3>_0 = 1, <t1>_1 = 1/24, <t4>_2 = 1/1152", [] {
    if (psi_integral(0, {0, 0, 0}) != Rational(1)) return false;
    if (psi_integral(1, {1}) != Rational(1, 24)) return false;
    if (psi_integral(2, {4}) != Rational(1, 1152)) return false;
    // string/dilaton consistency spot checks
    if (psi_integral(2, {0, 5}) != psi_integral(2, {4})) return false;
    if (psi_integral(2, {1, 4}) != Rational(3) * psi_integral(2, {4})) return false;
    return true;
  });

  criterion(9, "flagship genus-1: <phi_1>^{[0,1]}_{1,1} constant through q^10; negative control", [] {
    GraphAssembler a(rfac(), VertexOracle(kOrder));
    QSeries flag = a.graph_sum_01_p(1, {1});
    if (!constant_through(flag, 10)) return false;
    PolyCheck pc = polynomiality_check(flag, 1, kN, {1}, {0});
    if (!pc.ok || pc.bound != 0) return false;
    VertexOracle bad(kOrder);
    bad.perturb_p11_A(Rational(1, 10));
    GraphAssembler ab(rfac(), std::move(bad));
    QSeries broken = ab.graph_sum_01_p(1, {1});
    return !broken.at(1).is_zero();
  });

  criterion(10, "genus-1 solve mode recovers P11 coefficients with one free constant", [] {
    SolveResult sol = polynomiality_solve_genus1(rfac(), 1);
    if (sol.free_constants != 1) return false;
    const QuinticIData& qi = quintic_I(kOrder);
    const YYGenerators& g = yy_generators(kOrder);
    if (!(sol.kernel * qi.I11 == QSeries::one(kOrder))) return false;
    QSeries rec = sol.u0 * qi.I11;
    QSeries target = Rational(-1, 2) * g.A1 + Rational(-31, 3) * g.B1 +
                     Rational(1, 12) * g.Y;
    if (!constant_through(rec - target, kOrder)) return false;
    RingFit fit = fit_in_ring(rec, RingFitCaps{1, -1});
    return fit.coeffs.at(RingMonomial{1, 0, 0, 0, 0}) == Rational(-1, 2) &&
           fit.coeffs.at(RingMonomial{0, 1, 0, 0, 0}) == Rational(-31, 3) &&
           fit.coeffs.at(RingMonomial{0, 0, 0, 0, 1}) == Rational(1, 12);
  });

  criterion(11, "black vertices: case-2 degree bounds; summation reassembly at (1,1)", [] {
    const NmspFrontier& fr = frontier();
    BlackVertexData empty;
    struct Cfg {
      int g, d;
      std::vector<int> a;
    };
    for (const Cfg& c : {Cfg{0, 1, {1, 4}}, Cfg{0, 1, {2, 3}}, Cfg{0, 2, {4, 6}},
                         Cfg{0, 1, {1}}, Cfg{0, 1, {2}}, Cfg{0, 1, {5}},
                         Cfg{0, 2, {10}}, Cfg{0, 2, {3}}, Cfg{0, 3, {7, 8}}}) {
      WeightLedger v = black_vertex(fr, c.g, c.d, c.a, empty, true);
      int bound = black_vertex_degree_bound(c.g, c.d, c.a);
      WeightLedger canon = v.canonicalized(kN);
      for (const auto& [w, val] : canon.terms()) {
        int deg = to_phase(WeightedSeries(w, val), kN).top_degree();
        if (deg > bound) return false;
      }
    }
    // reassembly: <p^m>^M_{1,1} = [0,1] part + FJRW constant x white pairing,
    // a q-polynomial of degree 0 for every m <= 3
    GraphAssembler a(rfac(), VertexOracle(kOrder));
    for (int m = 0; m <= 3; ++m) {
      QSeries base = a.graph_sum_01_p(1, {m});
      WeightLedger wl = unstable_pairing(fr, fr.space().basis_vector(m), 1);
      WeightedSeries ws = wl.single(kN);
      WeightLedger blk(from_phase(QSeries::one(kOrder), -ws.weight, kN));
      QSeries white = (wl * blk).hour_summed(kN, kOrder);
      Rational cf = 0;
      if (!constant_through(base, kOrder)) {
        if (white.at(1).is_zero()) return false;
        cf = -base.at(1) / white.at(1);
      }
      QSeries total = base + cf * white;
      PolyCheck pc = polynomiality_check(total, 1, kN, {m}, {0});
      if (!pc.ok || !constant_through(total, kOrder)) return false;
    }
    return true;
  });

  std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed\n"
                              : "ACCEPTANCE: " + std::to_string(failures) +
                                    " criterion(s) FAILED\n");
  return failures == 0 ? 0 : 1;
}
