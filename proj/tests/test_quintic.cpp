#include "doctest.h"

#include "mspgw/quintic.hpp"

using namespace mspgw;

TEST_CASE("quintic I-function expansion") {
  const QuinticIData& qi = quintic_I(12);
  // I0 coefficients are (5d)!/(d!)^5
  for (int d = 0; d <= 12; ++d) {
    Rational expect(factorial(static_cast<unsigned>(5 * d)),
                    boost::multiprecision::pow(factorial(static_cast<unsigned>(d)), 5));
    CHECK(qi.I0.at(d) == expect);
  }
  CHECK(qi.I0.at(1) == Rational(120));
  CHECK(qi.I0.at(2) == Rational(113400));
  CHECK(qi.I1.at(1) == Rational(770));
  // all I_k at q=0: I0 = 1, I1 = I2 = I3 = 0
  CHECK(qi.I0.at(0) == Rational(1));
  CHECK(qi.I1.at(0).is_zero());
  CHECK(qi.I2.at(0).is_zero());
  CHECK(qi.I3.at(0).is_zero());
  // I_{1,1}, I_{2,2} invertible with constant term 1
  CHECK(qi.I11.at(0) == Rational(1));
  CHECK(qi.I22.at(0) == Rational(1));
}

TEST_CASE("Yamaguchi-Yau generators") {
  const YYGenerators& g = yy_generators(10);
  for (int d = 0; d <= 10; ++d) CHECK(g.Y.at(d) == Rational(3125).pow(d));
  CHECK(g.B1.at(1) == Rational(120));
  CHECK(g.A1.at(1) == Rational(770));
  CHECK(g.X == (QSeries::one(10) - g.Y));
}

TEST_CASE("ring fit") {
  int order = 12;
  const YYGenerators& g = yy_generators(order);

  RingFit fy = fit_in_ring(g.Y, RingFitCaps{1, -1});
  CHECK(fy.coeffs.size() == 1);
  CHECK(fy.coeffs.at(RingMonomial{0, 0, 0, 0, 1}) == Rational(1));

  // D(A1) stays in the ring (closure under D), verified by multiply-back.
  QSeries da = D(g.A1);
  RingFit fd = fit_in_ring(da, RingFitCaps{2, -1});
  CHECK(ring_fit_eval(fd, order) == da);

  // A synthetic P_{1,1}-shaped series is recovered with exact coefficients.
  QSeries p11 = Rational::of(-1, 2) * g.A1 + Rational::of(-31, 3) * g.B1 +
                Rational::of(1, 12) * g.Y + QSeries::constant(Rational::of(-13, 6), order);
  RingFit fp = fit_in_ring(p11, RingFitCaps{1, -1});
  CHECK(fp.coeffs.at(RingMonomial{1, 0, 0, 0, 0}) == Rational::of(-1, 2));
  CHECK(fp.coeffs.at(RingMonomial{0, 1, 0, 0, 0}) == Rational::of(-31, 3));
  CHECK(fp.coeffs.at(RingMonomial{0, 0, 0, 0, 1}) == Rational::of(1, 12));
  CHECK(fp.coeffs.at(RingMonomial{}) == Rational::of(-13, 6));

  // closure under D for a generating set up to degree 4
  for (const RingMonomial& m :
       {RingMonomial{1, 0, 0, 0, 0}, RingMonomial{0, 1, 0, 0, 0},
        RingMonomial{0, 0, 1, 0, 0}, RingMonomial{0, 0, 0, 1, 0},
        RingMonomial{0, 0, 0, 0, 1}, RingMonomial{1, 1, 0, 0, 0},
        RingMonomial{0, 0, 0, 0, 4}}) {
    QSeries s = D(ring_monomial_series(m, order));
    RingFit f = fit_in_ring(s, RingFitCaps{m.weighted_degree() + 1, -1});
    CHECK(ring_fit_eval(f, order) == s);
  }

  QSeries off = g.Y * g.Y * g.Y;
  CHECK_THROWS_AS(fit_in_ring(off, RingFitCaps{1, -1}), NoExactFit);
}

TEST_CASE("quintic product identity I0^2 I11^2 I22 = Y") {
  const QuinticIData& qi = quintic_I(12);
  const YYGenerators& g = yy_generators(12);
  CHECK((qi.I0 * qi.I0 * qi.I11 * qi.I11 * qi.I22) == g.Y);
}

TEST_CASE("quintic QDE matrix") {
  auto a = quintic_qde(8);
  const QuinticIData& qi = quintic_I(8);
  CHECK(a[1][0] == qi.I11);
  CHECK(a[2][1] == qi.I22);
  CHECK(a[3][2] == qi.I11);
  CHECK(a[0][0].is_zero());
  CHECK(a[0][3].is_zero());
  // classical limit: cup product by H
  CHECK(a[1][0].at(0) == Rational(1));
  CHECK(a[2][1].at(0) == Rational(1));
}

TEST_CASE("quintic S closed form vs QDE integration") {
  int order = 10;
  ZMatrix closed = quintic_S(order);
  ZMatrix fromqde = quintic_S_from_qde(order);
  for (int e = -3; e <= 0; ++e)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(closed.at(e, i, j) == fromqde.at(e, i, j));

  const QuinticIData& qi = quintic_I(order);
  CHECK(closed.at(-1, 2, 1) == (qi.J1 + D(qi.J2)) * qi.I11.inverse());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(closed.at(0, i, j) ==
            (i == j ? QSeries::one(order) : QSeries::zero(order)));
}

TEST_CASE("quintic S is symplectic") {
  int order = 8;
  ZMatrix s = quintic_S(order);
  // adjoint under (H^a, H^b) = 5 delta_{a+b,3}: antitranspose, then z -> -z.
  ZMatrix adj(4, -3, 0, order, true, true);
  for (int e = -3; e <= 0; ++e)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) adj.set(e, i, j, s.at(e, 3 - j, 3 - i));
  ZMatrix prod = s * adj.zflip();
  for (int e = prod.zmin(); e <= prod.zmax(); ++e)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(prod.at(e, i, j) == ((i == j && e == 0) ? QSeries::one(order)
                                                      : QSeries::zero(order)));
}

TEST_CASE("three point values") {
  int order = 6;
  const QuinticIData& qi = quintic_I(order);
  CHECK(three_point(0, 1, 2, order) == QSeries::one(order));
  CHECK(three_point(1, 1, 1, order) == qi.I22 * qi.I11.inverse());
  CHECK(three_point(0, 0, 3, order) == QSeries::one(order));
  CHECK(three_point(0, 0, 2, order).is_zero());
  CHECK(three_point(1, 1, 2, order).is_zero());
  CHECK(three_point(2, 2, 2, order).is_zero());
  CHECK_THROWS_AS(three_point(0, 1, 4, order), BadInsertion);
}
