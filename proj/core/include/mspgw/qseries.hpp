#pragma once

#include "mspgw/rational.hpp"

#include <vector>

namespace mspgw {

// Truncated formal power series in q with exact rational coefficients.
// The truncation order is inclusive and explicit: coefficients beyond it do
// not exist, and asking for them throws instead of silently returning zero.
// Binary operations truncate to the minimum of the two operand orders.
class QSeries {
 public:
  QSeries() : order_(-1) {}  // empty/invalid sentinel
  QSeries(std::vector<Rational> coeffs, int order);

  static QSeries zero(int order);
  static QSeries constant(const Rational& c, int order);
  static QSeries one(int order) { return constant(1, order); }
  // c * q^d
  static QSeries monomial(int d, const Rational& c, int order);

  int order() const { return order_; }
  bool valid() const { return order_ >= 0; }

  const Rational& at(int d) const {
    if (d < 0 || d > order_)
      throw CoefficientOutOfRange("QSeries: coefficient q^" + std::to_string(d) +
                                  " beyond order " + std::to_string(order_));
    return c_[static_cast<size_t>(d)];
  }
  void set(int d, const Rational& v) {
    if (d < 0 || d > order_)
      throw CoefficientOutOfRange("QSeries: set beyond order");
    c_[static_cast<size_t>(d)] = v;
  }

  bool is_zero() const;
  // Degree of the lowest nonzero coefficient, or -1 if zero to order.
  int valuation() const;
  // Largest d with nonzero coefficient, or -1 if zero to order.
  int top_degree() const;

  QSeries truncated(int new_order) const;
  // Extends by literal zeros. Only correct when the caller knows the series
  // is exactly zero beyond the current order (e.g. proven polynomials).
  QSeries zero_extended(int new_order) const;

  QSeries operator-() const;
  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const Rational& c, const QSeries& a);
  QSeries& operator+=(const QSeries& b) { return *this = *this + b; }
  QSeries& operator-=(const QSeries& b) { return *this = *this - b; }
  QSeries& operator*=(const QSeries& b) { return *this = *this * b; }

  friend bool operator==(const QSeries& a, const QSeries& b);

  // Multiplicative inverse; requires a(0) != 0 (ZeroConstantTerm).
  QSeries inverse() const;
  // a/b with exact cancellation of common valuation; b must be nonzero and
  // the division must be exact at the shared valuation.
  friend QSeries divide(const QSeries& a, const QSeries& b);

  QSeries shifted(int k) const;  // multiply by q^k (order grows by k? no: drops top)

  std::string str() const;

 private:
  std::vector<Rational> c_;
  int order_;
};

// D := q d/dq. Order preserved.
QSeries D(const QSeries& a);
// D^{-1} with constant c0; requires a(0) = 0 (NonIntegrable).
QSeries D_integrate(const QSeries& a, const Rational& c0);
// exp of a series with a(0) = 0 (BadConstantTerm otherwise).
QSeries exp_series(const QSeries& a);
// log of a series with a(0) = 1 (BadConstantTerm otherwise).
QSeries log_series(const QSeries& a);
// (1 + c q)^r for rational r, exact binomial expansion.
QSeries binom_power(const Rational& c, const Rational& r, int order);
// f(g(q)) for g with g(0) = 0.
QSeries compose(const QSeries& f, const QSeries& g);
// General rational power f^r: requires f(0) = 1.
QSeries pow_series(const QSeries& f, const Rational& r);

// Dense polynomial over the rationals in one abstract variable. Used both
// for Q[X] (X = 1 - Y) and Q[Y]; conversions and derivations below say which
// variable is meant.
class Poly {
 public:
  Poly() {}
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(const Rational& c) { return Poly({c}); }
  static Poly variable() { return Poly({0, 1}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Rational at(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)]
                                                       : Rational(0);
  }
  const std::vector<Rational>& coeffs() const { return c_; }

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& c, const Poly& a);
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Rational eval(const Rational& x) const;
  // Substitute another polynomial for the variable.
  Poly subst(const Poly& g) const;

  std::string str(const std::string& var) const;

 private:
  void trim();
  std::vector<Rational> c_;  // c_[i] * var^i; no trailing zeros
};

// X := 1 - Y = -5^5 q / (1 - 5^5 q). DX = X(1-X).
QSeries xpoly_to_qseries(const Poly& p, int order);
Poly xpoly_D(const Poly& p);
// Y := 1/(1 - 5^5 q). DY = Y^2 - Y.
QSeries ypoly_to_qseries(const Poly& p, int order);
Poly ypoly_D(const Poly& p);
// X = 1 - Y substitutions.
Poly xpoly_to_ypoly(const Poly& p);
Poly ypoly_to_xpoly(const Poly& p);

}  // namespace mspgw
