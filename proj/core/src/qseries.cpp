#include "mspgw/qseries.hpp"

#include <algorithm>

namespace mspgw {

QSeries::QSeries(std::vector<Rational> coeffs, int order)
    : c_(std::move(coeffs)), order_(order) {
  if (order_ < 0 || c_.size() != static_cast<size_t>(order_) + 1)
    throw Error("QSeries: coefficient count must equal order+1");
}

QSeries QSeries::zero(int order) {
  return QSeries(std::vector<Rational>(static_cast<size_t>(order) + 1), order);
}

QSeries QSeries::constant(const Rational& c, int order) {
  QSeries s = zero(order);
  s.c_[0] = c;
  return s;
}

QSeries QSeries::monomial(int d, const Rational& c, int order) {
  QSeries s = zero(order);
  if (d <= order) s.c_[static_cast<size_t>(d)] = c;
  return s;
}

bool QSeries::is_zero() const {
  for (const auto& x : c_)
    if (!x.is_zero()) return false;
  return true;
}

int QSeries::valuation() const {
  for (int d = 0; d <= order_; ++d)
    if (!c_[static_cast<size_t>(d)].is_zero()) return d;
  return -1;
}

int QSeries::top_degree() const {
  for (int d = order_; d >= 0; --d)
    if (!c_[static_cast<size_t>(d)].is_zero()) return d;
  return -1;
}

QSeries QSeries::truncated(int new_order) const {
  if (new_order > order_)
    throw CoefficientOutOfRange("QSeries: truncated() cannot raise order");
  std::vector<Rational> c(c_.begin(), c_.begin() + new_order + 1);
  return QSeries(std::move(c), new_order);
}

QSeries QSeries::zero_extended(int new_order) const {
  if (new_order < order_) return truncated(new_order);
  std::vector<Rational> c = c_;
  c.resize(static_cast<size_t>(new_order) + 1);
  return QSeries(std::move(c), new_order);
}

QSeries QSeries::operator-() const {
  QSeries r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  int order = std::min(a.order_, b.order_);
  QSeries r = QSeries::zero(order);
  for (int d = 0; d <= order; ++d)
    r.c_[static_cast<size_t>(d)] =
        a.c_[static_cast<size_t>(d)] + b.c_[static_cast<size_t>(d)];
  return r;
}

QSeries operator-(const QSeries& a, const QSeries& b) {
  int order = std::min(a.order_, b.order_);
  QSeries r = QSeries::zero(order);
  for (int d = 0; d <= order; ++d)
    r.c_[static_cast<size_t>(d)] =
        a.c_[static_cast<size_t>(d)] - b.c_[static_cast<size_t>(d)];
  return r;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  int order = std::min(a.order_, b.order_);
  QSeries r = QSeries::zero(order);
  for (int i = 0; i <= order; ++i) {
    const Rational& ai = a.c_[static_cast<size_t>(i)];
    if (ai.is_zero()) continue;
    for (int j = 0; i + j <= order; ++j) {
      const Rational& bj = b.c_[static_cast<size_t>(j)];
      if (bj.is_zero()) continue;
      r.c_[static_cast<size_t>(i + j)] += ai * bj;
    }
  }
  return r;
}

QSeries operator*(const Rational& c, const QSeries& a) {
  QSeries r = a;
  for (auto& x : r.c_) x *= c;
  return r;
}

bool operator==(const QSeries& a, const QSeries& b) {
  return a.order_ == b.order_ && a.c_ == b.c_;
}

QSeries QSeries::inverse() const {
  if (c_[0].is_zero())
    throw ZeroConstantTerm("QSeries: inverse needs nonzero constant term");
  QSeries r = zero(order_);
  Rational inv0 = c_[0].inverse();
  r.c_[0] = inv0;
  for (int d = 1; d <= order_; ++d) {
    Rational s = 0;
    for (int i = 1; i <= d; ++i)
      s += c_[static_cast<size_t>(i)] * r.c_[static_cast<size_t>(d - i)];
    r.c_[static_cast<size_t>(d)] = -inv0 * s;
  }
  return r;
}

QSeries divide(const QSeries& a, const QSeries& b) {
  int vb = b.valuation();
  if (vb < 0) throw Error("QSeries: division by zero series");
  if (vb == 0) return a * b.inverse();
  int order = std::min(a.order(), b.order());
  // Cancel q^vb exactly; a must vanish to at least the same valuation.
  for (int d = 0; d < vb && d <= order; ++d)
    if (!a.at(d).is_zero())
      throw DivisionInexact("QSeries: divide() valuation mismatch");
  int new_order = order - vb;
  if (new_order < 0) throw CoefficientOutOfRange("QSeries: divide() underflow");
  QSeries as = QSeries::zero(new_order), bs = QSeries::zero(new_order);
  for (int d = 0; d <= new_order; ++d) {
    as.set(d, a.at(d + vb));
    bs.set(d, b.at(d + vb));
  }
  return as * bs.inverse();
}

QSeries QSeries::shifted(int k) const {
  if (k < 0) throw Error("QSeries: negative shift");
  QSeries r = zero(order_);
  for (int d = 0; d + k <= order_; ++d) r.c_[static_cast<size_t>(d + k)] = c_[static_cast<size_t>(d)];
  return r;
}

std::string QSeries::str() const {
  std::string s = "[";
  for (int d = 0; d <= order_; ++d) {
    if (d) s += ", ";
    s += c_[static_cast<size_t>(d)].str();
  }
  return s + "]";
}

QSeries D(const QSeries& a) {
  QSeries r = QSeries::zero(a.order());
  for (int d = 1; d <= a.order(); ++d)
    r.set(d, Rational(BigInt(d)) * a.at(d));
  return r;
}

QSeries D_integrate(const QSeries& a, const Rational& c0) {
  if (!a.at(0).is_zero())
    throw NonIntegrable("D_integrate: constant term must vanish");
  QSeries r = QSeries::zero(a.order());
  r.set(0, c0);
  for (int d = 1; d <= a.order(); ++d)
    r.set(d, a.at(d) / Rational(BigInt(d)));
  return r;
}

QSeries exp_series(const QSeries& a) {
  if (!a.at(0).is_zero())
    throw BadConstantTerm("exp_series: constant term must vanish");
  // f' = a' f termwise in the D-grading: d*f_d = sum_{i>=1} i*a_i*f_{d-i}.
  QSeries f = QSeries::zero(a.order());
  f.set(0, 1);
  for (int d = 1; d <= a.order(); ++d) {
    Rational s = 0;
    for (int i = 1; i <= d; ++i)
      s += Rational(BigInt(i)) * a.at(i) * f.at(d - i);
    f.set(d, s / Rational(BigInt(d)));
  }
  return f;
}

QSeries log_series(const QSeries& a) {
  if (a.at(0) != Rational(1))
    throw BadConstantTerm("log_series: constant term must be 1");
  // D(log a) = D(a)/a.
  QSeries g = D(a) * a.inverse();
  return D_integrate(g, 0);
}

QSeries binom_power(const Rational& c, const Rational& r, int order) {
  QSeries s = QSeries::zero(order);
  for (int d = 0; d <= order; ++d)
    s.set(d, binomial(r, static_cast<unsigned>(d)) * c.pow(d));
  return s;
}

QSeries compose(const QSeries& f, const QSeries& g) {
  if (!g.at(0).is_zero())
    throw BadConstantTerm("compose: inner series must vanish at q=0");
  int order = std::min(f.order(), g.order());
  QSeries acc = QSeries::constant(f.at(0), order);
  QSeries gp = QSeries::one(order);
  for (int k = 1; k <= order; ++k) {
    gp = gp * g;
    acc += f.at(k) * gp;
  }
  return acc;
}

QSeries pow_series(const QSeries& f, const Rational& r) {
  if (f.at(0) != Rational(1))
    throw BadConstantTerm("pow_series: constant term must be 1");
  return exp_series(r * log_series(f));
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.c_.size()) c[i] += a.c_[i];
    if (i < b.c_.size()) c[i] += b.c_[i];
  }
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c_.empty() || b.c_.empty()) return Poly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(c));
}

Poly operator*(const Rational& c, const Poly& a) {
  Poly r = a;
  for (auto& x : r.c_) x *= c;
  r.trim();
  return r;
}

Rational Poly::eval(const Rational& x) const {
  Rational acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Poly Poly::subst(const Poly& g) const {
  Poly acc;
  for (size_t i = c_.size(); i-- > 0;)
    acc = acc * g + Poly::constant(c_[i]);
  return acc;
}

std::string Poly::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += c_[i].str();
    if (i > 0) s += "*" + var + "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

QSeries xpoly_to_qseries(const Poly& p, int order) {
  // X = -5^5 q Y with Y = 1/(1 - 5^5 q).
  QSeries y = binom_power(Rational(-3125), -1, order);
  QSeries x = Rational(-3125) * (QSeries::monomial(1, 1, order) * y);
  QSeries acc = QSeries::zero(order);
  for (int i = p.degree(); i >= 0; --i)
    acc = acc * x + QSeries::constant(p.at(i), order);
  return acc;
}

Poly xpoly_D(const Poly& p) {
  // DX = X(1-X): D(X^i) = i X^i (1-X).
  std::vector<Rational> c(static_cast<size_t>(std::max(p.degree() + 2, 1)));
  for (int i = 1; i <= p.degree(); ++i) {
    Rational t = Rational(BigInt(i)) * p.at(i);
    c[static_cast<size_t>(i)] += t;
    c[static_cast<size_t>(i + 1)] -= t;
  }
  return Poly(std::move(c));
}

QSeries ypoly_to_qseries(const Poly& p, int order) {
  QSeries y = binom_power(Rational(-3125), -1, order);
  QSeries acc = QSeries::zero(order);
  for (int i = p.degree(); i >= 0; --i)
    acc = acc * y + QSeries::constant(p.at(i), order);
  return acc;
}

Poly ypoly_D(const Poly& p) {
  // DY = Y^2 - Y: D(Y^i) = i (Y^{i+1} - Y^i).
  std::vector<Rational> c(static_cast<size_t>(std::max(p.degree() + 2, 1)));
  for (int i = 1; i <= p.degree(); ++i) {
    Rational t = Rational(BigInt(i)) * p.at(i);
    c[static_cast<size_t>(i + 1)] += t;
    c[static_cast<size_t>(i)] -= t;
  }
  return Poly(std::move(c));
}

Poly xpoly_to_ypoly(const Poly& p) {
  return p.subst(Poly({1, -1}));  // X = 1 - Y
}

Poly ypoly_to_xpoly(const Poly& p) {
  return p.subst(Poly({1, -1}));  // Y = 1 - X
}

}  // namespace mspgw
