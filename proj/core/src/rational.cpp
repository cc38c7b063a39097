#include "mspgw/rational.hpp"

#include <mutex>
#include <vector>

namespace mspgw {

void Rational::normalize() {
  if (den_ == 0) throw Error("Rational: zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

Rational Rational::pow(long long e) const {
  if (e == 0) return Rational(1);
  if (e < 0) return inverse().pow(-e);
  Rational base = *this, acc = 1;
  unsigned long long k = static_cast<unsigned long long>(e);
  while (k) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

std::string Rational::str() const {
  std::string s = num_.str();
  if (den_ != 1) s += "/" + den_.str();
  return s;
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial_int(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

Rational binomial(const Rational& r, unsigned k) {
  Rational acc = 1;
  for (unsigned i = 0; i < k; ++i) {
    acc *= (r - Rational(static_cast<long long>(i)));
    acc /= Rational(static_cast<long long>(i + 1));
  }
  return acc;
}

Rational falling(const Rational& a, unsigned k) {
  Rational acc = 1;
  for (unsigned i = 0; i < k; ++i) acc *= (a - Rational(static_cast<long long>(i)));
  return acc;
}

Rational bernoulli(unsigned n) {
  static std::vector<Rational> table;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  // sum_{j=0}^{m} C(m+1,j) B_j = 0 for m >= 1, seeded with B_0 = 1.
  while (table.size() <= n) {
    unsigned m = static_cast<unsigned>(table.size());
    if (m == 0) {
      table.push_back(Rational(1));
      continue;
    }
    Rational s = 0;
    for (unsigned j = 0; j < m; ++j)
      s += Rational(binomial_int(m + 1, j)) * table[j];
    table.push_back(-s / Rational(BigInt(m + 1)));
  }
  return table[n];
}

}  // namespace mspgw
