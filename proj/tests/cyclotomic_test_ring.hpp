#pragma once

// Test-only symbolic arithmetic in Q(zeta_N)[t]/(t^N + 1) for prime N:
// coefficients on zeta^a t^b with a in [0, N-1) after reduction by the
// cyclotomic polynomial 1 + zeta + ... + zeta^{N-1} = 0, and b in [0, N)
// with t^N = -1. The oracles only ever divide by monomials, handled via
// explicit inverse monomials.

#include "mspgw/rational.hpp"

#include <vector>

namespace mspgw_test {

using mspgw::Rational;

struct Cyc {
  int N = 0;
  std::vector<Rational> c;  // index a*(N) + b, a in [0, N-1), b in [0, N)

  explicit Cyc(int n) : N(n), c(static_cast<size_t>(n - 1) * n) {}

  static Cyc zero(int n) { return Cyc(n); }
  static Cyc one(int n) { return monomial(n, 0, 0, Rational(1)); }

  // r * zeta^a t^b with arbitrary integer exponents, fully reduced.
  static Cyc monomial(int n, long a, long b, const Rational& r) {
    Cyc x(n);
    x.add_term(a, b, r);
    return x;
  }

  void add_term(long a, long b, const Rational& v0) {
    long am = ((a % N) + N) % N;
    long bf = ((b % (2L * N)) + 2L * N) % (2L * N);
    Rational v = v0;
    if (bf >= N) {
      bf -= N;
      v = -v;  // t^N = -1
    }
    if (am == N - 1) {
      // zeta^{N-1} = -(1 + zeta + ... + zeta^{N-2})
      for (long aa = 0; aa < N - 1; ++aa)
        c[static_cast<size_t>(aa) * N + static_cast<size_t>(bf)] -= v;
    } else {
      c[static_cast<size_t>(am) * N + static_cast<size_t>(bf)] += v;
    }
  }

  const Rational& at(int a, int b) const {
    return c[static_cast<size_t>(a) * N + static_cast<size_t>(b)];
  }

  bool is_zero() const {
    for (const auto& x : c)
      if (!x.is_zero()) return false;
    return true;
  }

  friend Cyc operator+(const Cyc& x, const Cyc& y) {
    Cyc r = x;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += y.c[i];
    return r;
  }
  friend Cyc operator-(const Cyc& x, const Cyc& y) {
    Cyc r = x;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= y.c[i];
    return r;
  }
  friend Cyc operator*(const Cyc& x, const Cyc& y) {
    Cyc r(x.N);
    int n = x.N;
    for (int a1 = 0; a1 < n - 1; ++a1)
      for (int b1 = 0; b1 < n; ++b1) {
        const Rational& v1 = x.at(a1, b1);
        if (v1.is_zero()) continue;
        for (int a2 = 0; a2 < n - 1; ++a2)
          for (int b2 = 0; b2 < n; ++b2) {
            const Rational& v2 = y.at(a2, b2);
            if (v2.is_zero()) continue;
            r.add_term(a1 + a2, b1 + b2, v1 * v2);
          }
      }
    return r;
  }
  friend Cyc operator*(const Rational& s, const Cyc& x) {
    Cyc r = x;
    for (auto& v : r.c) v *= s;
    return r;
  }
  friend Cyc operator*(const Cyc& x, const Rational& s) { return s * x; }
  friend bool operator==(const Cyc& x, const Cyc& y) { return x.c == y.c; }

  Cyc pow(long e) const {
    Cyc acc = Cyc::one(N);
    Cyc base = *this;
    if (e < 0) throw mspgw::Error("Cyc::pow negative");
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  bool is_rational(Rational* out = nullptr) const {
    for (int a = 0; a < N - 1; ++a)
      for (int b = 0; b < N; ++b)
        if (!(a == 0 && b == 0) && !at(a, b).is_zero()) return false;
    if (out) *out = at(0, 0);
    return true;
  }
};

// t_alpha = -zeta^alpha t.
inline Cyc t_alpha(int n, int alpha) {
  return Cyc::monomial(n, alpha, 1, Rational(-1));
}
// (zeta^alpha t)^m (the q = 0 value of L_alpha^m), any integer m.
inline Cyc phase_unit(int n, int alpha, long m) {
  long mm = ((m % (2L * n)) + 2L * n) % (2L * n);
  return Cyc::monomial(n, alpha * mm, mm, Rational(1));
}

}  // namespace mspgw_test
