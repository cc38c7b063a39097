#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mspgw {

using BigInt = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Error taxonomy used across the library. Each operation documents which of
// these it can raise.
struct ZeroConstantTerm : Error { using Error::Error; };
struct BadConstantTerm : Error { using Error::Error; };
struct NonIntegrable : Error { using Error::Error; };
struct CoefficientOutOfRange : Error { using Error::Error; };
struct WindowUnderflow : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct WeightMismatch : Error { using Error::Error; };
struct EliminationFailure : Error { using Error::Error; };
struct RangeExceeded : Error { using Error::Error; };
struct IntegrationObstruction : Error { using Error::Error; };
struct BirkhoffMismatch : Error { using Error::Error; };
struct NoExactFit : Error { using Error::Error; };
struct AmbiguousFit : Error { using Error::Error; };
struct GenusUnsupported : Error { using Error::Error; };
struct Unstabilizable : Error { using Error::Error; };
struct BadInsertion : Error { using Error::Error; };
struct OracleMissing : Error { using Error::Error; };
struct MissingFjrw : Error { using Error::Error; };
struct DivisionInexact : Error { using Error::Error; };
struct PoleCollision : Error { using Error::Error; };
struct Underdetermined : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };

// Exact rational number, always reduced, denominator > 0. No floating point
// enters the pipeline anywhere.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    normalize();
  }

  static Rational of(long long n, long long d) {
    return Rational(BigInt(n), BigInt(d));
  }
  // Parses "num/den" or "num".
  static Rational parse(const std::string& s);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

  Rational operator-() const { return Rational(-num_, den_, xnorm{}); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }

  Rational inverse() const {
    if (num_ == 0) throw Error("Rational: inverse of zero");
    return Rational(den_, num_);
  }

  // Integer exponents only; e < 0 requires a nonzero value.
  Rational pow(long long e) const;

  std::string str() const;  // "num/den", or "num" when den == 1

 private:
  struct xnorm {};  // tag: inputs already normalized
  Rational(BigInt n, BigInt d, xnorm) : num_(std::move(n)), den_(std::move(d)) {}
  void normalize();

  BigInt num_;
  BigInt den_;
};

BigInt factorial(unsigned n);
BigInt binomial_int(unsigned n, unsigned k);
// Binomial coefficient C(r, k) for rational r and integer k >= 0.
Rational binomial(const Rational& r, unsigned k);
// Falling factorial (a)_k = a (a-1) ... (a-k+1).
Rational falling(const Rational& a, unsigned k);
// Bernoulli number B_n (B_1 = -1/2 convention); exact, memoized.
Rational bernoulli(unsigned n);

}  // namespace mspgw
