#pragma once

#include "mspgw/qseries.hpp"

#include <map>

namespace mspgw {

// f(q) * L_alpha^m at an unspecified hour alpha, where
//   L_alpha = zeta_N^alpha t (1 - 5^5 q)^{1/N},  t^N = -1.
// The hour never appears explicitly: all alpha-dependence is the integer
// weight m, and hour sums collapse by the divisibility rule below. This is
// what removes cyclotomic arithmetic from the pipeline.
struct WeightedSeries {
  int weight = 0;
  QSeries value;

  WeightedSeries() {}
  WeightedSeries(int w, QSeries v) : weight(w), value(std::move(v)) {}
};

WeightedSeries operator+(const WeightedSeries& a, const WeightedSeries& b);
WeightedSeries operator*(const WeightedSeries& a, const WeightedSeries& b);
WeightedSeries operator*(const Rational& c, const WeightedSeries& a);

// L^m = (1 - 5^5 q)^{m/N} as an exact series (binomial expansion).
QSeries L_pow(int m, int N, int order);

// Weight shift by multiples of N using L_alpha^N = -(1 - 5^5 q):
// the returned object is equal to w as a function of alpha.
WeightedSeries reduce_weight(const WeightedSeries& w, int new_weight, int N);

// sum_{alpha=1}^{N} value * L_alpha^m:
//   0 unless N | m, else N (-1)^{m/N} (1-5^5 q)^{m/N} * value.
QSeries hour_sum(const WeightedSeries& w, int N);

// Phase representation: f * (zeta^alpha t)^m (the q=0 value of L_alpha^m).
// Conversions fold the (1-5^5q)^{±m/N} factor into the value.
WeightedSeries from_phase(const QSeries& f, int m, int N);
QSeries to_phase(const WeightedSeries& w, int N);

// Finite sum of WeightedSeries of distinct weights. Addition merges;
// canonicalize() folds weights into [0, N) so equal functions of alpha
// compare equal.
class WeightLedger {
 public:
  WeightLedger() {}
  explicit WeightLedger(const WeightedSeries& w) { add(w); }

  void add(const WeightedSeries& w);
  void add(const WeightLedger& other);
  bool empty_or_zero() const;
  const std::map<int, QSeries>& terms() const { return terms_; }

  WeightLedger operator-() const;
  friend WeightLedger operator+(const WeightLedger& a, const WeightLedger& b);
  friend WeightLedger operator*(const WeightLedger& a, const WeightLedger& b);
  WeightLedger scaled(const QSeries& c) const;
  WeightLedger scaled(const Rational& c) const;
  WeightLedger shifted_weight(int dw) const;  // multiply by L_alpha^{dw}

  WeightLedger canonicalized(int N) const;
  QSeries hour_summed(int N, int order) const;
  // Evaluate with L_alpha^m -> (zeta^alpha t)^m phase stripped off: returns
  // the alpha-independent series sum only when all canonical weights agree;
  // used by tests that know the ledger is a single phase class.
  WeightedSeries single(int N) const;

 private:
  std::map<int, QSeries> terms_;
};

}  // namespace mspgw
