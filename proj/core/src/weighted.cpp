#include "mspgw/weighted.hpp"

namespace mspgw {

WeightedSeries operator+(const WeightedSeries& a, const WeightedSeries& b) {
  if (a.weight != b.weight)
    throw WeightMismatch("WeightedSeries: addition requires equal weights (" +
                         std::to_string(a.weight) + " vs " +
                         std::to_string(b.weight) + ")");
  return WeightedSeries(a.weight, a.value + b.value);
}

WeightedSeries operator*(const WeightedSeries& a, const WeightedSeries& b) {
  return WeightedSeries(a.weight + b.weight, a.value * b.value);
}

WeightedSeries operator*(const Rational& c, const WeightedSeries& a) {
  return WeightedSeries(a.weight, c * a.value);
}

QSeries L_pow(int m, int N, int order) {
  return binom_power(Rational(-3125), Rational(m, N), order);
}

WeightedSeries reduce_weight(const WeightedSeries& w, int new_weight, int N) {
  int diff = w.weight - new_weight;
  if (diff % N != 0)
    throw WeightMismatch("reduce_weight: shift must be a multiple of N");
  int k = diff / N;  // w = value L^{new+kN}: fold L_alpha^{kN} = (5^5 q - 1)^k
  QSeries v = w.value;
  int order = v.order();
  QSeries lN = QSeries::monomial(1, 3125, order) - QSeries::one(order);
  if (k >= 0) {
    for (int i = 0; i < k; ++i) v = v * lN;
  } else {
    QSeries inv = lN.inverse();
    for (int i = 0; i < -k; ++i) v = v * inv;
  }
  return WeightedSeries(new_weight, v);
}

QSeries hour_sum(const WeightedSeries& w, int N) {
  int order = w.value.order();
  if (w.weight % N != 0) return QSeries::zero(order);
  int k = w.weight / N;
  // sum_alpha L_alpha^{kN} = N (-(1-5^5 q))^k
  QSeries f = binom_power(Rational(-3125), Rational(k), order);
  QSeries r = Rational(BigInt(N)) * (w.value * f);
  if (k % 2 != 0) r = -r;
  return r;
}

WeightedSeries from_phase(const QSeries& f, int m, int N) {
  return WeightedSeries(m, f * L_pow(-m, N, f.order()));
}

QSeries to_phase(const WeightedSeries& w, int N) {
  return w.value * L_pow(w.weight, N, w.value.order());
}

void WeightLedger::add(const WeightedSeries& w) {
  if (w.value.is_zero() && terms_.count(w.weight) == 0) return;
  auto it = terms_.find(w.weight);
  if (it == terms_.end())
    terms_.emplace(w.weight, w.value);
  else
    it->second += w.value;
}

void WeightLedger::add(const WeightLedger& other) {
  for (const auto& [w, v] : other.terms_) add(WeightedSeries(w, v));
}

bool WeightLedger::empty_or_zero() const {
  for (const auto& [w, v] : terms_)
    if (!v.is_zero()) return false;
  return true;
}

WeightLedger WeightLedger::operator-() const {
  WeightLedger r;
  for (const auto& [w, v] : terms_) r.terms_.emplace(w, -v);
  return r;
}

WeightLedger operator+(const WeightLedger& a, const WeightLedger& b) {
  WeightLedger r = a;
  r.add(b);
  return r;
}

WeightLedger operator*(const WeightLedger& a, const WeightLedger& b) {
  WeightLedger r;
  for (const auto& [wa, va] : a.terms_)
    for (const auto& [wb, vb] : b.terms_)
      r.add(WeightedSeries(wa + wb, va * vb));
  return r;
}

WeightLedger WeightLedger::scaled(const QSeries& c) const {
  WeightLedger r;
  for (const auto& [w, v] : terms_) r.terms_.emplace(w, v * c);
  return r;
}

WeightLedger WeightLedger::scaled(const Rational& c) const {
  WeightLedger r;
  for (const auto& [w, v] : terms_) r.terms_.emplace(w, c * v);
  return r;
}

WeightLedger WeightLedger::shifted_weight(int dw) const {
  WeightLedger r;
  for (const auto& [w, v] : terms_) r.terms_.emplace(w + dw, v);
  return r;
}

WeightLedger WeightLedger::canonicalized(int N) const {
  WeightLedger r;
  for (const auto& [w, v] : terms_) {
    if (v.is_zero()) continue;
    int res = ((w % N) + N) % N;
    r.add(reduce_weight(WeightedSeries(w, v), res, N));
  }
  return r;
}

QSeries WeightLedger::hour_summed(int N, int order) const {
  QSeries acc = QSeries::zero(order);
  for (const auto& [w, v] : terms_)
    acc += hour_sum(WeightedSeries(w, v.truncated(order)), N);
  return acc;
}

WeightedSeries WeightLedger::single(int N) const {
  WeightLedger c = canonicalized(N);
  WeightedSeries out;
  bool seen = false;
  for (const auto& [w, v] : c.terms()) {
    if (v.is_zero()) continue;
    if (seen) throw WeightMismatch("WeightLedger: not a single phase class");
    out = WeightedSeries(w, v);
    seen = true;
  }
  if (!seen) return WeightedSeries(0, QSeries());
  return out;
}

}  // namespace mspgw
