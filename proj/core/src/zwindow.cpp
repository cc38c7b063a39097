#include "mspgw/zwindow.hpp"

#include <algorithm>

namespace mspgw {

namespace {
constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Possibly-nonzero support bound for one side.
inline int supp_lo(const ZWindowSeries& s) { return s.exact_below() ? s.zmin() : -kInf; }
inline int supp_hi(const ZWindowSeries& s) { return s.exact_above() ? s.zmax() : kInf; }
}  // namespace

ZWindowSeries::ZWindowSeries(int zmin, int zmax, int q_order, bool exact_below,
                             bool exact_above)
    : zmin_(zmin), zmax_(zmax), exact_below_(exact_below), exact_above_(exact_above) {
  if (zmax_ >= zmin_)
    e_.assign(static_cast<size_t>(zmax_ - zmin_ + 1), QSeries::zero(q_order));
}

ZWindowSeries ZWindowSeries::zero(int q_order) {
  ZWindowSeries s(0, 0, q_order, true, true);
  return s;
}

int ZWindowSeries::q_order() const {
  if (e_.empty()) throw Error("ZWindowSeries: empty window has no q order");
  return e_[0].order();
}

const QSeries& ZWindowSeries::at(int e) const {
  if (e < zmin_ || e > zmax_) {
    if ((e < zmin_ && exact_below_) || (e > zmax_ && exact_above_)) {
      static thread_local QSeries zero_cache;
      zero_cache = QSeries::zero(q_order());
      return zero_cache;
    }
    throw WindowUnderflow("ZWindowSeries: z^" + std::to_string(e) +
                          " outside window [" + std::to_string(zmin_) + "," +
                          std::to_string(zmax_) + "]");
  }
  return e_[static_cast<size_t>(e - zmin_)];
}

QSeries ZWindowSeries::at_or_zero(int e) const {
  if (e < zmin_ || e > zmax_) {
    if ((e < zmin_ && exact_below_) || (e > zmax_ && exact_above_))
      return QSeries::zero(q_order());
    throw WindowUnderflow("ZWindowSeries: z^" + std::to_string(e) + " unknown");
  }
  return e_[static_cast<size_t>(e - zmin_)];
}

void ZWindowSeries::set(int e, const QSeries& v) {
  if (e < zmin_ || e > zmax_)
    throw WindowUnderflow("ZWindowSeries: set outside window");
  e_[static_cast<size_t>(e - zmin_)] = v;
}

bool ZWindowSeries::known_at(int e) const {
  if (e >= zmin_ && e <= zmax_) return true;
  return (e < zmin_ && exact_below_) || (e > zmax_ && exact_above_);
}

ZWindowSeries ZWindowSeries::operator-() const {
  ZWindowSeries r = *this;
  for (auto& x : r.e_) x = -x;
  return r;
}

ZWindowSeries operator+(const ZWindowSeries& a, const ZWindowSeries& b) {
  if (a.empty_window()) return b;
  if (b.empty_window()) return a;
  int q_order = std::min(a.q_order(), b.q_order());
  int lo_known = std::max(a.exact_below_ ? -kInf : a.zmin_,
                          b.exact_below_ ? -kInf : b.zmin_);
  int hi_known = std::min(a.exact_above_ ? kInf : a.zmax_,
                          b.exact_above_ ? kInf : b.zmax_);
  int lo = std::max(lo_known, std::min(a.zmin_, b.zmin_));
  int hi = std::min(hi_known, std::max(a.zmax_, b.zmax_));
  ZWindowSeries r(lo, hi, q_order, a.exact_below_ && b.exact_below_,
                  a.exact_above_ && b.exact_above_);
  for (int e = lo; e <= hi; ++e)
    r.set(e, a.at_or_zero(e).truncated(q_order) + b.at_or_zero(e).truncated(q_order));
  return r;
}

ZWindowSeries operator-(const ZWindowSeries& a, const ZWindowSeries& b) {
  return a + (-b);
}

ZWindowSeries operator*(const ZWindowSeries& a, const ZWindowSeries& b) {
  if (a.empty_window() || b.empty_window())
    return ZWindowSeries::zero(a.empty_window() ? (b.empty_window() ? 0 : b.q_order())
                                                : a.q_order());
  int q_order = std::min(a.q_order(), b.q_order());
  // Coefficient at e is computable iff every possibly-nonzero split lies in
  // the known windows of both factors.
  auto computable = [&](int e) {
    int lo_i = std::max(supp_lo(a), e - supp_hi(b));
    int hi_i = std::min(supp_hi(a), e - supp_lo(b));
    if (lo_i > hi_i) return true;  // exact zero
    return lo_i >= a.zmin_ && hi_i <= a.zmax_ && e - hi_i >= b.zmin_ &&
           e - lo_i <= b.zmax_;
  };
  long cand_lo = static_cast<long>(a.zmin_) + b.zmin_;
  long cand_hi = static_cast<long>(a.zmax_) + b.zmax_;
  int lo = kInf, hi = -kInf;
  for (long e = cand_lo; e <= cand_hi; ++e) {
    if (computable(static_cast<int>(e))) {
      lo = std::min<int>(lo, static_cast<int>(e));
      hi = std::max<int>(hi, static_cast<int>(e));
    }
  }
  bool xb = a.exact_below_ && b.exact_below_;
  bool xa = a.exact_above_ && b.exact_above_;
  if (lo > hi) {
    ZWindowSeries r(0, -1, q_order, xb, xa);
    return r;
  }
  ZWindowSeries r(lo, hi, q_order, xb, xa);
  for (int e = lo; e <= hi; ++e) {
    QSeries acc = QSeries::zero(q_order);
    int lo_i = std::max(std::max(supp_lo(a), e - supp_hi(b)), a.zmin_);
    int hi_i = std::min(std::min(supp_hi(a), e - supp_lo(b)), a.zmax_);
    for (int i = lo_i; i <= hi_i; ++i)
      acc += a.at(i).truncated(q_order) * b.at(e - i).truncated(q_order);
    r.set(e, acc);
  }
  return r;
}

ZWindowSeries ZWindowSeries::scaled(const QSeries& c) const {
  ZWindowSeries r = *this;
  for (auto& x : r.e_) x = x * c;
  return r;
}

ZWindowSeries ZWindowSeries::scaled(const Rational& c) const {
  ZWindowSeries r = *this;
  for (auto& x : r.e_) x = c * x;
  return r;
}

ZWindowSeries ZWindowSeries::zshifted(int k) const {
  ZWindowSeries r = *this;
  r.zmin_ += k;
  r.zmax_ += k;
  return r;
}

ZWindowSeries ZWindowSeries::zflip() const {
  ZWindowSeries r = *this;
  for (int e = zmin_; e <= zmax_; ++e)
    if (e % 2 != 0) r.set(e, -r.at(e));
  return r;
}

ZWindowSeries ZWindowSeries::clipped(int lo, int hi) const {
  if (empty_window()) return *this;
  int nlo = std::max(lo, zmin_), nhi = std::min(hi, zmax_);
  ZWindowSeries r(nlo, nhi, q_order(), exact_below_ && nlo == zmin_,
                  exact_above_ && nhi == zmax_);
  for (int e = nlo; e <= nhi; ++e) r.set(e, at(e));
  return r;
}

bool ZWindowSeries::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

ZMatrix::ZMatrix(int dim, int zmin, int zmax, int q_order, bool exact_below,
                 bool exact_above)
    : dim_(dim), zmin_(zmin), zmax_(zmax), exact_below_(exact_below),
      exact_above_(exact_above), q_order_(q_order) {
  if (zmax_ >= zmin_)
    e_.assign(static_cast<size_t>(zmax_ - zmin_ + 1) * dim_ * dim_,
              QSeries::zero(q_order_));
}

ZMatrix ZMatrix::identity(int dim, int q_order) {
  ZMatrix m(dim, 0, 0, q_order, true, true);
  for (int i = 0; i < dim; ++i) m.set(0, i, i, QSeries::one(q_order));
  return m;
}

const QSeries& ZMatrix::at(int zpow, int i, int j) const {
  if (zpow < zmin_ || zpow > zmax_) {
    if ((zpow < zmin_ && exact_below_) || (zpow > zmax_ && exact_above_)) {
      static thread_local QSeries zero_cache;
      zero_cache = QSeries::zero(q_order_);
      return zero_cache;
    }
    throw WindowUnderflow("ZMatrix: z^" + std::to_string(zpow) + " outside window");
  }
  return e_[idx(zpow, i, j)];
}

void ZMatrix::set(int zpow, int i, int j, const QSeries& v) {
  if (zpow < zmin_ || zpow > zmax_)
    throw WindowUnderflow("ZMatrix: set outside window");
  e_[idx(zpow, i, j)] = v;
}

bool ZMatrix::known_at(int zpow) const {
  if (zpow >= zmin_ && zpow <= zmax_) return true;
  return (zpow < zmin_ && exact_below_) || (zpow > zmax_ && exact_above_);
}

ZWindowSeries ZMatrix::entry(int i, int j) const {
  ZWindowSeries s(zmin_, zmax_, q_order_, exact_below_, exact_above_);
  for (int e = zmin_; e <= zmax_; ++e) s.set(e, at(e, i, j));
  return s;
}

ZMatrix ZMatrix::operator-() const {
  ZMatrix r = *this;
  for (auto& x : r.e_) x = -x;
  return r;
}

ZMatrix operator+(const ZMatrix& a, const ZMatrix& b) {
  if (a.dim_ != b.dim_) throw DimensionMismatch("ZMatrix: add dim mismatch");
  int q_order = std::min(a.q_order_, b.q_order_);
  int lo_known = std::max(a.exact_below_ ? -kInf : a.zmin_,
                          b.exact_below_ ? -kInf : b.zmin_);
  int hi_known = std::min(a.exact_above_ ? kInf : a.zmax_,
                          b.exact_above_ ? kInf : b.zmax_);
  int lo = std::max(lo_known, std::min(a.zmin_, b.zmin_));
  int hi = std::min(hi_known, std::max(a.zmax_, b.zmax_));
  ZMatrix r(a.dim_, lo, hi, q_order, a.exact_below_ && b.exact_below_,
            a.exact_above_ && b.exact_above_);
  for (int e = lo; e <= hi; ++e)
    for (int i = 0; i < a.dim_; ++i)
      for (int j = 0; j < a.dim_; ++j) {
        QSeries va = (e >= a.zmin_ && e <= a.zmax_) ? a.at(e, i, j)
                                                    : QSeries::zero(q_order);
        QSeries vb = (e >= b.zmin_ && e <= b.zmax_) ? b.at(e, i, j)
                                                    : QSeries::zero(q_order);
        r.set(e, i, j, va.truncated(q_order) + vb.truncated(q_order));
      }
  return r;
}

ZMatrix operator-(const ZMatrix& a, const ZMatrix& b) { return a + (-b); }

ZMatrix operator*(const ZMatrix& a, const ZMatrix& b) {
  if (a.dim_ != b.dim_) throw DimensionMismatch("ZMatrix: mul dim mismatch");
  int q_order = std::min(a.q_order_, b.q_order_);
  auto asupp_lo = a.exact_below_ ? a.zmin_ : -kInf;
  auto asupp_hi = a.exact_above_ ? a.zmax_ : kInf;
  auto bsupp_lo = b.exact_below_ ? b.zmin_ : -kInf;
  auto bsupp_hi = b.exact_above_ ? b.zmax_ : kInf;
  auto computable = [&](int e) {
    int lo_i = std::max(asupp_lo, e - bsupp_hi);
    int hi_i = std::min(asupp_hi, e - bsupp_lo);
    if (lo_i > hi_i) return true;
    return lo_i >= a.zmin_ && hi_i <= a.zmax_ && e - hi_i >= b.zmin_ &&
           e - lo_i <= b.zmax_;
  };
  long cand_lo = static_cast<long>(a.zmin_) + b.zmin_;
  long cand_hi = static_cast<long>(a.zmax_) + b.zmax_;
  int lo = kInf, hi = -kInf;
  for (long e = cand_lo; e <= cand_hi; ++e)
    if (computable(static_cast<int>(e))) {
      lo = std::min<int>(lo, static_cast<int>(e));
      hi = std::max<int>(hi, static_cast<int>(e));
    }
  bool xb = a.exact_below_ && b.exact_below_;
  bool xa = a.exact_above_ && b.exact_above_;
  ZMatrix r(a.dim_, lo > hi ? 0 : lo, lo > hi ? -1 : hi, q_order, xb, xa);
  for (int e = r.zmin_; e <= r.zmax_; ++e) {
    int lo_i = std::max(std::max(asupp_lo, e - bsupp_hi), a.zmin_);
    int hi_i = std::min(std::min(asupp_hi, e - bsupp_lo), a.zmax_);
    for (int i = 0; i < a.dim_; ++i)
      for (int j = 0; j < a.dim_; ++j) {
        QSeries acc = QSeries::zero(q_order);
        for (int zi = lo_i; zi <= hi_i; ++zi)
          for (int k = 0; k < a.dim_; ++k) {
            const QSeries& x = a.at(zi, i, k);
            if (x.is_zero()) continue;
            const QSeries& y = b.at(e - zi, k, j);
            if (y.is_zero()) continue;
            acc += x.truncated(q_order) * y.truncated(q_order);
          }
        r.set(e, i, j, acc);
      }
  }
  return r;
}

ZMatrix ZMatrix::inverse() const {
  // A = I + M with vanishing z^0 q^0 part of M; Neumann sum terminates in the
  // (|z|, q-degree) filtration provided M is supported on one z-sign.
  ZMatrix id = ZMatrix::identity(dim_, q_order_);
  ZMatrix m = *this - id;
  bool has_neg = false, has_pos = false;
  for (int e = m.zmin_; e <= m.zmax_; ++e) {
    bool nz = false;
    for (int i = 0; i < dim_ && !nz; ++i)
      for (int j = 0; j < dim_ && !nz; ++j)
        if (!m.at(e, i, j).is_zero()) nz = true;
    if (!nz) continue;
    if (e < 0) has_neg = true;
    if (e > 0) has_pos = true;
  }
  if (has_neg && has_pos)
    throw Error("ZMatrix: inverse requires one-signed z support");
  // z^0 part must start at q^1.
  if (known_at(0)) {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        const QSeries& v = m.at(0, i, j);
        if (!v.is_zero() && v.valuation() == 0)
          throw Error("ZMatrix: inverse needs identity z^0 q^0 part");
      }
  }
  int span = (zmax_ >= zmin_) ? (zmax_ - zmin_) : 0;
  int steps = span + q_order_ + 1;
  ZMatrix acc = id, pw = id;
  for (int k = 1; k <= steps; ++k) {
    pw = pw * m;
    if (pw.is_zero()) break;
    acc = (k % 2 == 1) ? acc - pw : acc + pw;
  }
  return acc;
}

ZMatrix ZMatrix::transpose() const {
  ZMatrix r = *this;
  for (int e = zmin_; e <= zmax_; ++e)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < i; ++j) {
        QSeries t = r.at(e, i, j);
        r.set(e, i, j, r.at(e, j, i));
        r.set(e, j, i, t);
      }
  return r;
}

ZMatrix ZMatrix::zflip() const {
  ZMatrix r = *this;
  for (int e = zmin_; e <= zmax_; ++e) {
    if (e % 2 == 0) continue;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r.set(e, i, j, -at(e, i, j));
  }
  return r;
}

ZMatrix ZMatrix::clipped(int lo, int hi) const {
  int nlo = std::max(lo, zmin_), nhi = std::min(hi, zmax_);
  ZMatrix r(dim_, nlo, nhi, q_order_, exact_below_ && nlo == zmin_,
            exact_above_ && nhi == zmax_);
  for (int e = nlo; e <= nhi; ++e)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r.set(e, i, j, at(e, i, j));
  return r;
}

bool ZMatrix::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

}  // namespace mspgw
