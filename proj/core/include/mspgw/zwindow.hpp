#pragma once

#include "mspgw/qseries.hpp"

#include <limits>
#include <vector>

namespace mspgw {

// Laurent-in-z object over QSeries with an explicit validity window
// [zmin, zmax]. Outside the window a side is either proven zero
// ("exact" side) or unknown (truncated tail); products shrink windows
// accordingly and reading outside the window throws. This discipline is what
// keeps the mixed z->0 / z->infinity expansions honest.
class ZWindowSeries {
 public:
  ZWindowSeries() : zmin_(0), zmax_(-1), exact_below_(true), exact_above_(true) {}
  ZWindowSeries(int zmin, int zmax, int q_order, bool exact_below = false,
                bool exact_above = false);

  static ZWindowSeries zero(int q_order);  // exact zero everywhere

  int zmin() const { return zmin_; }
  int zmax() const { return zmax_; }
  bool exact_below() const { return exact_below_; }
  bool exact_above() const { return exact_above_; }
  void set_exact_below(bool v) { exact_below_ = v; }
  void set_exact_above(bool v) { exact_above_ = v; }
  bool empty_window() const { return zmax_ < zmin_; }
  int q_order() const;

  // Coefficient of z^e; throws WindowUnderflow outside the known range.
  const QSeries& at(int e) const;
  QSeries at_or_zero(int e) const;  // exact-zero sides read as zero
  void set(int e, const QSeries& v);

  bool known_at(int e) const;

  ZWindowSeries operator-() const;
  friend ZWindowSeries operator+(const ZWindowSeries& a, const ZWindowSeries& b);
  friend ZWindowSeries operator-(const ZWindowSeries& a, const ZWindowSeries& b);
  friend ZWindowSeries operator*(const ZWindowSeries& a, const ZWindowSeries& b);
  ZWindowSeries scaled(const QSeries& c) const;
  ZWindowSeries scaled(const Rational& c) const;
  ZWindowSeries zshifted(int k) const;  // multiply by z^k
  // z -> -z: negates odd coefficients.
  ZWindowSeries zflip() const;
  ZWindowSeries clipped(int lo, int hi) const;

  bool is_zero() const;

 private:
  int zmin_, zmax_;
  bool exact_below_, exact_above_;
  std::vector<QSeries> e_;  // index zpow - zmin
};

// Square matrix of z-window series sharing one window and exactness flags.
// Stored per z-power as a dense matrix of QSeries.
class ZMatrix {
 public:
  ZMatrix() : dim_(0), zmin_(0), zmax_(-1), exact_below_(true), exact_above_(true) {}
  ZMatrix(int dim, int zmin, int zmax, int q_order, bool exact_below = false,
          bool exact_above = false);

  static ZMatrix identity(int dim, int q_order);

  int dim() const { return dim_; }
  int zmin() const { return zmin_; }
  int zmax() const { return zmax_; }
  int q_order() const { return q_order_; }
  bool exact_below() const { return exact_below_; }
  bool exact_above() const { return exact_above_; }
  void set_exact_below(bool v) { exact_below_ = v; }
  void set_exact_above(bool v) { exact_above_ = v; }

  const QSeries& at(int zpow, int i, int j) const;
  void set(int zpow, int i, int j, const QSeries& v);
  bool known_at(int zpow) const;

  ZWindowSeries entry(int i, int j) const;

  ZMatrix operator-() const;
  friend ZMatrix operator+(const ZMatrix& a, const ZMatrix& b);
  friend ZMatrix operator-(const ZMatrix& a, const ZMatrix& b);
  friend ZMatrix operator*(const ZMatrix& a, const ZMatrix& b);

  // Inverse by Neumann iteration; requires the z^0 q^0 part to be the
  // identity and the correction supported on one z-sign (plus positive
  // q-degree at z^0), which covers every S/Delta/R-shaped matrix here.
  ZMatrix inverse() const;

  ZMatrix transpose() const;
  ZMatrix zflip() const;  // z -> -z
  ZMatrix clipped(int lo, int hi) const;

  bool is_zero() const;

 private:
  size_t idx(int zpow, int i, int j) const {
    return (static_cast<size_t>(zpow - zmin_) * static_cast<size_t>(dim_) +
            static_cast<size_t>(i)) *
               static_cast<size_t>(dim_) +
           static_cast<size_t>(j);
  }
  int dim_;
  int zmin_, zmax_;
  bool exact_below_, exact_above_;
  int q_order_ = 0;
  std::vector<QSeries> e_;
};

}  // namespace mspgw
