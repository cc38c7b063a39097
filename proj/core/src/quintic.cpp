#include "mspgw/quintic.hpp"

#include "mspgw/linalg.hpp"

#include <mutex>

namespace mspgw {

namespace {

// Degree-3 truncated polynomial in u = H/z, the only H-arithmetic the
// I-function needs (H^4 = 0 on the threefold).
using HPoly = std::array<Rational, 4>;

HPoly hp_mul(const HPoly& a, const HPoly& b) {
  HPoly r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) r[static_cast<size_t>(i + j)] += a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
  return r;
}

// (1 + c u)^{-5} to degree 3.
HPoly hp_inv_pow5(const Rational& c) {
  HPoly r{};
  for (int i = 0; i < 4; ++i)
    r[static_cast<size_t>(i)] = binomial(Rational(-5), static_cast<unsigned>(i)) * c.pow(i);
  return r;
}

}  // namespace

const QuinticIData& quintic_I(int order) {
  static std::map<int, QuinticIData> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  QuinticIData d;
  d.I0 = QSeries::zero(order);
  d.I1 = QSeries::zero(order);
  d.I2 = QSeries::zero(order);
  d.I3 = QSeries::zero(order);
  for (int deg = 0; deg <= order; ++deg) {
    // q^deg coefficient: (5deg)!/(deg!)^5 * prod(1+5u/m) / prod(1+u/m)^5.
    Rational lead(factorial(static_cast<unsigned>(5 * deg)),
                  boost::multiprecision::pow(factorial(static_cast<unsigned>(deg)), 5));
    HPoly f{};
    f[0] = 1;
    for (int m = 1; m <= 5 * deg; ++m) {
      HPoly g{};
      g[0] = 1;
      g[1] = Rational(5, m);
      f = hp_mul(f, g);
    }
    for (int m = 1; m <= deg; ++m) f = hp_mul(f, hp_inv_pow5(Rational(1, m)));
    d.I0.set(deg, lead * f[0]);
    d.I1.set(deg, lead * f[1]);
    d.I2.set(deg, lead * f[2]);
    d.I3.set(deg, lead * f[3]);
  }
  d.J1 = d.I1 * d.I0.inverse();
  d.J2 = d.I2 * d.I0.inverse();
  d.J3 = d.I3 * d.I0.inverse();
  d.I11 = QSeries::one(order) + D(d.J1);
  // I_{2,2} = D(D J~_2 / D J~_1) with the log-bearing mirror-map components
  // J~_1 = log q + J_1, J~_2 = (log q)^2/2 + J_1 log q + J_2; the logs cancel
  // and leave 1 + D((J_1 + D J_2)/I_{1,1}). The classical limit is 1.
  d.I22 = QSeries::one(order) + D((d.J1 + D(d.J2)) * d.I11.inverse());
  auto res = cache.emplace(order, std::move(d));
  return res.first->second;
}

const YYGenerators& yy_generators(int order) {
  static std::map<int, YYGenerators> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  const QuinticIData& qi = quintic_I(order);
  YYGenerators g;
  QSeries i11inv = qi.I11.inverse();
  QSeries i0inv = qi.I0.inverse();
  g.A1 = D(qi.I11) * i11inv;
  g.A2 = D(D(qi.I11)) * i11inv;
  g.A3 = D(D(D(qi.I11))) * i11inv;
  g.B1 = D(qi.I0) * i0inv;
  g.B2 = D(D(qi.I0)) * i0inv;
  g.B3 = D(D(D(qi.I0))) * i0inv;
  g.Y = binom_power(Rational(-3125), Rational(-1), order);
  g.X = QSeries::one(order) - g.Y;
  auto res = cache.emplace(order, std::move(g));
  return res.first->second;
}

std::string RingMonomial::str() const {
  std::string s;
  auto app = [&](const char* v, int e) {
    if (!e) return;
    if (!s.empty()) s += "*";
    s += v;
    if (e > 1) s += "^" + std::to_string(e);
  };
  app("A1", a1);
  app("B1", b1);
  app("B2", b2);
  app("B3", b3);
  app("Y", y);
  return s.empty() ? "1" : s;
}

std::string RingFit::str() const {
  std::string s;
  for (const auto& [m, c] : coeffs) {
    if (c.is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")*" + m.str();
  }
  return s.empty() ? "0" : s;
}

QSeries ring_monomial_series(const RingMonomial& m, int order) {
  const YYGenerators& g = yy_generators(order);
  QSeries acc = QSeries::one(order);
  for (int i = 0; i < m.a1; ++i) acc *= g.A1;
  for (int i = 0; i < m.b1; ++i) acc *= g.B1;
  for (int i = 0; i < m.b2; ++i) acc *= g.B2;
  for (int i = 0; i < m.b3; ++i) acc *= g.B3;
  for (int i = 0; i < m.y; ++i) acc *= g.Y;
  return acc;
}

QSeries ring_fit_eval(const RingFit& fit, int order) {
  QSeries acc = QSeries::zero(order);
  for (const auto& [m, c] : fit.coeffs)
    acc += c * ring_monomial_series(m, order);
  return acc;
}

namespace {

std::vector<RingMonomial> capped_monomials(const RingFitCaps& caps) {
  std::vector<RingMonomial> out;
  int w = caps.max_weighted_degree;
  for (int a1 = 0; a1 <= w; ++a1)
    for (int b1 = 0; a1 + b1 <= w; ++b1)
      for (int b2 = 0; a1 + b1 + 2 * b2 <= w; ++b2)
        for (int b3 = 0; a1 + b1 + 2 * b2 + 3 * b3 <= w; ++b3)
          for (int y = 0; a1 + b1 + 2 * b2 + 3 * b3 + y <= w; ++y) {
            if (caps.max_y >= 0 && y > caps.max_y) continue;
            out.push_back({a1, b1, b2, b3, y});
          }
  return out;
}

}  // namespace

RingFit fit_in_ring(const QSeries& target, const RingFitCaps& caps,
                    bool require_unique) {
  std::vector<RingMonomial> basis = capped_monomials(caps);
  int order = target.order();
  size_t rows = static_cast<size_t>(order) + 1;
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(basis.size()));
  std::vector<Rational> b(rows);
  for (size_t m = 0; m < basis.size(); ++m) {
    QSeries s = ring_monomial_series(basis[m], order);
    for (size_t d = 0; d < rows; ++d) a[d][m] = s.at(static_cast<int>(d));
  }
  for (size_t d = 0; d < rows; ++d) b[d] = target.at(static_cast<int>(d));

  LinearSolveResult res = solve_exact(a, b);
  if (!res.consistent) {
    // Report where the best-effort residual starts for diagnosis.
    throw NoExactFit("fit_in_ring: no exact representation within caps (basis " +
                     std::to_string(basis.size()) + ", order " +
                     std::to_string(order) + ")");
  }
  if (require_unique && res.kernel_dim > 0)
    throw AmbiguousFit("fit_in_ring: kernel dimension " +
                       std::to_string(res.kernel_dim));
  RingFit fit;
  fit.kernel_dim = res.kernel_dim;
  for (size_t m = 0; m < basis.size(); ++m)
    if (!res.solution[m].is_zero()) fit.coeffs[basis[m]] = res.solution[m];
  return fit;
}

std::array<std::array<QSeries, 4>, 4> quintic_qde(int order) {
  const QuinticIData& qi = quintic_I(order);
  std::array<std::array<QSeries, 4>, 4> a;
  for (auto& row : a)
    for (auto& e : row) e = QSeries::zero(order);
  a[1][0] = qi.I11;
  a[2][1] = qi.I22;
  a[3][2] = qi.I11;
  return a;
}

ZMatrix quintic_S(int order) {
  const QuinticIData& qi = quintic_I(order);
  ZMatrix s(4, -3, 0, order, true, true);
  for (int i = 0; i < 4; ++i) s.set(0, i, i, QSeries::one(order));
  // Flat-coordinate derivative ratio J_2'/J_1' = (J_1 + D J_2)/I_{1,1}
  // (the log q pieces of the mirror coordinates cancel in the ratio).
  QSeries ratio = (qi.J1 + D(qi.J2)) * qi.I11.inverse();
  s.set(-1, 1, 0, qi.J1);
  s.set(-1, 2, 1, ratio);
  s.set(-1, 3, 2, qi.J1);
  s.set(-2, 2, 0, qi.J2);
  s.set(-2, 3, 1, ratio * qi.J1 - qi.J2);
  s.set(-3, 3, 0, qi.J3);
  return s;
}

ZMatrix quintic_S_from_qde(int order) {
  auto aq = quintic_qde(order);
  ZMatrix s(4, -4, 0, order, true, true);
  for (int i = 0; i < 4; ++i) s.set(0, i, i, QSeries::one(order));
  // z^{-k} level: D S_{k+1} = S_k A^Q - E S_k, E the cup-by-H shift.
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        QSeries rhs = QSeries::zero(order);
        for (int l = 0; l < 4; ++l) rhs += s.at(-k, i, l) * aq[static_cast<size_t>(l)][static_cast<size_t>(j)];
        if (i >= 1) rhs -= s.at(-k, i - 1, j);
        s.set(-k - 1, i, j, D_integrate(rhs, 0));
      }
  }
  // Degree-3 polynomial in 1/z: the z^{-4} level must vanish identically.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!s.at(-4, i, j).is_zero())
        throw BirkhoffMismatch("quintic_S_from_qde: z^-4 level nonzero");
  return s.clipped(-3, 0);
}

QSeries three_point(int a, int b, int c, int order) {
  if (a < 0 || a > 3 || b < 0 || b > 3 || c < 0 || c > 3)
    throw BadInsertion("three_point: insertions must be H-powers 0..3");
  if (a == 0 || b == 0 || c == 0) {
    int rest = a + b + c;  // the zero slot contributes nothing
    return (rest == 3) ? QSeries::one(order) : QSeries::zero(order);
  }
  if (a == 1 && b == 1 && c == 1) {
    const QuinticIData& qi = quintic_I(order);
    return qi.I22 * qi.I11.inverse();
  }
  return QSeries::zero(order);
}

}  // namespace mspgw
