#pragma once

#include "mspgw/zwindow.hpp"

#include <array>
#include <map>

namespace mspgw {

// Genus-zero quintic data built from the hypergeometric I-function
//   I(z) = z sum_d q^d prod_{m<=5d}(5H+mz) / prod_{m<=d}(H+mz)^5
//        = sum_{i<=3} I_i(q) H^i z^{1-i}.
struct QuinticIData {
  QSeries I0, I1, I2, I3;
  QSeries I11, I22;     // I_{1,1} = 1 + D(I_1/I_0); I_{2,2} = D(D J_2 / D J_1)
  QSeries J1, J2, J3;   // J_k = I_k / I_0
};

const QuinticIData& quintic_I(int order);

struct YYGenerators {
  QSeries A1, A2, A3;   // A_k = D^k I_{1,1} / I_{1,1}
  QSeries B1, B2, B3;   // B_k = D^k I_0 / I_0
  QSeries Y, X;         // Y = 1/(1-5^5 q), X = 1 - Y
};

const YYGenerators& yy_generators(int order);

// Monomial A1^a B1^b B2^c B3^d Y^e in the five-generator ring, with the
// weighted grading deg A1 = deg B1 = deg Y = 1, deg B2 = 2, deg B3 = 3.
struct RingMonomial {
  int a1 = 0, b1 = 0, b2 = 0, b3 = 0, y = 0;
  int weighted_degree() const { return a1 + b1 + 2 * b2 + 3 * b3 + y; }
  auto operator<=>(const RingMonomial&) const = default;
  std::string str() const;
};

struct RingFitCaps {
  int max_weighted_degree = 3;
  int max_y = -1;  // -1: no separate cap
};

struct RingFit {
  std::map<RingMonomial, Rational> coeffs;
  int kernel_dim = 0;
  std::string str() const;
};

QSeries ring_monomial_series(const RingMonomial& m, int order);
QSeries ring_fit_eval(const RingFit& fit, int order);

// Exact linear solve of target = sum_m c_m * m over the capped monomial
// basis evaluated as q-series. Throws NoExactFit when no exact solution
// exists within the truncation order; a nonzero kernel dimension is reported
// in the result (the five generators are not proven independent).
RingFit fit_in_ring(const QSeries& target, const RingFitCaps& caps,
                    bool require_unique = false);

// Quintic small QDE matrix A^Q in the flat basis {1, H, H^2, H^3}:
// subdiagonal (I_{1,1}, I_{2,2}, I_{1,1}).
std::array<std::array<QSeries, 4>, 4> quintic_qde(int order);

// Closed-form S^Q(z)^*: identity plus an explicit polynomial in 1/z of
// degree 3 (exact outside the window).
ZMatrix quintic_S(int order);
// The same matrix obtained by integrating (H + zD) S^* = S^* A^Q from the
// identity; an independent route used for verification.
ZMatrix quintic_S_from_qde(int order);

// Three-point values in the convention of the quintic QDE appendix:
// <1,H,H^2> = 1, <H,H,H> = I_{2,2}/I_{1,1}, string/dimension otherwise.
QSeries three_point(int a, int b, int c, int order);

}  // namespace mspgw
