#pragma once

#include "mspgw/state_space.hpp"
#include "mspgw/zwindow.hpp"
#include "mspgw/quintic.hpp"

#include <map>

namespace mspgw {

// Specialized S-function data for one edge multiplicity a:
// script-S_{a;i} = (zeta^alpha t)^i g[i](q) with g[i] an exact q-polynomial
// (stored to the ambient order; the degree bound is a theorem we assert).
struct SpecializedS {
  int a = 0;
  std::vector<QSeries> g;  // index i = 0..N+3, phase i
};

// Genus-zero data of the N-mixed-spin-P theory: the I-function expanded at
// z = infinity, the Birkhoff-factorized fundamental solution S^M(z)^* of the
// quantum differential equation, the QDE matrix itself, and the specialized
// S-functions.
//
// Everything here is quasi-homogeneous (deg q = N), so within a finite
// z-window the matrix entries are short exact q-polynomials.
class NmspFrontier {
 public:
  // Target window for S^M is [z_min, 0]; the I-function is expanded to the
  // deeper internal floor z_min - (N+3) that the column recursion consumes.
  NmspFrontier(int N, int q_order, int z_min);

  const StateSpace& space() const { return ss_; }
  int z_min() const { return z_min_; }
  int internal_floor() const { return floor_; }

  // I^M(q,z): z-power -> state vector. Window [floor, 1], exact above.
  const std::map<int, StateVector>& I_M() const { return imap_; }

  // S^M(z)^* in the p-basis on [z_min - (N+3), 0] (identity at z^0 q^0).
  const ZMatrix& S_star() const { return s_star_; }
  // S^M(z) (pairing adjoint of S_star), and its inverse.
  const ZMatrix& S() const { return s_; }
  const ZMatrix& S_inv() const { return s_inv_; }

  // QDE matrix A^M extracted by the column recursion: subdiagonal of ones
  // plus the q-linear band ending at the corner.
  const std::vector<std::vector<QSeries>>& A_M() const { return a_m_; }
  // Closed-form builder for the same matrix (120q, 770q, 1345q, 770q band,
  // corner 120q + t^N with t^N = -1).
  std::vector<std::vector<QSeries>> nmsp_qde_matrix() const;

  // max |D_p S* - S* A^M| support check; throws BirkhoffMismatch on failure.
  void check_qde() const;

  // Specialized S-function for edge multiplicity a >= 1 (cached).
  const SpecializedS& specialized_S(int a) const;
  // Independent evaluation of script-S_{a;0} by direct substitution
  // z = 5 t_alpha / a, p = -t_alpha into the I-function, with exact factor
  // cancellation (test oracle; separate code path from the closed form).
  QSeries specialized_S0_oracle(int a) const;

  // Two-point kernel W(z1,z2) = -sum S^{-1}(z1) e X S^{-1}(z2) e^dual/(z1+z2)
  // materialized as the leg-contraction operation of the stable-graph sums:
  // tau(z) -> [S^{-1}(z) [S(z) tau(z)]_+]_+ per z-power on the window.
  // tau is given as z-power -> vector; result likewise (z >= 0 only).
  std::map<int, StateVector> leg_contract(const std::map<int, StateVector>& tau) const;

  // Residue pairing of the (+,-) corner of the two-point kernel against an
  // insertion tau(z): Res_{z=0} ([W(psi, -z^-)]_+, tau(z)). Built from
  // S^{-1} columns and the pairing only, with the 1/(psi - z) kernel
  // expanded at z = infinity; an independent route to leg_contract.
  std::map<int, StateVector> w_corner(const std::map<int, StateVector>& tau) const;

  // L^loc(z)|_Q = z(1 - I_0) + I_1 H, exact below z^{N-2}; returned as
  // z-power -> H-components, together with the validity bound.
  struct LocalTail {
    std::map<int, std::array<QSeries, 4>> q_part;
    int valid_below = 0;  // entries are exact for z-powers < valid_below
  };
  LocalTail local_tail_L() const;

  // Dijkgraaf-Witten map at the two kinds of fixed loci:
  // tau_Q = (I_1/I_0) H (the H-coefficient is returned),
  // tau_alpha = (zeta^alpha t) * Integral_0^q (L(x)-1) dx/x as weight 1.
  QSeries dw_tau_Q() const;
  WeightedSeries dw_tau_alpha() const;

 private:
  void build_I();
  void build_birkhoff();

  StateSpace ss_;
  int q_order_;
  int z_min_;
  int floor_;
  std::map<int, StateVector> imap_;
  ZMatrix s_star_, s_, s_inv_;
  std::vector<std::vector<QSeries>> a_m_;
  mutable std::map<int, SpecializedS> spec_cache_;
};

// Constants (c_j), j = 1..N+3: zero below j = N, then 120, 770, 1345, 770.
Rational qde_band_constant(int j, int N);

}  // namespace mspgw
