#pragma once

// Special functions of angular-momentum algebra. Half-integer quantum
// numbers are passed as twice their value (two_j, two_m), matching SpinJ.

#include <moyal/spin.hpp>

namespace moyal {

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> (Condon-Shortley).
///
/// Computed from the Racah sum in exact rational arithmetic and rounded once
/// at the end. Returns 0 when M != m1 + m2. Throws std::domain_error for
/// inconsistent quantum numbers (parity of j and m, |m| > j, triangle rule).
double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M);

/// C(s l s; m 0 m), the coefficient that diagonal kernels are built from.
double cg_diag(SpinJ s, int l, int two_m);

/// Legendre polynomial P_l(x) by three-term recurrence. |x| may exceed 1 by
/// at most 1e-12 (clamped); beyond that std::domain_error.
double legendre_p(int l, double x);

/// Orthonormal spherical harmonic Y_lm(n) with the Condon-Shortley phase.
cplx spherical_harmonic(int l, int m, const Direction& n);

/// Wigner small-d element d^j_{m,mp}(beta) = <j m| exp(-i beta J_y) |j mp>.
double wigner_small_d(int two_j, int two_m, int two_mp, double beta);

/// Full (2j+1)x(2j+1) d-matrix, rows/cols indexed by a = j - m.
Eigen::MatrixXd wigner_small_d_matrix(int two_j, double beta);

/// <m, n_z | n> = binom(2s, s-m)^{1/2} z^{s-m} / (1+|z|^2)^s.
/// For the point at infinity (south pole) the limit delta_{m,-s} is returned.
cplx coherent_amplitude(SpinJ s, int two_m, const StereoPoint& z);

/// Same amplitude evaluated from the angles of n,
/// binom^{1/2} cos(theta/2)^{s+m} sin(theta/2)^{s-m} e^{i(s-m)phi};
/// agrees with the stereographic form wherever that is finite and is
/// regular at the south pole.
cplx coherent_amplitude(SpinJ s, int two_m, const Direction& n);

/// Coherent-state vector |n> in the a = s - m basis.
Eigen::VectorXcd coherent_state(SpinJ s, const Direction& n);

/// |<m, n_z | m', n>|^2 with n at polar angle theta, via its Legendre expansion.
double basis_overlap_sq(SpinJ s, int two_m, int two_mp, double theta);

double binomial(int n, int k);
double factorial(int n);

}  // namespace moyal
