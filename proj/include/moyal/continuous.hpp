#pragma once

// Continuous kernels on the sphere: self-dual (Wigner) kernels, dual
// (Berezin Q/P) pairs, the reproducing kernel and the star-product kernel.
//
// Every kernel here is diagonal in the eigenbasis |m, n> of n.S:
//
//   Delta(n) = sum_m Delta_m |m, n><m, n|,
//
// so a kernel is fully described by its 2s+1 coefficients Delta_m. The
// coefficients are stored with index a = s - m, like operator rows.

#include <vector>

#include <moyal/opalg.hpp>

namespace moyal {

/// Signs epsilon_l, l = 0..2s, labelling the 2^{2s} self-dual kernels.
class EpsilonSigns {
 public:
  /// All +1.
  explicit EpsilonSigns(SpinJ s);
  /// Throws std::invalid_argument unless eps has 2s+1 entries in {+1,-1} and eps[0] = +1.
  EpsilonSigns(SpinJ s, std::vector<int> eps);

  SpinJ spin() const noexcept { return s_; }
  int operator[](int l) const { return eps_.at(static_cast<std::size_t>(l)); }
  const std::vector<int>& values() const noexcept { return eps_; }

 private:
  SpinJ s_;
  std::vector<int> eps_;
};

/// Nonzero weights gamma_l, l = 0..2s, with gamma_0 = +1, labelling dual pairs.
class GammaWeights {
 public:
  GammaWeights(SpinJ s, std::vector<double> gamma);

  /// gamma_l = C(s l s; s 0 s): the lower kernel is |n><n| (Q-symbol), the upper gives P-symbols.
  static GammaWeights pq(SpinJ s);

  SpinJ spin() const noexcept { return s_; }
  double operator[](int l) const { return gamma_.at(static_cast<std::size_t>(l)); }
  const std::vector<double>& values() const noexcept { return gamma_; }

 private:
  SpinJ s_;
  std::vector<double> gamma_;
};

enum class KernelSide { lower, upper };

struct KernelCoefficients {
  SpinJ s;
  std::vector<double> lower;  // Delta_m, index a = s - m
  std::vector<double> upper;  // Delta^m

  bool self_dual(double tol = 1e-14) const;
  const std::vector<double>& side(KernelSide k) const { return k == KernelSide::lower ? lower : upper; }
  /// sum_m Delta_m C(s l s; m 0 m) for the chosen side.
  double projection(KernelSide k, int l) const;
};

/// Delta(m) = sum_l eps_l (2l+1)/(2s+1) C(s l s; m 0 m), both sides equal.
KernelCoefficients selfdual_coeffs(SpinJ s, const EpsilonSigns& eps);
inline KernelCoefficients selfdual_coeffs(SpinJ s) { return selfdual_coeffs(s, EpsilonSigns(s)); }

/// Delta_m from gamma_l, Delta^m from 1/gamma_l.
KernelCoefficients dual_coeffs(SpinJ s, const GammaWeights& gamma);
inline KernelCoefficients pq_coeffs(SpinJ s) { return dual_coeffs(s, GammaWeights::pq(s)); }

/// Sum_m Delta_m |m, n><m, n| with |m, n> = U(phi, theta, 0)|m, n_z>.
Operator kernel_at(const Direction& n, const KernelCoefficients& coeffs,
                   KernelSide side = KernelSide::lower);

/// Matrix element <m, n_z| Delta(n) |m', n_z> of a self-dual kernel from its
/// spherical-harmonic expansion (Z_{mm'}(n)), independent of kernel_at.
cplx selfdual_matrix_element(SpinJ s, const EpsilonSigns& eps, int two_m, int two_mp,
                             const Direction& n);

/// delta_s(a, b) = sum_{l<=2s} (2l+1)/(4 pi) P_l(a.b).
double reproducing_kernel(SpinJ s, const Direction& a, const Direction& b);

/// tr[A Delta(n)] for the chosen side.
cplx continuous_symbol(const Operator& a, const Direction& n, const KernelCoefficients& coeffs,
                       KernelSide side = KernelSide::lower);

/// ((2s+1)/4pi)^2 tr[Delta(n) Delta(m) Delta(k)]; coeffs must be self-dual.
cplx continuous_star_kernel(const Direction& n, const Direction& m, const Direction& k,
                            const KernelCoefficients& coeffs);

/// One (theta, phi, value) sample of a symbol on a grid.
struct SymbolSample {
  double theta;
  double phi;
  cplx value;
};

/// Symbol of A on an n_theta x n_phi grid: theta_i = (i + 1/2) pi / n_theta,
/// phi_j = 2 pi j / n_phi. Evaluation is split over `threads` workers.
std::vector<SymbolSample> symbol_grid(const Operator& a, const KernelCoefficients& coeffs,
                                      KernelSide side, int n_theta, int n_phi, int threads = 1);

}  // namespace moyal
