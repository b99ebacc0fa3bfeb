#pragma once

// Discrete kernels built on a constellation: coherent projectors Q_nu, their
// Gram matrix, the dual kernel Q^nu, discrete symbols and star products.

#include <cstdint>
#include <optional>
#include <vector>

#include <moyal/constellation.hpp>

namespace moyal {

/// How the dual kernel was obtained.
enum class DualMethod {
  gram_solve,   // pivoted LU on G (default)
  factorized,   // Q^-1 = D2^-1 N^-1 D1^-1, constellation pre-rotated when needed
  vandermonde,  // closed-form inverse, spiral constellations only
};

const char* to_string(DualMethod m) noexcept;
/// Accepts "gram", "factorized", "vandermonde"; std::invalid_argument otherwise.
DualMethod parse_dual_method(const std::string& name);

/// A constellation with its projectors and dual kernel. Immutable once built.
class KernelPair {
 public:
  KernelPair(Constellation c, std::vector<Operator> q_ops, std::vector<Operator> dual_ops,
             RealMatrix gram, RealMatrix gram_inv, double condition, DualMethod method);

  SpinJ spin() const noexcept { return c_.spin(); }
  const Constellation& constellation() const noexcept { return c_; }
  std::size_t size() const noexcept { return c_.size(); }
  const std::vector<Operator>& q_ops() const noexcept { return q_; }
  const std::vector<Operator>& dual_ops() const noexcept { return dual_; }
  const RealMatrix& gram() const noexcept { return gram_; }
  const RealMatrix& gram_inv() const noexcept { return gram_inv_; }
  double condition() const noexcept { return condition_; }
  bool ill_conditioned() const noexcept { return condition_ > warn_condition_threshold(); }
  DualMethod method() const noexcept { return method_; }
  /// Identifies the constellation; symbols carry it to catch mixing.
  std::uint64_t id() const noexcept { return id_; }

 private:
  Constellation c_;
  std::vector<Operator> q_;
  std::vector<Operator> dual_;
  RealMatrix gram_;
  RealMatrix gram_inv_;
  double condition_;
  DualMethod method_;
  std::uint64_t id_;
};

enum class SymbolVariant { lower, upper };

/// Discrete symbol A_nu (lower) or A^nu (upper). kernel_id 0 means unbound.
struct Symbol {
  SpinJ s;
  Eigen::VectorXcd values;
  SymbolVariant variant = SymbolVariant::lower;
  std::uint64_t kernel_id = 0;
};

/// Q_nu = |n_nu><n_nu|.
std::vector<Operator> q_projectors(const Constellation& c);

/// G_{nu nu'} = ((1 + n_nu . n_nu')/2)^(2s).
RealMatrix gram(const Constellation& c);

/// Builds projectors and dual kernel Q^nu = (2s+1) sum_mu G^{mu nu} Q_mu.
/// Throws SingularMatrixError for forbidden or numerically singular
/// constellations; std::invalid_argument when `vandermonde` is requested
/// for a constellation that is not a spiral.
KernelPair dual_kernel(const Constellation& c, DualMethod method = DualMethod::gram_solve);

struct QFactorization {
  Eigen::VectorXd d1;  // (1 + |z_nu|^2)^(-2s)
  ComplexMatrix n;     // z^a conj(z)^a', column a (2s+1) + a'
  Eigen::VectorXd d2;  // sqrt(binom(2s, a) binom(2s, a'))
};

/// Q_{nu,(a,a')} = <a|Q_nu|a'> = d1_nu N_{nu,(a,a')} d2_{(a,a')} with a = s - m.
/// Throws DegenerateConstellationError if a point sits at the south pole.
QFactorization q_matrix_factorization(const Constellation& c);

/// Inverse of V_{ij} = x_i^j (i, j from 0) from elementary symmetric functions.
/// Throws std::domain_error for repeated nodes.
ComplexMatrix vandermonde_inverse(const std::vector<cplx>& nodes);

/// e_0..e_n of the given values.
std::vector<cplx> elementary_symmetric(const std::vector<cplx>& values);

/// If c is a spiral z_nu = z0^(nu-1), returns z0.
std::optional<cplx> detect_spiral(const Constellation& c, double tol = 1e-9);

/// Vandermonde nodes w_(a,a') = z0^a conj(z0)^a' in column order of N.
std::vector<cplx> spiral_nodes(SpinJ s, cplx z0);

/// A_nu = tr[A Q_nu] (lower) or A^nu = tr[A Q^nu] (upper).
Symbol discrete_symbol(const Operator& a, const KernelPair& kp, SymbolVariant variant);

/// Lower -> upper via A^nu = (2s+1) sum G^{nu nu'} A_nu'.
Symbol to_upper(const Symbol& lower, const KernelPair& kp);
/// Upper -> lower via A_nu = (2s+1)^-1 sum G_{nu nu'} A^nu'.
Symbol to_lower(const Symbol& upper, const KernelPair& kp);

/// Lower symbols expand against Q^nu, upper ones against Q_nu; both with 1/(2s+1).
Operator expand(const Symbol& sym, const KernelPair& kp);

/// Trilinear kernel L^{mu nu}_lambda = tr[Q^mu Q^nu Q_lambda] for a kernel pair.
class StarKernel {
 public:
  /// Tensor built over `threads` workers, split by lambda.
  explicit StarKernel(const KernelPair& kp, int threads = 1);
  cplx operator()(std::size_t mu, std::size_t nu, std::size_t lambda) const;
  std::uint64_t kernel_id() const noexcept { return id_; }
  SpinJ spin() const noexcept { return s_; }
  std::size_t size() const noexcept { return n_; }
  /// (A*B)_lambda = (2s+1)^-2 sum_{mu nu} L^{mu nu}_lambda A_mu B_nu.
  Symbol apply(const Symbol& a, const Symbol& b) const;

 private:
  SpinJ s_;
  std::size_t n_;
  std::uint64_t id_;
  std::vector<cplx> l_;  // index (lambda n + mu) n + nu
};

/// Star product of two lower symbols bound to kp.
Symbol star_product(const Symbol& a, const Symbol& b, const KernelPair& kp, int threads = 1);

struct TripleKernel {
  cplx overlap;      // <n_mu|n_nu><n_nu|n_lambda><n_lambda|n_mu>
  cplx closed_form;  // 4^(-2s) (1 + sum of dots + i n_mu.(n_nu x n_lambda))^(2s)
  double modulus;     // prod of ((1 + n.n')/2)^s over the three pairs
  double area;        // signed geodesic triangle area A = 2 arg(g), in (-2 pi, 2 pi]
  bool phase_defined;  // false when |g| vanishes (antipodal pair)
};

/// tr[Q_mu Q_nu Q_lambda] by both routes plus the modulus and area.
TripleKernel coherent_triple_kernel(const Constellation& c, std::size_t mu, std::size_t nu,
                                    std::size_t lambda);
TripleKernel coherent_triple_kernel(SpinJ s, const Direction& a, const Direction& b,
                                    const Direction& c);

/// <n0|A|n0> = (2s+1)^-1 sum A^nu ((1 + n0.n_nu)/2)^(2s) from an upper symbol.
cplx off_constellation_eval(const Symbol& upper, const Constellation& c, const Direction& n0);

}  // namespace moyal
