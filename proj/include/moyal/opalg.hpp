#pragma once

// Dense operator algebra in the |m, n_z> basis.
//
// Basis convention, used everywhere in the library: row/column index
// a = s - m, so a = 0 is the highest-weight state m = s and a = 2s is m = -s.

#include <stdexcept>
#include <string>

#include <moyal/spin.hpp>

namespace moyal {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Complex (2s+1)x(2s+1) operator tagged with its spin.
class Operator {
 public:
  Operator(SpinJ s, ComplexMatrix entries);

  static Operator zero(SpinJ s);
  static Operator identity(SpinJ s);
  /// |v><v| for a state vector v (not normalized here).
  static Operator projector(SpinJ s, const Eigen::VectorXcd& v);

  SpinJ spin() const noexcept { return s_; }
  int dim() const noexcept { return s_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  cplx operator()(int a, int b) const { return m_(a, b); }

  Operator adjoint() const;
  cplx trace() const { return m_.trace(); }
  bool is_hermitian(double tol = 1e-12) const;
  /// Largest |entry| of this - other.
  double max_abs_diff(const Operator& other) const;

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx c);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, cplx c) { return a *= c; }
  friend Operator operator*(cplx c, Operator a) { return a *= c; }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  SpinJ s_;
  ComplexMatrix m_;
};

/// tr(AB).
cplx trace_product(const Operator& a, const Operator& b);

/// Thrown when a solve meets a numerically singular matrix.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Condition numbers above this are treated as singular (1/sqrt(eps)).
double singular_condition_threshold();
/// Condition numbers above this are flagged as ill conditioned (1/eps^(1/3)).
double warn_condition_threshold();

/// 2-norm condition number from singular values (infinite when singular).
double condition_number(const RealMatrix& m);
double condition_number(const ComplexMatrix& m);

template <typename Matrix>
struct SolveResult {
  Matrix x;
  double condition = 0.0;
  bool ill_conditioned = false;
};

/// Solves MX = rhs with a pivoted LU factorization. Throws
/// SingularMatrixError when cond(M) exceeds singular_condition_threshold().
SolveResult<RealMatrix> solve_linear(const RealMatrix& m, const RealMatrix& rhs);
SolveResult<ComplexMatrix> solve_linear(const ComplexMatrix& m, const ComplexMatrix& rhs);

/// ZYZ Euler angles of the active rotation Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  static EulerAngles from_axis_angle(const Eigen::Vector3d& axis, double angle);
  static EulerAngles from_matrix(const Eigen::Matrix3d& r);
  /// Angles (phi, theta, 0) that carry n_z to n.
  static EulerAngles to_direction(const Direction& n);
};

Eigen::Matrix3d rotation_matrix(const EulerAngles& g);
Direction rotate(const EulerAngles& g, const Direction& n);

/// U_g = exp(-i alpha J_z) exp(-i beta J_y) exp(-i gamma J_z).
Operator rotation_operator(SpinJ s, const EulerAngles& g);
Operator rotation_operator(SpinJ s, const Eigen::Vector3d& axis, double angle);

/// Spin components J_x, J_y, J_z in the a = s - m basis.
Operator spin_x(SpinJ s);
Operator spin_y(SpinJ s);
Operator spin_z(SpinJ s);

}  // namespace moyal
