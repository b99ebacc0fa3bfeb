#include <moyal/opalg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <moyal/angular.hpp>

namespace moyal {

Operator::Operator(SpinJ s, ComplexMatrix entries) : s_(s), m_(std::move(entries)) {
  if (m_.rows() != s.dim() || m_.cols() != s.dim())
    throw std::invalid_argument("Operator: matrix shape does not match 2s+1");
}

Operator Operator::zero(SpinJ s) { return Operator(s, ComplexMatrix::Zero(s.dim(), s.dim())); }

Operator Operator::identity(SpinJ s) {
  return Operator(s, ComplexMatrix::Identity(s.dim(), s.dim()));
}

Operator Operator::projector(SpinJ s, const Eigen::VectorXcd& v) {
  return Operator(s, v * v.adjoint());
}

Operator Operator::adjoint() const { return Operator(s_, m_.adjoint()); }

bool Operator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() < tol;
}

double Operator::max_abs_diff(const Operator& other) const {
  if (!(other.s_ == s_)) throw std::invalid_argument("Operator: dimension mismatch");
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

Operator& Operator::operator+=(const Operator& o) {
  if (!(o.s_ == s_)) throw std::invalid_argument("Operator: dimension mismatch");
  m_ += o.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  if (!(o.s_ == s_)) throw std::invalid_argument("Operator: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

Operator& Operator::operator*=(cplx c) {
  m_ *= c;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  if (!(a.s_ == b.s_)) throw std::invalid_argument("Operator: dimension mismatch");
  return Operator(a.s_, a.m_ * b.m_);
}

cplx trace_product(const Operator& a, const Operator& b) {
  if (!(a.spin() == b.spin())) throw std::invalid_argument("trace_product: dimension mismatch");
  // sum_ij A_ij B_ji without forming the product
  return (a.matrix().array() * b.matrix().transpose().array()).sum();
}

double singular_condition_threshold() {
  return 1.0 / std::sqrt(std::numeric_limits<double>::epsilon());
}

double warn_condition_threshold() {
  return 1.0 / std::cbrt(std::numeric_limits<double>::epsilon());
}

namespace {

template <typename Matrix>
double condition_from_svd(const Matrix& m) {
  if (m.rows() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

template <typename Matrix>
SolveResult<Matrix> solve_impl(const Matrix& m, const Matrix& rhs) {
  if (m.rows() != m.cols()) throw std::invalid_argument("solve_linear: matrix is not square");
  if (rhs.rows() != m.rows()) throw std::invalid_argument("solve_linear: rhs row count mismatch");
  SolveResult<Matrix> out;
  out.condition = condition_from_svd(m);
  if (!(out.condition < singular_condition_threshold()))
    throw SingularMatrixError("solve_linear: matrix is numerically singular (condition " +
                                  std::to_string(out.condition) + ")",
                              out.condition);
  out.ill_conditioned = out.condition > warn_condition_threshold();
  Eigen::PartialPivLU<Matrix> lu(m);
  out.x = lu.solve(rhs);
  return out;
}

}  // namespace

double condition_number(const RealMatrix& m) { return condition_from_svd(m); }
double condition_number(const ComplexMatrix& m) { return condition_from_svd(m); }

SolveResult<RealMatrix> solve_linear(const RealMatrix& m, const RealMatrix& rhs) {
  return solve_impl(m, rhs);
}

SolveResult<ComplexMatrix> solve_linear(const ComplexMatrix& m, const ComplexMatrix& rhs) {
  return solve_impl(m, rhs);
}

EulerAngles EulerAngles::from_matrix(const Eigen::Matrix3d& r) {
  EulerAngles g;
  const double cb = std::clamp(r(2, 2), -1.0, 1.0);
  const double sb = std::hypot(r(0, 2), r(1, 2));
  g.beta = std::atan2(sb, cb);
  if (sb > 1e-12) {
    g.alpha = std::atan2(r(1, 2), r(0, 2));
    g.gamma = std::atan2(r(2, 1), -r(2, 0));
  } else if (cb > 0.0) {
    g.alpha = std::atan2(r(1, 0), r(0, 0));
    g.gamma = 0.0;
  } else {
    g.alpha = std::atan2(-r(1, 0), -r(0, 0));
    g.gamma = 0.0;
  }
  return g;
}

EulerAngles EulerAngles::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw std::domain_error("EulerAngles: zero rotation axis");
  return from_matrix(Eigen::AngleAxisd(angle, axis / norm).toRotationMatrix());
}

EulerAngles EulerAngles::to_direction(const Direction& n) { return {n.phi(), n.theta(), 0.0}; }

Eigen::Matrix3d rotation_matrix(const EulerAngles& g) {
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d ey = Eigen::Vector3d::UnitY();
  return (Eigen::AngleAxisd(g.alpha, ez) * Eigen::AngleAxisd(g.beta, ey) *
          Eigen::AngleAxisd(g.gamma, ez))
      .toRotationMatrix();
}

Direction rotate(const EulerAngles& g, const Direction& n) {
  return Direction::from_vector(rotation_matrix(g) * n.vec());
}

Operator rotation_operator(SpinJ s, const EulerAngles& g) {
  const int d = s.dim();
  const Eigen::MatrixXd small_d = wigner_small_d_matrix(s.two_s(), g.beta);
  ComplexMatrix u(d, d);
  for (int a = 0; a < d; ++a) {
    const double m = s.value() - a;
    for (int b = 0; b < d; ++b) {
      const double mp = s.value() - b;
      u(a, b) = std::polar(small_d(a, b), -(m * g.alpha + mp * g.gamma));
    }
  }
  return Operator(s, std::move(u));
}

Operator rotation_operator(SpinJ s, const Eigen::Vector3d& axis, double angle) {
  return rotation_operator(s, EulerAngles::from_axis_angle(axis, angle));
}

namespace {

// J_+ has <m+1|J_+|m> = sqrt(s(s+1) - m(m+1)); row a-1, column a.
ComplexMatrix raising(SpinJ s) {
  const int d = s.dim();
  ComplexMatrix jp = ComplexMatrix::Zero(d, d);
  const double j = s.value();
  for (int a = 1; a < d; ++a) {
    const double m = j - a;
    jp(a - 1, a) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  return jp;
}

}  // namespace

Operator spin_x(SpinJ s) {
  const ComplexMatrix jp = raising(s);
  return Operator(s, 0.5 * (jp + jp.adjoint()));
}

Operator spin_y(SpinJ s) {
  const ComplexMatrix jp = raising(s);
  return Operator(s, cplx(0.0, -0.5) * (jp - jp.adjoint()));
}

Operator spin_z(SpinJ s) {
  ComplexMatrix jz = ComplexMatrix::Zero(s.dim(), s.dim());
  for (int a = 0; a < s.dim(); ++a) jz(a, a) = s.value() - a;
  return Operator(s, std::move(jz));
}

}  // namespace moyal
