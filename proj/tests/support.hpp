#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include <moyal/angular.hpp>
#include <moyal/constellation.hpp>
#include <moyal/opalg.hpp>

namespace moyal::test {

inline Direction random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v;
  do v << g(rng), g(rng), g(rng);
  while (v.norm() < 1e-6);
  return Direction::from_vector(v);
}

inline EulerAngles random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {2.0 * M_PI * u(rng), std::acos(2.0 * u(rng) - 1.0), 2.0 * M_PI * u(rng)};
}

inline Operator random_hermitian(SpinJ s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) m(i, j) = cplx(g(rng), g(rng));
  return Operator(s, 0.5 * (m + m.adjoint()));
}

inline Operator random_operator(SpinJ s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) m(i, j) = cplx(g(rng), g(rng));
  return Operator(s, m);
}

inline Operator random_density(SpinJ s, std::mt19937_64& rng) {
  const Operator a = random_operator(s, rng);
  const ComplexMatrix m = a.matrix() * a.matrix().adjoint();
  return Operator(s, m / m.trace().real());
}

inline Constellation random_allowed(SpinJ s, std::uint64_t& seed) {
  for (;;) {
    Constellation c = random_constellation(s, seed++);
    if (validate(c).allowed) return c;
  }
}

inline Constellation regular_tetrahedron() {
  const double r = 1.0 / std::sqrt(3.0);
  return Constellation(SpinJ(1), {Direction(r, r, r), Direction(r, -r, -r), Direction(-r, r, -r), Direction(-r, -r, r)});
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// exp(-i beta J_y) by diagonalizing the Hermitian J_y.
inline ComplexMatrix exp_jy(SpinJ s, double beta) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(spin_y(s).matrix());
  Eigen::VectorXcd phases(s.dim());
  for (int k = 0; k < s.dim(); ++k) phases(k) = std::polar(1.0, -beta * eig.eigenvalues()(k));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Clebsch-Gordan table built by coupling: |J J> is the normalized vector in the
/// M = J product subspace orthogonal to all higher-J states, phased so that
/// <j1 j1; j2 J-j1|J J> > 0, then lowered with J_-.
class CouplingOracle {
 public:
  CouplingOracle(int two_j1, int two_j2) : tj1_(two_j1), tj2_(two_j2) {
    const int d1 = two_j1 + 1, d2 = two_j2 + 1;
    const Eigen::MatrixXd lower = lowering_total(d1, d2);
    std::vector<Eigen::VectorXd> found;
    for (int two_J = two_j1 + two_j2; two_J >= std::abs(two_j1 - two_j2); two_J -= 2) {
      // top state of this multiplet
      Eigen::VectorXd v = Eigen::VectorXd::Zero(d1 * d2);
      for (int a1 = 0; a1 < d1; ++a1) {
        const int a2 = (two_j1 + two_j2 - two_J) / 2 - a1;
        if (a2 < 0 || a2 >= d2) continue;
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d1 * d2);
        e(a1 * d2 + a2) = 1.0;
        for (const auto& f : found) e -= f.dot(e) * f;
        if (e.norm() > 1e-8) {
          v = e.normalized();
          break;
        }
      }
      // sign: coefficient with m1 = j1 (a1 = 0) must be positive
      const int a2_top = (two_j1 + two_j2 - two_J) / 2;
      if (v(a2_top) < 0) v = -v;
      Eigen::VectorXd cur = v;
      for (int two_M = two_J; two_M >= -two_J; two_M -= 2) {
        found.push_back(cur);
        store(two_J, two_M, cur, d1, d2);
        Eigen::VectorXd next = lower * cur;
        if (next.norm() > 1e-12) cur = next.normalized();
      }
    }
  }

  double operator()(int two_m1, int two_m2, int two_J, int two_M) const {
    const auto it = table_.find({two_m1, two_m2, two_J, two_M});
    return it == table_.end() ? 0.0 : it->second;
  }

 private:
  Eigen::MatrixXd lowering_total(int d1, int d2) const {
    auto lowering = [](int two_j) {
      const int d = two_j + 1;
      const double j = 0.5 * two_j;
      Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
      for (int a = 0; a + 1 < d; ++a) {
        const double m = j - a;
        l(a + 1, a) = std::sqrt(j * (j + 1.0) - m * (m - 1.0));
      }
      return l;
    };
    const Eigen::MatrixXd l1 = lowering(tj1_), l2 = lowering(tj2_);
    return kron(l1, Eigen::MatrixXd::Identity(d2, d2)) + kron(Eigen::MatrixXd::Identity(d1, d1), l2);
  }

  static Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  }

  void store(int two_J, int two_M, const Eigen::VectorXd& v, int d1, int d2) {
    for (int a1 = 0; a1 < d1; ++a1)
      for (int a2 = 0; a2 < d2; ++a2) {
        const double c = v(a1 * d2 + a2);
        if (std::abs(c) > 1e-14) table_[{tj1_ - 2 * a1, tj2_ - 2 * a2, two_J, two_M}] = c;
      }
  }

  int tj1_, tj2_;
  std::map<std::tuple<int, int, int, int>, double> table_;
};

}  // namespace moyal::test
