#include <moyal/tomography.hpp>

#include <cmath>
#include <sstream>

namespace moyal {

namespace {

Eigen::VectorXd hermitian_eigenvalues(const Operator& a) {
  const ComplexMatrix h = 0.5 * (a.matrix() + a.matrix().adjoint());
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

Probabilities probabilities(const Operator& rho, const KernelPair& kp) {
  Probabilities out{discrete_symbol(rho, kp, SymbolVariant::lower), {}};
  constexpr double tol = 1e-10;
  if (!rho.is_hermitian(tol)) out.warnings.emplace_back("operator is not Hermitian");
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << "trace is " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag() << "i, not 1";
    out.warnings.push_back(msg.str());
  }
  const double lowest = hermitian_eigenvalues(rho).minCoeff();
  if (lowest < -tol) {
    std::ostringstream msg;
    msg << "operator has a negative eigenvalue " << lowest;
    out.warnings.push_back(msg.str());
  }
  return out;
}

Operator nearest_density_matrix(const Operator& a) {
  const ComplexMatrix h = 0.5 * (a.matrix() + a.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  Eigen::VectorXd w = eig.eigenvalues().cwiseMax(0.0);
  const double total = w.sum();
  if (!(total > 0.0)) throw std::domain_error("nearest_density_matrix: no positive eigenvalue");
  w /= total;
  const ComplexMatrix& v = eig.eigenvectors();
  return Operator(a.spin(), v * w.cast<cplx>().asDiagonal() * v.adjoint());
}

Reconstruction reconstruct(const Symbol& p, const KernelPair& kp, const ReconstructOptions& opts) {
  if (p.variant != SymbolVariant::lower) throw std::invalid_argument("reconstruct: probabilities must be a lower symbol");
  Operator linear = expand(p, kp);
  Reconstruction out{linear, hermitian_eigenvalues(linear).minCoeff(), false};
  if (opts.project_to_density) {
    out.rho = nearest_density_matrix(linear);
    out.projected = true;
  }
  return out;
}

double noise_amplification_bound(const KernelPair& kp, double eps) {
  double sum = 0.0;
  for (const auto& q : kp.dual_ops())
    sum += Eigen::JacobiSVD<ComplexMatrix>(q.matrix()).singularValues()(0);
  return eps * sum / kp.spin().dim();
}

}  // namespace moyal
