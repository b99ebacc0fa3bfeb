#include <moyal/quadrature.hpp>

#include <cmath>
#include <stdexcept>

namespace moyal {

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
  if (n < 1) throw std::invalid_argument("GaussLegendre: need at least one node");
  // Newton iteration on P_n from the Chebyshev-like initial guess; nodes are
  // symmetric so only the upper half is computed.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = x;
    nodes[n - 1 - i] = -x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

SphereQuadrature::SphereQuadrature(int n_theta, int n_phi) {
  if (n_phi < 1) throw std::invalid_argument("SphereQuadrature: need at least one phi node");
  const GaussLegendre gl(n_theta);
  const double dphi = 2.0 * M_PI / n_phi;
  nodes_.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::acos(gl.nodes[i]);
    for (int j = 0; j < n_phi; ++j)
      nodes_.push_back({Direction::from_angles(theta, (j + 0.5) * dphi), gl.weights[i] * dphi});
  }
}

SphereQuadrature SphereQuadrature::exact_for_degree(int degree) {
  if (degree < 0) degree = 0;
  return SphereQuadrature(degree / 2 + 1, degree + 1);
}

}  // namespace moyal
