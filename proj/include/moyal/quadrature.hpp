#pragma once

#include <vector>

#include <moyal/spin.hpp>

namespace moyal {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n);
};

struct SphereNode {
  Direction n;
  double weight;
};

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times
/// the uniform trapezoid rule in phi. Weights sum to 4 pi.
class SphereQuadrature {
 public:
  SphereQuadrature(int n_theta, int n_phi);

  /// Smallest product rule integrating every polynomial of total degree
  /// <= degree in (x, y, z) exactly.
  static SphereQuadrature exact_for_degree(int degree);

  const std::vector<SphereNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  template <typename F>
  auto integrate(F&& f) const {
    using R = decltype(f(nodes_.front().n));
    R acc = f(nodes_.front().n) * nodes_.front().weight;
    for (std::size_t i = 1; i < nodes_.size(); ++i) acc += f(nodes_[i].n) * nodes_[i].weight;
    return acc;
  }

 private:
  std::vector<SphereNode> nodes_;
};

}  // namespace moyal
