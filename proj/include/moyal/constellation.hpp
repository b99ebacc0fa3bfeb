#pragma once

// Constellations: ordered sets of (2s+1)^2 directions, their generators and
// the validity test based on y (low spherical harmonics at the points) and
// the Gram matrix condition number.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <moyal/opalg.hpp>

namespace moyal {

/// Thrown when a constellation is forbidden for the requested operation.
class DegenerateConstellationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Constellation {
 public:
  /// Throws std::invalid_argument unless points.size() == (2s+1)^2.
  Constellation(SpinJ s, std::vector<Direction> points);

  SpinJ spin() const noexcept { return s_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Direction& operator[](std::size_t nu) const { return points_.at(nu); }
  const std::vector<Direction>& points() const noexcept { return points_; }

  /// Order-sensitive 64-bit fingerprint of spin and coordinates.
  std::uint64_t fingerprint() const noexcept;

 private:
  SpinJ s_;
  std::vector<Direction> points_;
};

struct ValidityReport {
  double det_y = 0.0;           // |det y| / product of row norms
  double gram_condition = 0.0;  // 2-norm condition number of G
  bool allowed = false;
};

/// Relative |det y| below which a constellation is forbidden.
inline constexpr double det_y_threshold = 1e-10;

ValidityReport validate(const Constellation& c);

/// Uniform points from a seeded std::mt19937_64 (53-bit doubles, z = 2u-1, phi = 2 pi v).
Constellation random_constellation(SpinJ s, std::uint64_t seed);

/// 2s+1 cones about +z with the given opening angles; cone k holds 2s+1 points at
/// phi = offsets[k] + 2 pi j/(2s+1). Throws std::invalid_argument for angles
/// outside (0, pi), duplicated angles or wrong list lengths.
Constellation nested_cones(SpinJ s, const std::vector<double>& opening_angles,
                           const std::vector<double>& meridian_offsets);
/// Default offsets 2 pi k/(2s+1)^2, so no two cones share a meridian.
Constellation nested_cones(SpinJ s, const std::vector<double>& opening_angles);

struct ConeSpec {
  Eigen::Vector3d axis;
  double angle = 0.0;  // opening angle in [0, pi]
  int count = 0;
  double offset = 0.0;  // azimuth of the first point in the cone's local frame
};

/// Equispaced points on arbitrarily oriented cones. Counts must add up to (2s+1)^2.
Constellation free_cones(SpinJ s, const std::vector<ConeSpec>& cones);

/// Points with stereographic images z_nu = z0^(nu-1). Requires |z0| != 1 and Im z0 != 0.
Constellation spiral(SpinJ s, cplx z0);

/// Rows (l, m) ordered (0,0), (1,-1), (1,0), (1,1), ...; column nu holds Y_lm(n_nu).
ComplexMatrix y_matrix(const Constellation& c);

/// Diagonal of d: d_l = 2 sqrt(pi) (2s)! / sqrt((2s+1+l)! (2s-l)!), repeated 2l+1 times.
Eigen::VectorXd d_diagonal(SpinJ s);

/// Points mapped by the rotation g.
Constellation rotate(const Constellation& c, const EulerAngles& g);

}  // namespace moyal
