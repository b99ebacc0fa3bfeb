#include <moyal/spin.hpp>

#include <cmath>
#include <limits>

namespace moyal {

Direction::Direction(double x, double y, double z) {
  const Eigen::Vector3d v(x, y, z);
  const double norm = v.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6)
    throw std::domain_error("Direction: vector is not of unit length");
  v_ = v / norm;
}

Direction Direction::from_vector(const Eigen::Vector3d& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::domain_error("Direction: cannot normalize a zero or non-finite vector");
  return Direction(Eigen::Vector3d(v / norm), 0);
}

Direction Direction::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return Direction(Eigen::Vector3d(st * std::cos(phi), st * std::sin(phi), std::cos(theta)), 0);
}

double Direction::theta() const {
  return std::atan2(std::hypot(v_.x(), v_.y()), v_.z());
}

double Direction::phi() const {
  return std::atan2(v_.y(), v_.x());
}

StereoPoint StereoPoint::from_direction(const Direction& n) {
  const double denom = 1.0 + n.z();
  if (denom <= 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    return {cplx(inf, inf)};
  }
  // (x + iy)/(1 + z) loses precision near the south pole; tan(theta/2) does not.
  const double r = std::tan(0.5 * n.theta());
  const double phi = n.phi();
  return {std::polar(r, phi)};
}

Direction StereoPoint::to_direction() const {
  if (is_infinite()) return Direction::from_angles(M_PI, 0.0);
  return Direction::from_angles(2.0 * std::atan(std::abs(z)), std::arg(z));
}

}  // namespace moyal
