#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace moyal {

using cplx = std::complex<double>;

/// Spin quantum number s, stored as the integer 2s.
class SpinJ {
 public:
  explicit SpinJ(int two_s) : two_s_(two_s) {
    if (two_s < 1) throw std::domain_error("SpinJ: two_s must be >= 1");
  }

  int two_s() const noexcept { return two_s_; }
  double value() const noexcept { return 0.5 * two_s_; }
  /// Hilbert-space dimension 2s+1.
  int dim() const noexcept { return two_s_ + 1; }
  /// Number of constellation points (2s+1)^2.
  int n_points() const noexcept { return dim() * dim(); }

  friend bool operator==(SpinJ a, SpinJ b) noexcept { return a.two_s_ == b.two_s_; }

 private:
  int two_s_;
};

/// Unit vector on the sphere.
class Direction {
 public:
  /// North pole.
  Direction() : v_(0.0, 0.0, 1.0) {}

  /// Normalizes the input; throws for vectors that are not within 1e-6 of unit length.
  Direction(double x, double y, double z);

  /// Normalizes any nonzero vector.
  static Direction from_vector(const Eigen::Vector3d& v);
  /// theta measured from +z, phi from +x towards +y.
  static Direction from_angles(double theta, double phi);

  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }
  const Eigen::Vector3d& vec() const noexcept { return v_; }

  double theta() const;
  double phi() const;

  double dot(const Direction& o) const noexcept { return v_.dot(o.v_); }

 private:
  explicit Direction(const Eigen::Vector3d& unit, int) : v_(unit) {}
  Eigen::Vector3d v_;
};

/// Stereographic image z = tan(theta/2) e^{i phi}; the south pole maps to infinity.
struct StereoPoint {
  cplx z{0.0, 0.0};

  bool is_infinite() const noexcept { return !std::isfinite(z.real()) || !std::isfinite(z.imag()); }

  static StereoPoint from_direction(const Direction& n);
  Direction to_direction() const;
};

}  // namespace moyal
