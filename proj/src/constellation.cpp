#include <moyal/constellation.hpp>

#include <cmath>
#include <cstring>
#include <random>

#include <moyal/angular.hpp>
#include <moyal/discrete.hpp>

namespace moyal {

Constellation::Constellation(SpinJ s, std::vector<Direction> points)
    : s_(s), points_(std::move(points)) {
  if (points_.size() != static_cast<std::size_t>(s.n_points()))
    throw std::invalid_argument("Constellation: expected " + std::to_string(s.n_points()) +
                                " points, got " + std::to_string(points_.size()));
}

std::uint64_t Constellation::fingerprint() const noexcept {
  // FNV-1a over two_s and the raw coordinate bits.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(s_.two_s()));
  for (const auto& p : points_)
    for (double v : {p.x(), p.y(), p.z()}) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      mix(bits);
    }
  return h;
}

ValidityReport validate(const Constellation& c) {
  const ComplexMatrix y = y_matrix(c);
  double norms = 1.0;
  for (Eigen::Index r = 0; r < y.rows(); ++r) norms *= y.row(r).norm();
  ValidityReport rep;
  rep.det_y = std::abs(Eigen::PartialPivLU<ComplexMatrix>(y).determinant()) / norms;
  rep.gram_condition = condition_number(gram(c));
  rep.allowed = rep.det_y >= det_y_threshold && rep.gram_condition < singular_condition_threshold();
  return rep;
}

namespace {

double unit_double(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Direction on_cone(const Eigen::Vector3d& axis, double angle, double phi) {
  // Right-handed frame (e1, e2, axis); e1 from the coordinate axis least parallel to `axis`.
  Eigen::Index k;
  axis.cwiseAbs().minCoeff(&k);
  Eigen::Vector3d e1 = Eigen::Vector3d::Unit(k).cross(axis).normalized();
  const Eigen::Vector3d e2 = axis.cross(e1);
  return Direction::from_vector(std::cos(angle) * axis +
                                std::sin(angle) * (std::cos(phi) * e1 + std::sin(phi) * e2));
}

}  // namespace

Constellation random_constellation(SpinJ s, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<Direction> pts;
  pts.reserve(static_cast<std::size_t>(s.n_points()));
  for (int nu = 0; nu < s.n_points(); ++nu) {
    const double z = 2.0 * unit_double(gen) - 1.0;
    const double phi = 2.0 * M_PI * unit_double(gen);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts.push_back(Direction::from_vector({r * std::cos(phi), r * std::sin(phi), z}));
  }
  return Constellation(s, std::move(pts));
}

Constellation nested_cones(SpinJ s, const std::vector<double>& opening_angles,
                           const std::vector<double>& meridian_offsets) {
  const std::size_t d = static_cast<std::size_t>(s.dim());
  if (opening_angles.size() != d || meridian_offsets.size() != d)
    throw std::invalid_argument("nested_cones: need 2s+1 opening angles and offsets");
  for (std::size_t k = 0; k < d; ++k) {
    if (!(opening_angles[k] > 0.0 && opening_angles[k] < M_PI))
      throw std::invalid_argument("nested_cones: opening angles must lie in (0, pi)");
    for (std::size_t j = 0; j < k; ++j)
      if (std::abs(opening_angles[k] - opening_angles[j]) < 1e-12)
        throw std::invalid_argument("nested_cones: opening angles must be distinct");
  }
  std::vector<Direction> pts;
  pts.reserve(d * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j)
      pts.push_back(Direction::from_angles(opening_angles[k],
                                           meridian_offsets[k] + 2.0 * M_PI * j / d));
  return Constellation(s, std::move(pts));
}

Constellation nested_cones(SpinJ s, const std::vector<double>& opening_angles) {
  std::vector<double> offsets(static_cast<std::size_t>(s.dim()));
  for (std::size_t k = 0; k < offsets.size(); ++k) offsets[k] = 2.0 * M_PI * k / s.n_points();
  return nested_cones(s, opening_angles, offsets);
}

Constellation free_cones(SpinJ s, const std::vector<ConeSpec>& cones) {
  int total = 0;
  for (const auto& cone : cones) {
    if (cone.count < 0) throw std::invalid_argument("free_cones: negative point count");
    if (std::abs(cone.axis.norm() - 1.0) > 1e-6) throw std::invalid_argument("free_cones: cone axis is not a unit vector");
    if (!(cone.angle >= 0.0 && cone.angle <= M_PI)) throw std::invalid_argument("free_cones: opening angle outside [0, pi]");
    total += cone.count;
    if (total > s.n_points()) throw std::invalid_argument("free_cones: more than (2s+1)^2 points requested");
  }
  if (total != s.n_points()) throw std::invalid_argument("free_cones: point counts must add up to (2s+1)^2");
  std::vector<Direction> pts;
  pts.reserve(static_cast<std::size_t>(total));
  for (const auto& cone : cones) {
    const Eigen::Vector3d axis = cone.axis.normalized();
    for (int j = 0; j < cone.count; ++j)
      pts.push_back(on_cone(axis, cone.angle, cone.offset + 2.0 * M_PI * j / cone.count));
  }
  return Constellation(s, std::move(pts));
}

Constellation spiral(SpinJ s, cplx z0) {
  if (!std::isfinite(z0.real()) || !std::isfinite(z0.imag()))
    throw std::invalid_argument("spiral: z0 must be finite");
  if (std::abs(std::abs(z0) - 1.0) < 1e-12) throw std::invalid_argument("spiral: |z0| must differ from 1");
  if (std::abs(z0.imag()) < 1e-12 * std::max(1.0, std::abs(z0)))
    throw std::invalid_argument("spiral: z0 must not be real");
  std::vector<Direction> pts;
  pts.reserve(static_cast<std::size_t>(s.n_points()));
  cplx z = 1.0;
  for (int nu = 0; nu < s.n_points(); ++nu) {
    pts.push_back(StereoPoint{z}.to_direction());
    z *= z0;
  }
  return Constellation(s, std::move(pts));
}

ComplexMatrix y_matrix(const Constellation& c) {
  const int n = static_cast<int>(c.size());
  const int two_s = c.spin().two_s();
  ComplexMatrix y(n, n);
  int row = 0;
  for (int l = 0; l <= two_s; ++l)
    for (int m = -l; m <= l; ++m, ++row)
      for (int nu = 0; nu < n; ++nu) y(row, nu) = spherical_harmonic(l, m, c[static_cast<std::size_t>(nu)]);
  return y;
}

Eigen::VectorXd d_diagonal(SpinJ s) {
  const int two_s = s.two_s();
  Eigen::VectorXd d(s.n_points());
  int row = 0;
  for (int l = 0; l <= two_s; ++l) {
    const double dl = 2.0 * std::sqrt(M_PI) *
                      std::exp(std::lgamma(two_s + 1.0) -
                               0.5 * (std::lgamma(two_s + 2.0 + l) + std::lgamma(two_s + 1.0 - l)));
    for (int m = -l; m <= l; ++m) d(row++) = dl;
  }
  return d;
}

Constellation rotate(const Constellation& c, const EulerAngles& g) {
  const Eigen::Matrix3d r = rotation_matrix(g);
  std::vector<Direction> pts;
  pts.reserve(c.size());
  for (const auto& p : c.points()) pts.push_back(Direction::from_vector(r * p.vec()));
  return Constellation(c.spin(), std::move(pts));
}

}  // namespace moyal
