#include <moyal/spinhalf.hpp>

#include <cmath>

namespace moyal::spinhalf {

namespace {

void require_half(const Constellation& c) {
  if (c.spin().two_s() != 1) throw std::invalid_argument("spinhalf: constellation must have s = 1/2");
}

const SpinJ half{1};

}  // namespace

FVectors f_vectors(const Constellation& c) {
  require_half(c);
  FVectors out;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const Eigen::Vector3d& a = c[(mu + 1) % 4].vec();
    const Eigen::Vector3d& b = c[(mu + 2) % 4].vec();
    const Eigen::Vector3d& d = c[(mu + 3) % 4].vec();
    const double triple = a.cross(b).dot(d);
    if (std::abs(triple) < 1e-12)
      throw DegenerateConstellationError("f_vectors: three points are coplanar with the origin");
    out.f[mu] = -(a.cross(b) + b.cross(d) + d.cross(a)) / triple;
  }
  return out;
}

Eigen::Matrix4d g_matrix(const Constellation& c) {
  require_half(c);
  Eigen::Matrix4d g;
  for (int nu = 0; nu < 4; ++nu) g.row(nu) << 1.0, c[nu].vec().transpose();
  return g;
}

Eigen::Matrix4d f_matrix(const FVectors& f) {
  Eigen::Matrix4d m;
  for (int mu = 0; mu < 4; ++mu) m.row(mu) << 1.0, f.f[static_cast<std::size_t>(mu)].transpose();
  return m;
}

RealMatrix gram_inverse_closed(const Constellation& c) {
  const FVectors f = f_vectors(c);
  Eigen::Vector4d d;
  for (int nu = 0; nu < 4; ++nu) d(nu) = 1.0 + f.f[nu].dot(c[nu].vec());
  RealMatrix out(4, 4);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) out(mu, nu) = 2.0 * (1.0 + f.f[mu].dot(f.f[nu])) / (d(mu) * d(nu));
  return out;
}

Operator sigma_dot(const Eigen::Vector3d& v) {
  ComplexMatrix m(2, 2);
  m << v.z(), cplx(v.x(), -v.y()), cplx(v.x(), v.y()), -v.z();
  return Operator(half, std::move(m));
}

std::vector<Operator> dual_kernel_closed(const Constellation& c) {
  const FVectors f = f_vectors(c);
  std::vector<Operator> out;
  for (std::size_t nu = 0; nu < 4; ++nu) {
    const double d = 1.0 + f.f[nu].dot(c[nu].vec());
    out.push_back((2.0 / d) * (Operator::identity(half) + sigma_dot(f.f[nu])));
  }
  return out;
}

std::array<Eigen::Vector3d, 4> spin_dual_symbols(const Constellation& c) {
  const FVectors f = f_vectors(c);
  std::array<Eigen::Vector3d, 4> out;
  for (std::size_t nu = 0; nu < 4; ++nu) out[nu] = 2.0 * f.f[nu] / (1.0 + f.f[nu].dot(c[nu].vec()));
  return out;
}

double tetrahedron_volume(const Constellation& c) {
  return std::abs(g_matrix(c).determinant()) / 6.0;
}

DegeneracyReport degeneracy_test(const Constellation& c) {
  DegeneracyReport rep;
  rep.volume = tetrahedron_volume(c);
  double chords = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < i; ++j) chords += (c[i].vec() - c[j].vec()).norm();
  rep.mean_chord = chords / 6.0;
  rep.forbidden = rep.volume < 1e-10 * std::pow(rep.mean_chord, 3);
  return rep;
}

}  // namespace moyal::spinhalf
