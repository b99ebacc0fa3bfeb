#pragma once

// Closed forms for s = 1/2 constellations (four points).

#include <array>
#include <vector>

#include <moyal/constellation.hpp>

namespace moyal::spinhalf {

/// Vectors f^mu with f^mu . n_nu = -1 for mu != nu.
struct FVectors {
  std::array<Eigen::Vector3d, 4> f;
};

/// Throws std::invalid_argument unless c has spin 1/2, and
/// DegenerateConstellationError when a triple product vanishes.
FVectors f_vectors(const Constellation& c);

/// Rows (1, n_nu); |det g| is six times the tetrahedron volume.
Eigen::Matrix4d g_matrix(const Constellation& c);
/// Rows (1, f^mu); f_matrix * g_matrix^T is diagonal with entries 1 + f^nu . n_nu.
Eigen::Matrix4d f_matrix(const FVectors& f);

/// G^-1_{mu nu} = 2 (1 + f^mu . f^nu) / (d_mu d_nu), d_nu = 1 + f^nu . n_nu.
RealMatrix gram_inverse_closed(const Constellation& c);

/// Q^nu = 2 (I + f^nu . sigma) / (1 + f^nu . n_nu).
std::vector<Operator> dual_kernel_closed(const Constellation& c);

/// Dual spin symbols s^nu = 2 f^nu / (1 + f^nu . n_nu).
std::array<Eigen::Vector3d, 4> spin_dual_symbols(const Constellation& c);

/// Volume of the tetrahedron spanned by the four points.
double tetrahedron_volume(const Constellation& c);

struct DegeneracyReport {
  bool forbidden = false;  // points concyclic
  double volume = 0.0;
  double mean_chord = 0.0;
};

/// Forbidden iff volume < 1e-10 (mean pairwise chord)^3.
DegeneracyReport degeneracy_test(const Constellation& c);

/// Pauli matrices in the a = s - m basis.
Operator sigma_dot(const Eigen::Vector3d& v);

}  // namespace moyal::spinhalf
