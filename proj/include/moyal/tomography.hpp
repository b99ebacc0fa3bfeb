#pragma once

// Linear state reconstruction from coherent-state probabilities.

#include <string>
#include <vector>

#include <moyal/discrete.hpp>

namespace moyal {

struct Probabilities {
  Symbol p;                           // lower symbol p_nu = <n_nu|rho|n_nu>
  std::vector<std::string> warnings;  // set when rho is not a density matrix
};

/// Computed for any operator; warnings flag non-Hermitian input, trace != 1
/// and negative eigenvalues (tolerance 1e-10).
Probabilities probabilities(const Operator& rho, const KernelPair& kp);

struct ReconstructOptions {
  /// Post-processing: clip negative eigenvalues and renormalize the trace.
  bool project_to_density = false;
};

struct Reconstruction {
  Operator rho;
  double min_eigenvalue = 0.0;  // of the linear estimate, before any projection
  bool projected = false;
};

/// rho = (2s+1)^-1 sum_nu p_nu Q^nu.
Reconstruction reconstruct(const Symbol& p, const KernelPair& kp, const ReconstructOptions& opts = {});

/// Eigenvalue clipping onto the density matrices (Hermitian part, trace 1).
Operator nearest_density_matrix(const Operator& a);

/// Bound on ||delta rho||_2 for probability errors of size eps:
/// (2s+1)^-1 eps sum_nu ||Q^nu||_2.
double noise_amplification_bound(const KernelPair& kp, double eps);

}  // namespace moyal
