#pragma once

#include <vector>

#include "qself/strategy.hpp"

namespace qself {

// Spectral scan of a density matrix: one level per distinct eigenvalue
// (eigenvalues closer than 1e-11 are merged), with P_level = chi_{>=lambda}
// and weight (eigenvalue-interval length) * rank. The continuum parameter
// collapses to a finite sum for finite spectra.
struct SpectralScan {
  struct Level {
    double threshold = 0.0;  // distinct eigenvalue
    std::size_t rank = 0;    // Tr(P_level)
    double weight = 0.0;     // mu(level)
  };
  std::vector<Level> levels;  // thresholds descending
  CMatrix basis;              // eigenvectors of rho, eigenvalues descending
  RVector eigenvalues;

  // Projection P for level j, columns 0..rank-1 of basis.
  CMatrix projection(std::size_t level) const;
  // Reconstruction sum_j mu_j P_j / rank_j.
  CMatrix reconstruct() const;
};

SpectralScan spectral_scan(const CMatrix& rho, double merge_tol = 1e-11);

// One maximally entangled component per scan level: the compressed family
// P A P restricted to the level subspace, expressed in the scan eigenbasis.
struct MEComponents {
  SpectralScan scan;
  Side side = Side::A;
  PovmFamily rotated;                  // the full family in the scan eigenbasis
  std::vector<PovmFamily> compressed;  // [level][question][answer], dim = rank(level)
  double defect = 0.0;      // E_x sum_a integral tr((A - PAP)^2 rho_level) dmu
  double commutator = 0.0;  // same data in the commutator form
  double defect_bound = 0.0;     // sqrt(2 delta)
  double commutator_bound = 0.0; // 2 sqrt(2 delta)
  double delta = 0.0;
};

// Requires a projective strategy; throws otherwise (pre-round via nearest_pvm
// when needed).
MEComponents me_components(const BipartiteStrategy& s, const RMatrix& nu, Side side = Side::A);

// Per-level winning probabilities of the symmetric ME strategies
// (psi_level, P A P) for the given game.
std::vector<double> per_level_winning(const Game& g, const MEComponents& comps);
std::vector<double> per_level_commutator(const MEComponents& comps, const RVector& nu_a);

// Levels passing omega >= 1 - sqrt(alpha) - epsilon and commutator <= sqrt(beta).
struct LambdaFilter {
  std::vector<std::size_t> members;  // level indices
  double measure = 0.0;              // mu(Lambda)
  double lower_bound = 0.0;          // 1 - sqrt(alpha) - sqrt(beta)
};
LambdaFilter lambda_filter(const SpectralScan& scan, const std::vector<double>& per_level_omega,
                           const std::vector<double>& per_level_defect, double alpha, double beta,
                           double epsilon);

// Recursive dimension-halving partition of Lambda with orthogonal blocks
// Q_i = P_{lambda_i} - P_{lambda_{i+1}}.
struct BlockPartition {
  struct Block {
    std::size_t level_begin = 0;  // index into Lambda of lambda_i
    std::size_t rank = 0;         // Tr(Q_i)
    double commutator = 0.0;      // E_x sum_a ||A Q - Q A||_2^2 / Tr(Q)
    double dsync = 0.0;
    double omega = 0.0;
    CMatrix projection;           // Q_i in the original space
  };
  std::vector<Block> blocks;
  double commutator_bound = 0.0;  // (sqrt(2)+1)^2 sqrt(beta)
  double dsync_bound = 0.0;       // half of the commutator bound
  double omega_bound = 0.0;       // Claim-2 lower bound
};

BlockPartition block_partition(const Game& g, const BipartiteStrategy& s,
                               const SpectralScan& scan, const LambdaFilter& lambda, double beta,
                               double alpha, double epsilon);

}  // namespace qself
