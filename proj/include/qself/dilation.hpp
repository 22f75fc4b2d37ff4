#pragma once

#include <functional>
#include <vector>

#include "qself/strategy.hpp"

namespace qself {

struct DilationWitness {
  CMatrix v_a;   // isometry H_A -> H~_A (x) K_A
  CMatrix v_b;   // isometry H_B -> H~_B (x) K_B
  CVector aux;   // unit vector on K_A (x) K_B
  std::size_t dim_ka = 0;
  std::size_t dim_kb = 0;
  RMatrix nu_hat;  // distribution weighting the measurement residuals
};

struct ResidualTriple {
  double state = 0.0;
  double side_a = 0.0;
  double side_b = 0.0;
  double max() const { return std::max(state, std::max(side_a, side_b)); }
};

// The three norms of the local-dilation definition; expectations over the
// marginals of nu_hat.
ResidualTriple dilation_residuals(const BipartiteStrategy& s, const BipartiteStrategy& s_tilde,
                                  const DilationWitness& w);

// Single joint-operator residual; at most 3x the triple maximum.
double strong_residual(const BipartiteStrategy& s, const BipartiteStrategy& s_tilde,
                       const DilationWitness& w);

// Reorder psi_tilde (x) aux from (H~_A, H~_B, K_A, K_B) to the dilation
// ordering (H~_A, K_A, H~_B, K_B).
CVector dilation_target(const CVector& psi_tilde, std::size_t dim_ta, std::size_t dim_tb,
                        const CVector& aux, std::size_t dim_ka, std::size_t dim_kb);

// vNA-dilation witness. The ambient algebra is
// M (x) M0 (x) B(l^2) truncated to `trunc` slots, stored as dense matrices on
// C^{m * k * trunc}; the identification of N with the P-corner is the
// isometry `embed` (columns = images of the GNS basis of N).
struct VnaWitness {
  std::size_t dim_m = 0;     // dim of the ideal side H~
  std::size_t dim_m0 = 0;    // dim of the auxiliary factor M0 = B(C^k)
  std::size_t trunc = 1;     // l^2 truncation rank
  CMatrix p;                 // projection, N ~ P (...) P
  CMatrix w;                 // partial isometry in P (...) I_{M (x) M0}
  CMatrix embed;             // isometry C^n -> ambient with embed*embed^* = P

  std::size_t ambient_dim() const { return dim_m * dim_m0 * trunc; }
  // ambient normalised trace tau^M (x) tau^{M0} (x) Tr
  double ambient_trace(const CMatrix& x) const;
  void validate(double leak_tol = 1e-9) const;  // throws on support leakage
};

struct VnaResiduals {
  double op = 0.0;   // E_x sum_a ||A~ (x) I - W* A W||^2_tau
  double p1 = 0.0;   // tau^N(P - WW*)
  double p2 = 0.0;   // tau^{M (x) M0}(I - W*W)
  double max() const { return std::max(op, std::max(p1, p2)); }
};

// Tracial strategies must be single-block (factors); the witness identifies
// N = B(C^n) with the P-corner.
VnaResiduals vna_residuals(const TracialStrategy& s, const TracialStrategy& s_tilde,
                           const VnaWitness& w, const RVector& nu_hat_a);

// Both displayed inequalities relating measurement distance in M (x) M0 and
// in N, per question.
struct MeasureConversion {
  double lhs_m = 0.0;   // sum_a ||A~ (x) I - W* A W||^2 in M (x) M0
  double bound_m = 0.0; // 2 eps + (1/(1-eps)) * (N-side distance)
  double lhs_n = 0.0;   // sum_a ||W A~ W* - A||^2 in N
  double bound_n = 0.0;
};
std::vector<MeasureConversion> measure_conversion(const TracialStrategy& s,
                                                  const TracialStrategy& s_tilde,
                                                  const VnaWitness& w);

// Rounded Schmidt-coefficient sequence with exactly one nonzero value of
// multiplicity divisible by n; follows the two proof cases (m >= n, m < n).
// `m` is the Schmidt rank of the flat comparison sequence.
RVector me_aux_round(const RVector& kappa, std::size_t n, std::size_t m);

// Partial isometries from the polar decompositions of P V, with the five
// quantitative estimates.
struct PartialIsometrize {
  CMatrix v_a_prime;
  CMatrix v_b_prime;
  double input_eps = 0.0;   // max of the two input residuals
  double state = 0.0;       // bound (1 + 2 sqrt2) eps
  double measurement = 0.0; // bound (1 + 4 sqrt2) eps
  double support_a = 0.0;   // 1 - ||(V'_A (x) Id) psi||^2, bound 4 eps^2
  double cosupport_a = 0.0; // 1 - ||((V'_A)* (x) Id) psi~ aux||^2, bound eps^2
  double swapped = 0.0;     // bound 7 eps, only when psi~ (x) aux is ME
  bool swapped_valid = false;
};
PartialIsometrize partial_isometrize(const CMatrix& v_a, const CMatrix& v_b, const CMatrix& p_a,
                                     const CMatrix& p_b, const BipartiteStrategy& s,
                                     const BipartiteStrategy& s_tilde, const CVector& aux,
                                     std::size_t dim_ka, std::size_t dim_kb,
                                     const RVector& nu_hat_a);

// Hilbert-picture dilation -> vNA witness, certified 1700 eps^2.
struct VnaConversion {
  VnaWitness witness;
  double input_eps = 0.0;
  double certified = 0.0;
  VnaResiduals measured;
};
VnaConversion pme_to_vna(const TracialStrategy& s, const TracialStrategy& s_tilde,
                         const DilationWitness& w);

// vNA witness -> Hilbert-picture dilation, certified (4 + sqrt2) sqrt(eps).
struct DilationConversion {
  DilationWitness witness;
  double input_eps = 0.0;
  double certified = 0.0;
  ResidualTriple measured;
};
DilationConversion vna_to_dilation(const TracialStrategy& s, const TracialStrategy& s_tilde,
                                   const VnaWitness& w, const RMatrix& nu_hat);

// Leak of an embedded state outside the top eigenspace of T (x) Id, with the
// auxiliary state extracted from the projected component.
struct TopEigenspace {
  double leak = 0.0;
  double bound = 0.0;      // sqrt((1 - omega)/alpha)
  double omega = 0.0;
  double closeness = 0.0;  // ||psi_embedded - psi~ (x) aux||
  CVector aux_state;
};
TopEigenspace top_eigenspace_closeness(const CMatrix& t, const CVector& psi_embedded,
                                       const CVector& psi_tilde, std::size_t dim_ta,
                                       std::size_t dim_tb, std::size_t dim_ka,
                                       std::size_t dim_kb);

// Witness state (psi_0 + phase * psi_1)/sqrt2 built from the top two
// eigenvectors of T; the reduced density deviates from Id/n by at least
// 1/(16 + 12 sqrt2), and <psi|T|psi> = 1 - gap/2.
struct SpecGapWitness {
  double deviation = 0.0;      // max over the phase scan of ||Id/n - rho||_1
  double lower_bound = 0.0;    // 1/(16 + 12 sqrt2)
  double omega = 0.0;
  double gap = 0.0;
};
SpecGapWitness spec_gap_witness(const CMatrix& t, double degeneracy_scale = 1.0);

// kappa'(eps, delta) = kappa(24 sqrt(delta) + eps) + 9 c delta
double kappa_prime(const std::function<double(double)>& kappa, double eps, double delta,
                   double c);

}  // namespace qself
