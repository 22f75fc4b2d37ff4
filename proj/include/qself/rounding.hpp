#pragma once

#include <optional>
#include <vector>

#include "qself/strategy.hpp"

namespace qself {

struct RoundingReport {
  std::vector<double> per_question_defect;  // sum_a ||A^x_a - P^x_a||^2 weighted
  std::vector<double> per_question_delta;   // delta_x = 1 - sum_a tau((A^x_a)^2)
  double defect = 0.0;                      // aggregate over the marginal
  double pvm_residual = 0.0;                // max idempotency/orthogonality violation
  double bound = 0.0;                       // 9 * delta target for comparison
};

// Weighted defect sum_a tr((A_a - P_a)^2 rho).
double povm_defect(const std::vector<CMatrix>& a, const std::vector<CMatrix>& p,
                   const CMatrix& rho);

double pvm_residual(const std::vector<CMatrix>& p);

// Round one POVM to an exact PVM: diagonalise the generic-weight mixture
// sum_a (a+1) A_a and assign each eigenvector to argmax_a <v|A_a|v>.
// `weight` is the density used for the defect report (normalised trace when
// omitted). Empty outcome classes become zero projections.
struct NearestPvmResult {
  std::vector<CMatrix> pvm;
  double defect = 0.0;
  double delta = 0.0;  // 1 - sum_a tr(A_a^2 rho)
  double pvm_residual = 0.0;
};
NearestPvmResult nearest_pvm(const std::vector<CMatrix>& povm,
                             const std::optional<CMatrix>& weight = std::nullopt);

// Replace both POVM families of a strategy by PVMs, question by question,
// weighting defects by the reduced densities.
struct ProjectivizeResult {
  BipartiteStrategy strategy;
  RoundingReport report_a;
  RoundingReport report_b;
  double correlation_shift = 0.0;  // E_nu sum_{a,b} |C - C_hat|
  double lemma_bound = 0.0;        // 12 delta + 4 sqrt(gamma_A) + 4 sqrt(gamma_B)
  double dsync_before = 0.0;
  double dsync_after = 0.0;
};
ProjectivizeResult projectivize_strategy(const BipartiteStrategy& s, const RMatrix& nu);

// Both sides of the replacement estimate: the correlation L1 shift between
// (psi, A, B) and (psi, Ahat, Bhat), and 12 delta + 4 sqrt(gamma_A) +
// 4 sqrt(gamma_B) evaluated from the measured operator defects.
struct ReplacementBound {
  double lhs = 0.0;
  double rhs = 0.0;
  double delta = 0.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
};
ReplacementBound replacement_bound(const BipartiteStrategy& s, const PovmFamily& a_hat,
                                   const PovmFamily& b_hat, const RMatrix& nu);

// ||sum_i (A_i - Ahat_i)^2||_inf for incomplete POVMs; always <= 4.
// Throws on positivity or subnormalisation violations.
double povm_pair_opnorm(const std::vector<CMatrix>& a, const std::vector<CMatrix>& a_hat,
                        double tol = 1e-9);

}  // namespace qself
