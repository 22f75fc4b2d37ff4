#include "qself/rounding.hpp"

#include <cmath>
#include <stdexcept>

namespace qself {

double povm_defect(const std::vector<CMatrix>& a, const std::vector<CMatrix>& p,
                   const CMatrix& rho) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const CMatrix diff = a[i] - p[i];
    total += (diff * diff * rho).trace().real();
  }
  return total;
}

double pvm_residual(const std::vector<CMatrix>& p) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, max_abs(p[i] * p[i] - p[i]));
    for (std::size_t j = i + 1; j < p.size(); ++j) worst = std::max(worst, max_abs(p[i] * p[j]));
  }
  return worst;
}

NearestPvmResult nearest_pvm(const std::vector<CMatrix>& povm,
                             const std::optional<CMatrix>& weight) {
  if (povm.empty()) throw std::invalid_argument("nearest_pvm: empty POVM");
  const std::size_t d = povm[0].rows();
  const std::size_t m = povm.size();
  const CMatrix rho =
      weight ? *weight : CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));

  // Distinct weights keep the mixture's eigenbasis aligned with the outcome
  // supports when the input is a perturbed PVM.
  CMatrix mix = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < m; ++a) mix += static_cast<double>(a + 1) * povm[a];
  const HermEig eig = herm_eig(hermitize(mix), 1e-8);

  std::vector<CMatrix> pvm(m, CMatrix::Zero(d, d));
  for (std::size_t i = 0; i < d; ++i) {
    const CVector v = eig.eigenvectors.col(i);
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t a = 0; a < m; ++a) {
      const double val = (v.adjoint() * povm[a] * v).value().real();
      if (val > best_val + 1e-15) {
        best_val = val;
        best = a;
      }
    }
    pvm[best] += v * v.adjoint();
  }

  NearestPvmResult out;
  out.pvm = std::move(pvm);
  out.defect = povm_defect(povm, out.pvm, rho);
  double purity = 0.0;
  for (const CMatrix& op : povm) purity += (op * op * rho).trace().real();
  out.delta = 1.0 - purity;
  out.pvm_residual = pvm_residual(out.pvm);
  return out;
}

ReplacementBound replacement_bound(const BipartiteStrategy& s, const PovmFamily& a_hat,
                                   const PovmFamily& b_hat, const RMatrix& nu) {
  if (a_hat.size() != s.a.size() || b_hat.size() != s.b.size())
    throw std::invalid_argument("replacement_bound: family size mismatch");
  const RVector nu_a = nu.rowwise().sum();
  const CMatrix rho_a = s.rho_a();
  const CMatrix rho_b = s.rho_b();

  ReplacementBound out;
  out.delta = dsync(s, nu_a);
  for (std::size_t x = 0; x < s.a.size(); ++x) {
    if (nu_a(x) == 0.0) continue;
    out.gamma_a += nu_a(x) * povm_defect(s.a[x], a_hat[x], rho_a);
    out.gamma_b += nu_a(x) * povm_defect(s.b[x], b_hat[x], rho_b);
  }
  out.gamma_a = std::max(0.0, out.gamma_a);
  out.gamma_b = std::max(0.0, out.gamma_b);

  BipartiteStrategy replaced = s;
  replaced.a = a_hat;
  replaced.b = b_hat;
  out.lhs = correlation(s).l1_distance(correlation(replaced), nu);
  out.rhs = 12.0 * out.delta + 4.0 * std::sqrt(out.gamma_a) + 4.0 * std::sqrt(out.gamma_b);
  return out;
}

ProjectivizeResult projectivize_strategy(const BipartiteStrategy& s, const RMatrix& nu) {
  const RVector nu_a = nu.rowwise().sum();
  const CMatrix rho_a = s.rho_a();
  const CMatrix rho_b = s.rho_b();

  ProjectivizeResult out;
  out.strategy = s;
  out.dsync_before = dsync(s, nu_a);

  for (std::size_t x = 0; x < s.a.size(); ++x) {
    const NearestPvmResult ra = nearest_pvm(s.a[x], rho_a);
    const NearestPvmResult rb = nearest_pvm(s.b[x], rho_b);
    out.strategy.a[x] = ra.pvm;
    out.strategy.b[x] = rb.pvm;
    out.report_a.per_question_defect.push_back(ra.defect);
    out.report_a.per_question_delta.push_back(ra.delta);
    out.report_b.per_question_defect.push_back(rb.defect);
    out.report_b.per_question_delta.push_back(rb.delta);
    out.report_a.pvm_residual = std::max(out.report_a.pvm_residual, ra.pvm_residual);
    out.report_b.pvm_residual = std::max(out.report_b.pvm_residual, rb.pvm_residual);
    if (nu_a(x) > 0.0) {
      out.report_a.defect += nu_a(x) * ra.defect;
      out.report_b.defect += nu_a(x) * rb.defect;
    }
  }
  double delta_weighted = 0.0;
  for (std::size_t x = 0; x < s.a.size(); ++x)
    if (nu_a(x) > 0.0) delta_weighted += nu_a(x) * out.report_a.per_question_delta[x];
  out.report_a.bound = 9.0 * delta_weighted;
  double delta_weighted_b = 0.0;
  for (std::size_t x = 0; x < s.b.size(); ++x)
    if (nu_a(x) > 0.0) delta_weighted_b += nu_a(x) * out.report_b.per_question_delta[x];
  out.report_b.bound = 9.0 * delta_weighted_b;

  out.correlation_shift = correlation(s).l1_distance(correlation(out.strategy), nu);
  out.lemma_bound = 12.0 * out.dsync_before + 4.0 * std::sqrt(std::max(0.0, out.report_a.defect)) +
                    4.0 * std::sqrt(std::max(0.0, out.report_b.defect));
  out.dsync_after = dsync(out.strategy, nu_a);
  return out;
}

double povm_pair_opnorm(const std::vector<CMatrix>& a, const std::vector<CMatrix>& a_hat,
                        double tol) {
  if (a.size() != a_hat.size()) throw std::invalid_argument("povm_pair_opnorm: size mismatch");
  if (a.empty()) return 0.0;
  const std::size_t d = a[0].rows();
  CMatrix sum_a = CMatrix::Zero(d, d);
  CMatrix sum_hat = CMatrix::Zero(d, d);
  CMatrix sq = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const HermEig ea = herm_eig(a[i], 1e-8);
    const HermEig eh = herm_eig(a_hat[i], 1e-8);
    if (ea.eigenvalues(ea.eigenvalues.size() - 1) < -tol ||
        eh.eigenvalues(eh.eigenvalues.size() - 1) < -tol)
      throw std::invalid_argument("povm_pair_opnorm: operator not positive");
    sum_a += a[i];
    sum_hat += a_hat[i];
    const CMatrix diff = a[i] - a_hat[i];
    sq += diff * diff;
  }
  const HermEig esa = herm_eig(sum_a);
  const HermEig esh = herm_eig(sum_hat);
  if (esa.eigenvalues(0) > 1.0 + tol || esh.eigenvalues(0) > 1.0 + tol)
    throw std::invalid_argument("povm_pair_opnorm: family exceeds identity");
  return operator_norm(sq);
}

}  // namespace qself
