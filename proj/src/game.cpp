#include "qself/game.hpp"

#include <cmath>
#include <stdexcept>

namespace qself {

Correlation::Correlation(std::vector<std::size_t> answer_counts)
    : answer_counts_(std::move(answer_counts)) {
  const std::size_t n = answer_counts_.size();
  blocks_.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      blocks_.push_back(RMatrix::Zero(answer_counts_[x], answer_counts_[y]));
}

double Correlation::l1_distance(const Correlation& other, const RMatrix& nu) const {
  double total = 0.0;
  const std::size_t n = num_questions();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      total += nu(x, y) * (block(x, y) - other.block(x, y)).cwiseAbs().sum();
  return total;
}

RVector Game::marginal_a() const { return nu.rowwise().sum(); }

void Game::validate() const {
  const std::size_t n = questions.size();
  if (answers.size() != n) throw std::invalid_argument("game: answers/questions size mismatch");
  if (nu.rows() != static_cast<Eigen::Index>(n) || nu.cols() != static_cast<Eigen::Index>(n))
    throw std::invalid_argument("game: nu has wrong shape");
  if (nu.minCoeff() < 0) throw std::invalid_argument("game: nu has negative entries");
  if (std::abs(nu.sum() - 1.0) > 1e-12) throw std::invalid_argument("game: nu does not sum to 1");
  if (predicate.size() != n * n) throw std::invalid_argument("game: predicate table incomplete");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const RMatrix& d = predicate[x * n + y];
      if (d.rows() != static_cast<Eigen::Index>(answers[x].size()) ||
          d.cols() != static_cast<Eigen::Index>(answers[y].size()))
        throw std::invalid_argument("game: predicate block has wrong shape");
      for (Eigen::Index a = 0; a < d.rows(); ++a)
        for (Eigen::Index b = 0; b < d.cols(); ++b)
          if (d(a, b) != 0.0 && d(a, b) != 1.0)
            throw std::invalid_argument("game: predicate entries must be 0 or 1");
    }
}

SynchronicityReport analyze_synchronicity(const Game& g) {
  SynchronicityReport rep;
  const std::size_t n = g.num_questions();
  double asym = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      asym = std::max(asym, std::abs(g.nu(x, y) - g.nu(y, x)));
      if (g.num_answers(x) == g.num_answers(y)) {
        for (std::size_t a = 0; a < g.num_answers(x); ++a)
          for (std::size_t b = 0; b < g.num_answers(y); ++b)
            asym = std::max(asym, std::abs(g.pred(x, y, a, b) - g.pred(y, x, b, a)));
      } else {
        asym = std::max(asym, 1.0);
      }
    }
  rep.symmetry_violation = asym;
  rep.is_symmetric = asym <= 1e-12;

  double diag_viol = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t a = 0; a < g.num_answers(x); ++a)
      for (std::size_t b = 0; b < g.num_answers(x); ++b)
        if (a != b) diag_viol = std::max(diag_viol, g.pred(x, x, a, b));
  rep.diagonal_predicate_violation = diag_viol;

  const RVector nu_a = g.marginal_a();
  bool diagonal_positive = true;
  double beta = 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (g.nu(x, x) <= 0.0) diagonal_positive = false;
    if (nu_a(x) > 0.0) beta = std::min(beta, g.nu(x, x) / nu_a(x));
  }
  rep.is_synchronous = rep.is_symmetric && diagonal_positive && diag_viol == 0.0;
  rep.beta = rep.is_synchronous ? std::min(1.0, std::max(0.0, beta)) : 0.0;
  return rep;
}

Game beta_synchronise(const Game& g, double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("beta_synchronise: beta must lie in (0,1)");
  Game out = g;
  const RVector nu_a = g.marginal_a();
  out.nu = (1.0 - beta) * g.nu;
  for (std::size_t x = 0; x < g.num_questions(); ++x) out.nu(x, x) += beta * nu_a(x);
  return out;
}

double winning_probability(const Game& g, const Correlation& c) {
  const std::size_t n = g.num_questions();
  if (c.num_questions() != n) throw std::invalid_argument("winning_probability: index mismatch");
  for (std::size_t x = 0; x < n; ++x)
    if (c.num_answers(x) != g.num_answers(x))
      throw std::invalid_argument("winning_probability: answer count mismatch");
  double total = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (g.nu(x, y) == 0.0) continue;
      total += g.nu(x, y) * g.predicate[x * n + y].cwiseProduct(c.block(x, y)).sum();
    }
  return total;
}

double spectral_gap(const RVector& eigenvalues_descending, double scale) {
  if (eigenvalues_descending.size() < 2) return 0.0;
  const double tol = kDegeneracyTol * std::max(1.0, scale);
  const double gap = eigenvalues_descending(0) - eigenvalues_descending(1);
  return gap <= tol ? 0.0 : gap;
}

double spectral_gap(const CMatrix& t) {
  const HermEig eig = herm_eig(t);
  return spectral_gap(eig.eigenvalues, max_abs(t));
}

}  // namespace qself
