#pragma once

#include <string>
#include <vector>

#include "qself/linalg.hpp"

namespace qself {

// Dense 4-index table keyed by (x, y, a, b); answer sets may differ per
// question, so rows are stored as one matrix block per question pair.
class Correlation {
 public:
  Correlation() = default;
  explicit Correlation(std::vector<std::size_t> answer_counts);

  double operator()(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return blocks_[x * answer_counts_.size() + y](a, b);
  }
  double& at(std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
    return blocks_[x * answer_counts_.size() + y](a, b);
  }
  const RMatrix& block(std::size_t x, std::size_t y) const {
    return blocks_[x * answer_counts_.size() + y];
  }

  std::size_t num_questions() const { return answer_counts_.size(); }
  std::size_t num_answers(std::size_t x) const { return answer_counts_[x]; }
  const std::vector<std::size_t>& answer_counts() const { return answer_counts_; }

  // Sum_{a,b} |C - other| averaged over (x,y) ~ nu.
  double l1_distance(const Correlation& other, const RMatrix& nu) const;

 private:
  std::vector<std::size_t> answer_counts_;
  std::vector<RMatrix> blocks_;
};

struct Game {
  std::vector<std::string> questions;               // labels, index order fixed
  std::vector<std::vector<std::string>> answers;    // per-question labels
  RMatrix nu;                                       // |X| x |X|, entries >= 0, sums to 1
  std::vector<RMatrix> predicate;                   // blocks D(a,b|x,y), row-major over (x,y)

  std::size_t num_questions() const { return questions.size(); }
  std::size_t num_answers(std::size_t x) const { return answers[x].size(); }
  double pred(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return predicate[x * questions.size() + y](a, b);
  }

  // Marginal of nu on Alice's question.
  RVector marginal_a() const;

  void validate() const;  // throws std::invalid_argument on schema violations
};

struct SynchronicityReport {
  bool is_symmetric = false;
  bool is_synchronous = false;
  double beta = 0.0;                     // largest beta with nu(x,x) >= beta*nu_A(x)
  double symmetry_violation = 0.0;       // max |nu(x,y)-nu(y,x)| and predicate asymmetry
  double diagonal_predicate_violation = 0.0;  // max D(a,b|x,x) over a != b
};

SynchronicityReport analyze_synchronicity(const Game& g);

// nu'(x,y) = beta*nu_A(x)*delta_{x,y} + (1-beta)*nu(x,y); beta in (0,1).
Game beta_synchronise(const Game& g, double beta);

double winning_probability(const Game& g, const Correlation& c);

// lambda_max - lambda_second counting multiplicity; 0 when the top eigenvalue
// is degenerate under the shared tolerance.
double spectral_gap(const CMatrix& t);
double spectral_gap(const RVector& eigenvalues_descending, double scale);

}  // namespace qself
