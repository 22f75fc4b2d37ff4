#pragma once

#include <vector>

#include "qself/game.hpp"
#include "qself/linalg.hpp"

namespace qself {

using PovmFamily = std::vector<std::vector<CMatrix>>;  // [question][answer]

// Throws when positivity or completeness fails the 1e-10 absolute slack.
void validate_povm_family(const PovmFamily& family, std::size_t dim, double tol = 1e-10);
bool is_pvm_family(const PovmFamily& family, double tol = 1e-10);

struct BipartiteStrategy {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  CVector psi;     // unit vector on C^{dimA*dimB}, row-major composite index
  PovmFamily a;    // Alice, indexed [x][answer]
  PovmFamily b;    // Bob, indexed [y][answer]

  std::size_t num_questions() const { return a.size(); }
  CMatrix psi_matrix() const { return as_matrix(psi, dim_a, dim_b); }
  CMatrix rho_a() const;
  CMatrix rho_b() const;
  void validate(double tol = 1e-10) const;
};

struct TracialAlgebra {
  struct Block {
    std::size_t dim;
    double weight;
  };
  std::vector<Block> blocks;

  std::size_t total_dim() const;
  void validate() const;  // weights positive, sum to 1
};

using BlockOperator = std::vector<CMatrix>;  // one matrix per algebra block

// tau(X) = sum_i w_i tr_i(X_i) with tr_i the normalised trace per block.
Complex algebra_trace(const TracialAlgebra& alg, const BlockOperator& x);
BlockOperator block_product(const BlockOperator& x, const BlockOperator& y);

struct TracialStrategy {
  TracialAlgebra algebra;
  std::vector<std::vector<BlockOperator>> a;  // [question][answer][block]
  bool pvm = false;

  std::size_t num_questions() const { return a.size(); }
  void validate(double tol = 1e-10) const;
};

// C_{x,y,a,b} = <psi| A^x_a (x) B^y_b |psi>
Correlation correlation(const BipartiteStrategy& s);

// C_{x,y,a,b} = tau(A^x_a A^y_b)
Correlation tracial_correlation(const TracialStrategy& s);

// T_{G,S} = E_{(x,y)~nu} sum_{a,b} D(a,b|x,y) A^x_a (x) B^y_b
CMatrix game_polynomial(const Game& g, const BipartiteStrategy& s);

double winning_probability(const Game& g, const BipartiteStrategy& s);
double winning_probability(const Game& g, const TracialStrategy& s);

// Asynchronicity 1 - E_{x~nuA} sum_a C_{x,x,a,a}.
double dsync(const Correlation& c, const RVector& nu_a);
double dsync(const BipartiteStrategy& s, const RVector& nu_a);
double dsync(const TracialStrategy& s, const RVector& nu_a);

// Associated symmetric strategies S_A, S_B via the Schmidt decomposition;
// Bob's operators are transposes in the recorded Schmidt basis.
struct SymmetricPair {
  BipartiteStrategy s_a;
  BipartiteStrategy s_b;
};
SymmetricPair associated_symmetric(const BipartiteStrategy& s);

// Transpose of op in the orthonormal basis given by the columns of u.
CMatrix transpose_in_basis(const CMatrix& op, const CMatrix& u);

// Ando pairing Tr(op1 rho^{1/2} op2^T rho^{1/2}) for a symmetric strategy
// state; checks agreement with <psi|op1 (x) op2|psi> to 1e-9 and throws on
// asymmetric input.
Complex ando_pairing(const BipartiteStrategy& s, const CMatrix& op1, const CMatrix& op2);

// GNS realisation of a tracial strategy: block-diagonal operators acting on
// H = direct sum of the blocks, state sum_i sqrt(w_i/d_i) sum_j |ij,ij>, and
// B = A^T in the computational (Schmidt) basis.
BipartiteStrategy gns_realize(const TracialStrategy& s);

// Embed a block operator as a dense matrix on the direct-sum space.
CMatrix block_embed(const TracialAlgebra& alg, const BlockOperator& x);

CVector max_entangled_state(std::size_t d);

}  // namespace qself
