#include "qself/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace qself {

void validate_povm_family(const PovmFamily& family, std::size_t dim, double tol) {
  for (const auto& povm : family) {
    if (povm.empty()) throw std::invalid_argument("povm: empty outcome set");
    CMatrix total = CMatrix::Zero(dim, dim);
    for (const CMatrix& op : povm) {
      if (op.rows() != static_cast<Eigen::Index>(dim) || op.cols() != static_cast<Eigen::Index>(dim))
        throw std::invalid_argument("povm: operator has wrong dimension");
      if (!is_hermitian(op, 1e-9)) throw std::invalid_argument("povm: operator not Hermitian");
      const HermEig eig = herm_eig(op, 1e-9);
      if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -tol)
        throw std::invalid_argument("povm: operator not positive");
      total += op;
    }
    if (max_abs(total - CMatrix::Identity(dim, dim)) > tol)
      throw std::invalid_argument("povm: incomplete family");
  }
}

bool is_pvm_family(const PovmFamily& family, double tol) {
  for (const auto& povm : family)
    for (std::size_t a = 0; a < povm.size(); ++a) {
      if (max_abs(povm[a] * povm[a] - povm[a]) > tol) return false;
      for (std::size_t b = a + 1; b < povm.size(); ++b)
        if (max_abs(povm[a] * povm[b]) > tol) return false;
    }
  return true;
}

CMatrix BipartiteStrategy::rho_a() const {
  const CMatrix m = psi_matrix();
  return m * m.adjoint();
}

CMatrix BipartiteStrategy::rho_b() const {
  const CMatrix m = psi_matrix();
  return (m.adjoint() * m).transpose();
}

void BipartiteStrategy::validate(double tol) const {
  if (static_cast<std::size_t>(psi.size()) != dim_a * dim_b)
    throw std::invalid_argument("strategy: state length mismatch");
  if (std::abs(psi.norm() - 1.0) > tol) throw std::invalid_argument("strategy: state not unit");
  if (a.size() != b.size()) throw std::invalid_argument("strategy: question sets differ");
  validate_povm_family(a, dim_a, tol);
  validate_povm_family(b, dim_b, tol);
}

std::size_t TracialAlgebra::total_dim() const {
  std::size_t d = 0;
  for (const Block& blk : blocks) d += blk.dim;
  return d;
}

void TracialAlgebra::validate() const {
  if (blocks.empty()) throw std::invalid_argument("algebra: no blocks");
  double total = 0.0;
  for (const Block& blk : blocks) {
    if (blk.dim == 0) throw std::invalid_argument("algebra: zero-dimensional block");
    if (blk.weight <= 0) throw std::invalid_argument("algebra: nonpositive weight");
    total += blk.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("algebra: weights must sum to 1");
}

Complex algebra_trace(const TracialAlgebra& alg, const BlockOperator& x) {
  Complex out = 0.0;
  for (std::size_t i = 0; i < alg.blocks.size(); ++i)
    out += alg.blocks[i].weight * x[i].trace() / static_cast<double>(alg.blocks[i].dim);
  return out;
}

BlockOperator block_product(const BlockOperator& x, const BlockOperator& y) {
  BlockOperator out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

void TracialStrategy::validate(double tol) const {
  algebra.validate();
  for (const auto& povm : a) {
    std::vector<CMatrix> totals;
    for (std::size_t i = 0; i < algebra.blocks.size(); ++i)
      totals.push_back(CMatrix::Zero(algebra.blocks[i].dim, algebra.blocks[i].dim));
    for (const BlockOperator& op : povm) {
      if (op.size() != algebra.blocks.size())
        throw std::invalid_argument("tracial strategy: block count mismatch");
      for (std::size_t i = 0; i < op.size(); ++i) {
        const HermEig eig = herm_eig(op[i], 1e-9);
        if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -tol)
          throw std::invalid_argument("tracial strategy: operator not positive");
        totals[i] += op[i];
      }
    }
    for (std::size_t i = 0; i < totals.size(); ++i)
      if (max_abs(totals[i] - CMatrix::Identity(totals[i].rows(), totals[i].cols())) > tol)
        throw std::invalid_argument("tracial strategy: incomplete POVM");
    if (pvm) {
      for (const BlockOperator& op : povm)
        for (std::size_t i = 0; i < op.size(); ++i)
          if (max_abs(op[i] * op[i] - op[i]) > tol)
            throw std::invalid_argument("tracial strategy: pvm flag violated");
    }
  }
}

Correlation correlation(const BipartiteStrategy& s) {
  std::vector<std::size_t> counts;
  for (const auto& povm : s.a) counts.push_back(povm.size());
  Correlation c(counts);
  const CMatrix m = s.psi_matrix();
  for (std::size_t x = 0; x < s.a.size(); ++x)
    for (std::size_t y = 0; y < s.b.size(); ++y)
      for (std::size_t av = 0; av < s.a[x].size(); ++av)
        for (std::size_t bv = 0; bv < s.b[y].size(); ++bv) {
          const Complex val = sandwich(m, s.a[x][av], s.b[y][bv]);
          c.at(x, y, av, bv) = val.real();
        }
  return c;
}

Correlation tracial_correlation(const TracialStrategy& s) {
  std::vector<std::size_t> counts;
  for (const auto& povm : s.a) counts.push_back(povm.size());
  Correlation c(counts);
  for (std::size_t x = 0; x < s.a.size(); ++x)
    for (std::size_t y = 0; y < s.a.size(); ++y)
      for (std::size_t av = 0; av < s.a[x].size(); ++av)
        for (std::size_t bv = 0; bv < s.a[y].size(); ++bv)
          c.at(x, y, av, bv) =
              algebra_trace(s.algebra, block_product(s.a[x][av], s.a[y][bv])).real();
  return c;
}

CMatrix game_polynomial(const Game& g, const BipartiteStrategy& s) {
  const std::size_t n = g.num_questions();
  if (s.a.size() != n || s.b.size() != n)
    throw std::invalid_argument("game_polynomial: question sets do not match");
  for (std::size_t x = 0; x < n; ++x)
    if (s.a[x].size() != g.num_answers(x) || s.b[x].size() != g.num_answers(x))
      throw std::invalid_argument("game_polynomial: answer sets do not match");
  const std::size_t d = s.dim_a * s.dim_b;
  CMatrix t = CMatrix::Zero(d, d);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (g.nu(x, y) == 0.0) continue;
      for (std::size_t a = 0; a < g.num_answers(x); ++a)
        for (std::size_t b = 0; b < g.num_answers(y); ++b)
          if (g.pred(x, y, a, b) != 0.0) t += g.nu(x, y) * kron(s.a[x][a], s.b[y][b]);
    }
  return hermitize(t);
}

double winning_probability(const Game& g, const BipartiteStrategy& s) {
  return winning_probability(g, correlation(s));
}

double winning_probability(const Game& g, const TracialStrategy& s) {
  return winning_probability(g, tracial_correlation(s));
}

double dsync(const Correlation& c, const RVector& nu_a) {
  double agree = 0.0;
  for (std::size_t x = 0; x < c.num_questions(); ++x) {
    if (nu_a(x) == 0.0) continue;
    double diag = 0.0;
    for (std::size_t a = 0; a < c.num_answers(x); ++a) diag += c(x, x, a, a);
    agree += nu_a(x) * diag;
  }
  return 1.0 - agree;
}

double dsync(const BipartiteStrategy& s, const RVector& nu_a) {
  const CMatrix m = s.psi_matrix();
  double agree = 0.0;
  for (std::size_t x = 0; x < s.a.size(); ++x) {
    if (nu_a(x) == 0.0) continue;
    double diag = 0.0;
    for (std::size_t a = 0; a < std::min(s.a[x].size(), s.b[x].size()); ++a)
      diag += sandwich(m, s.a[x][a], s.b[x][a]).real();
    agree += nu_a(x) * diag;
  }
  return 1.0 - agree;
}

double dsync(const TracialStrategy& s, const RVector& nu_a) {
  double agree = 0.0;
  for (std::size_t x = 0; x < s.a.size(); ++x) {
    if (nu_a(x) == 0.0) continue;
    double diag = 0.0;
    for (std::size_t a = 0; a < s.a[x].size(); ++a)
      diag += algebra_trace(s.algebra, block_product(s.a[x][a], s.a[x][a])).real();
    agree += nu_a(x) * diag;
  }
  return 1.0 - agree;
}

CMatrix transpose_in_basis(const CMatrix& op, const CMatrix& u) {
  return u * (u.adjoint() * op * u).transpose() * u.adjoint();
}

namespace {

PovmFamily transpose_family(const PovmFamily& family, const CMatrix& basis) {
  PovmFamily out(family.size());
  for (std::size_t x = 0; x < family.size(); ++x) {
    out[x].reserve(family[x].size());
    for (const CMatrix& op : family[x]) out[x].push_back(transpose_in_basis(op, basis));
  }
  return out;
}

}  // namespace

SymmetricPair associated_symmetric(const BipartiteStrategy& s) {
  const SchmidtDecomp sd = schmidt(s.psi, s.dim_a, s.dim_b);
  SymmetricPair out;

  out.s_a.dim_a = out.s_a.dim_b = s.dim_a;
  CVector psi_a = CVector::Zero(s.dim_a * s.dim_a);
  for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i)
    psi_a += sd.coefficients(i) * kron_vec(sd.left_vectors.col(i), sd.left_vectors.col(i));
  out.s_a.psi = psi_a;
  out.s_a.a = s.a;
  // complete the Schmidt columns to a full basis so the transpose is defined
  CMatrix ua = CMatrix::Identity(s.dim_a, s.dim_a);
  ua.leftCols(sd.left_vectors.cols()) = sd.left_vectors;
  Eigen::HouseholderQR<CMatrix> qra(ua);
  CMatrix basis_a = qra.householderQ();
  basis_a.leftCols(sd.left_vectors.cols()) = sd.left_vectors;
  out.s_a.b = transpose_family(s.a, basis_a);

  out.s_b.dim_a = out.s_b.dim_b = s.dim_b;
  CVector psi_b = CVector::Zero(s.dim_b * s.dim_b);
  for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i)
    psi_b += sd.coefficients(i) * kron_vec(sd.right_vectors.col(i), sd.right_vectors.col(i));
  out.s_b.psi = psi_b;
  out.s_b.a = s.b;
  CMatrix ub = CMatrix::Identity(s.dim_b, s.dim_b);
  ub.leftCols(sd.right_vectors.cols()) = sd.right_vectors;
  Eigen::HouseholderQR<CMatrix> qrb(ub);
  CMatrix basis_b = qrb.householderQ();
  basis_b.leftCols(sd.right_vectors.cols()) = sd.right_vectors;
  out.s_b.b = transpose_family(s.b, basis_b);

  return out;
}

Complex ando_pairing(const BipartiteStrategy& s, const CMatrix& op1, const CMatrix& op2) {
  if (s.dim_a != s.dim_b) throw std::invalid_argument("ando_pairing: strategy not symmetric");
  const CMatrix m = s.psi_matrix();
  if (max_abs(m - m.transpose()) > 1e-9 * std::max(1.0, max_abs(m)))
    throw std::invalid_argument("ando_pairing: state not symmetric");
  const Takagi tk = takagi(m);
  CMatrix root = CMatrix::Zero(s.dim_a, s.dim_a);
  for (Eigen::Index i = 0; i < tk.coefficients.size(); ++i)
    root += tk.coefficients(i) * tk.basis.col(i) * tk.basis.col(i).adjoint();
  const Complex via_ando = (op1 * root * transpose_in_basis(op2, tk.basis) * root).trace();
  const Complex direct = sandwich(m, op1, op2);
  if (std::abs(via_ando - direct) > 1e-9)
    throw std::runtime_error("ando_pairing: formula and direct contraction disagree");
  return via_ando;
}

CMatrix block_embed(const TracialAlgebra& alg, const BlockOperator& x) {
  const std::size_t d = alg.total_dim();
  CMatrix out = CMatrix::Zero(d, d);
  std::size_t off = 0;
  for (std::size_t i = 0; i < alg.blocks.size(); ++i) {
    out.block(off, off, alg.blocks[i].dim, alg.blocks[i].dim) = x[i];
    off += alg.blocks[i].dim;
  }
  return out;
}

CVector max_entangled_state(std::size_t d) {
  CVector psi = CVector::Zero(d * d);
  for (std::size_t i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return psi;
}

BipartiteStrategy gns_realize(const TracialStrategy& s) {
  s.validate();
  const std::size_t d = s.algebra.total_dim();
  BipartiteStrategy out;
  out.dim_a = out.dim_b = d;
  CVector psi = CVector::Zero(d * d);
  std::size_t off = 0;
  for (const TracialAlgebra::Block& blk : s.algebra.blocks) {
    const double coeff = std::sqrt(blk.weight / static_cast<double>(blk.dim));
    for (std::size_t j = 0; j < blk.dim; ++j) psi((off + j) * d + (off + j)) = coeff;
    off += blk.dim;
  }
  out.psi = psi;
  out.a.resize(s.a.size());
  out.b.resize(s.a.size());
  for (std::size_t x = 0; x < s.a.size(); ++x)
    for (const BlockOperator& op : s.a[x]) {
      const CMatrix dense = block_embed(s.algebra, op);
      out.a[x].push_back(dense);
      out.b[x].push_back(dense.transpose());
    }
  return out;
}

}  // namespace qself
