#include "qself/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qself {

double SeededRng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, max_abs(m));
  return max_abs(m - m.adjoint()) <= tol * scale;
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

HermEig herm_eig(const CMatrix& m, double herm_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("herm_eig: matrix not square");
  if (!is_hermitian(m, herm_tol)) throw std::invalid_argument("herm_eig: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) throw std::runtime_error("herm_eig: solver failed");
  const Eigen::Index d = m.rows();
  HermEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = CMatrix(d, d);
  for (Eigen::Index i = 0; i < d; ++i) out.eigenvectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  return out;
}

CMatrix as_matrix(const CVector& psi, std::size_t dim_a, std::size_t dim_b) {
  if (static_cast<std::size_t>(psi.size()) != dim_a * dim_b)
    throw std::invalid_argument("state length does not match dimA*dimB");
  CMatrix m(dim_a, dim_b);
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_b; ++j) m(i, j) = psi(i * dim_b + j);
  return m;
}

CVector as_vector(const CMatrix& m) {
  CVector v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

SchmidtDecomp schmidt(const CVector& psi, std::size_t dim_a, std::size_t dim_b) {
  const CMatrix m = as_matrix(psi, dim_a, dim_b);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomp out;
  out.coefficients = svd.singularValues();
  out.left_vectors = svd.matrixU();
  out.right_vectors = svd.matrixV().conjugate();
  return out;
}

RVector schmidt_coefficients(const CVector& psi, std::size_t dim_a, std::size_t dim_b) {
  return schmidt(psi, dim_a, dim_b).coefficients;
}

Takagi takagi(const CMatrix& m, double sym_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("takagi: matrix not square");
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.transpose()) > sym_tol * scale)
    throw std::invalid_argument("takagi: matrix not complex symmetric");
  const CMatrix sym = 0.5 * (m + m.transpose());
  Eigen::JacobiSVD<CMatrix> svd(sym, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // M = U S V^*; S = V^* conj(U) is unitary with S^T d = d S, so the
  // principal square root of S^T conjugates the frames into a Takagi pair.
  const CMatrix s = svd.matrixV().adjoint() * svd.matrixU().conjugate();
  Eigen::ComplexSchur<CMatrix> schur(s.transpose());
  const Eigen::Index d = m.rows();
  CMatrix root_diag = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) root_diag(i, i) = std::sqrt(schur.matrixT()(i, i));
  const CMatrix w = schur.matrixU() * root_diag * schur.matrixU().adjoint();
  Takagi out;
  out.coefficients = svd.singularValues();
  out.basis = svd.matrixU() * w;
  return out;
}

PolarDecomp polar(const CMatrix& a, double rank_tol) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const double cutoff = rank_tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  CMatrix d = CMatrix::Zero(sv.size(), sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) d(i, i) = sv(i) > cutoff ? 1.0 : 0.0;
  PolarDecomp out;
  out.isometry = svd.matrixU() * d * svd.matrixV().adjoint();
  out.positive = svd.matrixV() * sv.asDiagonal() * svd.matrixV().adjoint();
  return out;
}

double schatten_norm(const CMatrix& a, double p) {
  if (p == 2.0) return a.norm();
  Eigen::JacobiSVD<CMatrix> svd(a);
  const RVector& sv = svd.singularValues();
  if (p == 1.0) return sv.sum();
  if (std::isinf(p)) return sv.size() > 0 ? sv(0) : 0.0;
  throw std::invalid_argument("schatten_norm: p must be 1, 2 or inf");
}

double trace_norm(const CMatrix& a) { return schatten_norm(a, 1.0); }

double operator_norm(const CMatrix& a) {
  return schatten_norm(a, std::numeric_limits<double>::infinity());
}

CMatrix partial_trace(const CMatrix& m, std::size_t dim_a, std::size_t dim_b, Side traced_out) {
  const std::size_t d = dim_a * dim_b;
  if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != static_cast<Eigen::Index>(d))
    throw std::invalid_argument("partial_trace: dimension not factorable as declared");
  if (traced_out == Side::B) {
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t b = 0; b < dim_b; ++b) out(i, j) += m(i * dim_b + b, j * dim_b + b);
    return out;
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (std::size_t i = 0; i < dim_b; ++i)
    for (std::size_t j = 0; j < dim_b; ++j)
      for (std::size_t a = 0; a < dim_a; ++a) out(i, j) += m(a * dim_b + i, a * dim_b + j);
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

Complex sandwich(const CMatrix& psi_mat, const CMatrix& x, const CMatrix& y) {
  return (psi_mat.adjoint() * x * psi_mat * y.transpose()).trace();
}

CVector permute_factors(const CVector& v, const std::vector<std::size_t>& dims,
                        const std::vector<std::size_t>& perm) {
  const std::size_t n = dims.size();
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (static_cast<std::size_t>(v.size()) != total)
    throw std::invalid_argument("permute_factors: length mismatch");
  std::vector<std::size_t> new_dims(n), old_stride(n), new_stride(n);
  for (std::size_t j = 0; j < n; ++j) new_dims[j] = dims[perm[j]];
  old_stride[n - 1] = 1;
  for (std::size_t j = n - 1; j > 0; --j) old_stride[j - 1] = old_stride[j] * dims[j];
  new_stride[n - 1] = 1;
  for (std::size_t j = n - 1; j > 0; --j) new_stride[j - 1] = new_stride[j] * new_dims[j];
  CVector out(v.size());
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    std::size_t target = 0;
    for (std::size_t j = 0; j < n; ++j) {
      idx[j] = rem / old_stride[j];
      rem %= old_stride[j];
    }
    for (std::size_t j = 0; j < n; ++j) target += idx[perm[j]] * new_stride[j];
    out(target) = v(flat);
  }
  return out;
}

CMatrix sqrt_psd(const CMatrix& m) {
  const HermEig eig = herm_eig(m);
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double v = std::max(0.0, eig.eigenvalues(i));
    out += std::sqrt(v) * eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
  }
  return out;
}

CMatrix identity(std::size_t d) { return CMatrix::Identity(d, d); }

CMatrix ginibre(SeededRng& rng, std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
  return m;
}

CMatrix gue(SeededRng& rng, std::size_t d) {
  const CMatrix g = ginibre(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

CMatrix haar_unitary(SeededRng& rng, std::size_t d) {
  const CMatrix g = ginibre(rng, d, d);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t i = 0; i < d; ++i) {
    const Complex ri = r(i, i);
    const double mag = std::abs(ri);
    q.col(i) *= mag > 0 ? ri / mag : Complex(1.0, 0.0);
  }
  return q;
}

CVector haar_state(SeededRng& rng, std::size_t d) {
  CVector v(d);
  for (std::size_t i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
  return v / v.norm();
}

CMatrix haar_isometry(SeededRng& rng, std::size_t from, std::size_t to) {
  if (from > to) throw std::invalid_argument("haar_isometry: target dimension too small");
  return haar_unitary(rng, to).leftCols(from);
}

std::vector<CMatrix> random_povm(SeededRng& rng, std::size_t d, std::size_t outcomes) {
  if (d == 0 || outcomes == 0) throw std::invalid_argument("random_povm: invalid dims");
  std::vector<CMatrix> gram(outcomes);
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < outcomes; ++a) {
    const CMatrix g = ginibre(rng, d, d);
    gram[a] = g * g.adjoint();
    total += gram[a];
  }
  const HermEig eig = herm_eig(total);
  CMatrix inv_root = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < d; ++i)
    inv_root += (1.0 / std::sqrt(eig.eigenvalues(i))) * eig.eigenvectors.col(i) *
                eig.eigenvectors.col(i).adjoint();
  std::vector<CMatrix> out(outcomes);
  for (std::size_t a = 0; a < outcomes; ++a) out[a] = hermitize(inv_root * gram[a] * inv_root);
  return out;
}

std::vector<CMatrix> random_pvm(SeededRng& rng, std::size_t d, std::size_t outcomes) {
  if (d == 0 || outcomes == 0) throw std::invalid_argument("random_pvm: invalid dims");
  const CMatrix u = haar_unitary(rng, d);
  std::vector<CMatrix> out(outcomes, CMatrix::Zero(d, d));
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t a = rng.uniform_index(outcomes);
    out[a] += u.col(i) * u.col(i).adjoint();
  }
  return out;
}

std::vector<CMatrix> perturbed_pvm(SeededRng& rng, std::size_t d, std::size_t outcomes,
                                   double eta) {
  if (eta < 0) throw std::invalid_argument("perturbed_pvm: eta must be nonnegative");
  std::vector<CMatrix> pvm = random_pvm(rng, d, outcomes);
  if (eta == 0.0) return pvm;
  std::vector<CMatrix> shifted(outcomes);
  CMatrix total = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < outcomes; ++a) {
    CMatrix h = gue(rng, d);
    h /= std::max(1.0, operator_norm(h));
    // P + eta (H + Id) stays PSD because ||H||_inf <= 1.
    shifted[a] = pvm[a] + eta * (h + CMatrix::Identity(d, d));
    total += shifted[a];
  }
  const HermEig eig = herm_eig(total);
  CMatrix inv_root = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < d; ++i)
    inv_root += (1.0 / std::sqrt(eig.eigenvalues(i))) * eig.eigenvectors.col(i) *
                eig.eigenvectors.col(i).adjoint();
  std::vector<CMatrix> out(outcomes);
  for (std::size_t a = 0; a < outcomes; ++a) out[a] = hermitize(inv_root * shifted[a] * inv_root);
  return out;
}

}  // namespace qself
