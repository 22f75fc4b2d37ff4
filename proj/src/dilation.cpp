#include "qself/dilation.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace qself {

namespace {

// (A (x) Id) psi and (Id (x) B) psi in the matrix picture.
CVector apply_left(const CMatrix& a, const CMatrix& psi_mat) { return as_vector(a * psi_mat); }
CVector apply_right(const CMatrix& b, const CMatrix& psi_mat) {
  return as_vector(psi_mat * b.transpose());
}

}  // namespace

CVector dilation_target(const CVector& psi_tilde, std::size_t dim_ta, std::size_t dim_tb,
                        const CVector& aux, std::size_t dim_ka, std::size_t dim_kb) {
  const CVector joint = kron_vec(psi_tilde, aux);
  return permute_factors(joint, {dim_ta, dim_tb, dim_ka, dim_kb}, {0, 2, 1, 3});
}

ResidualTriple dilation_residuals(const BipartiteStrategy& s, const BipartiteStrategy& s_tilde,
                                  const DilationWitness& w) {
  const std::size_t ta = s_tilde.dim_a;
  const std::size_t tb = s_tilde.dim_b;
  if (w.v_a.cols() != static_cast<Eigen::Index>(s.dim_a) ||
      w.v_a.rows() != static_cast<Eigen::Index>(ta * w.dim_ka) ||
      w.v_b.cols() != static_cast<Eigen::Index>(s.dim_b) ||
      w.v_b.rows() != static_cast<Eigen::Index>(tb * w.dim_kb))
    throw std::invalid_argument("dilation_residuals: isometry dimensions do not match");

  const CMatrix big = kron(w.v_a, w.v_b);
  const CMatrix psi_mat = s.psi_matrix();
  const CMatrix psi_tilde_mat = s_tilde.psi_matrix();
  const RVector nu_a = w.nu_hat.rowwise().sum();
  const RVector nu_b = w.nu_hat.colwise().sum();

  ResidualTriple out;
  const CVector target = dilation_target(s_tilde.psi, ta, tb, w.aux, w.dim_ka, w.dim_kb);
  out.state = (big * s.psi - target).norm();

  double acc_a = 0.0;
  for (std::size_t x = 0; x < s.a.size(); ++x) {
    if (nu_a(x) == 0.0) continue;
    double sum_a = 0.0;
    for (std::size_t av = 0; av < s.a[x].size(); ++av) {
      const CVector lhs = big * apply_left(s.a[x][av], psi_mat);
      const CVector rhs = dilation_target(apply_left(s_tilde.a[x][av], psi_tilde_mat), ta, tb,
                                          w.aux, w.dim_ka, w.dim_kb);
      sum_a += (lhs - rhs).squaredNorm();
    }
    acc_a += nu_a(x) * sum_a;
  }
  out.side_a = std::sqrt(acc_a);

  double acc_b = 0.0;
  for (std::size_t y = 0; y < s.b.size(); ++y) {
    if (nu_b(y) == 0.0) continue;
    double sum_b = 0.0;
    for (std::size_t bv = 0; bv < s.b[y].size(); ++bv) {
      const CVector lhs = big * apply_right(s.b[y][bv], psi_mat);
      const CVector rhs = dilation_target(apply_right(s_tilde.b[y][bv], psi_tilde_mat), ta, tb,
                                          w.aux, w.dim_ka, w.dim_kb);
      sum_b += (lhs - rhs).squaredNorm();
    }
    acc_b += nu_b(y) * sum_b;
  }
  out.side_b = std::sqrt(acc_b);
  return out;
}

double strong_residual(const BipartiteStrategy& s, const BipartiteStrategy& s_tilde,
                       const DilationWitness& w) {
  const std::size_t ta = s_tilde.dim_a;
  const std::size_t tb = s_tilde.dim_b;
  const CMatrix big = kron(w.v_a, w.v_b);
  const CMatrix psi_mat = s.psi_matrix();
  const CMatrix psi_tilde_mat = s_tilde.psi_matrix();

  double acc = 0.0;
  for (std::size_t x = 0; x < s.a.size(); ++x)
    for (std::size_t y = 0; y < s.b.size(); ++y) {
      if (w.nu_hat(x, y) == 0.0) continue;
      double sum = 0.0;
      for (std::size_t av = 0; av < s.a[x].size(); ++av)
        for (std::size_t bv = 0; bv < s.b[y].size(); ++bv) {
          const CVector lhs = big * as_vector(s.a[x][av] * psi_mat * s.b[y][bv].transpose());
          const CVector rhs = dilation_target(
              as_vector(s_tilde.a[x][av] * psi_tilde_mat * s_tilde.b[y][bv].transpose()), ta, tb,
              w.aux, w.dim_ka, w.dim_kb);
          sum += (lhs - rhs).squaredNorm();
        }
      acc += w.nu_hat(x, y) * sum;
    }
  return std::sqrt(acc);
}

double VnaWitness::ambient_trace(const CMatrix& x) const {
  return x.trace().real() / static_cast<double>(dim_m * dim_m0);
}

void VnaWitness::validate(double leak_tol) const {
  const std::size_t d = ambient_dim();
  if (p.rows() != static_cast<Eigen::Index>(d) || w.rows() != static_cast<Eigen::Index>(d))
    throw std::invalid_argument("vna witness: ambient dimensions do not match");
  if (max_abs(p * p - p) > 1e-9 || !is_hermitian(p, 1e-9))
    throw std::invalid_argument("vna witness: P is not a projection");
  if (max_abs(embed.adjoint() * embed -
              CMatrix::Identity(embed.cols(), embed.cols())) > 1e-9)
    throw std::invalid_argument("vna witness: embed is not an isometry");
  if (max_abs(embed * embed.adjoint() - p) > 1e-9)
    throw std::invalid_argument("vna witness: embed does not span P");
  const CMatrix wtw = w.adjoint() * w;
  if (max_abs(wtw * wtw - wtw) > 1e-8)
    throw std::invalid_argument("vna witness: W is not a partial isometry");
  // support leakage: W must live in P (...) I_{M (x) M0}
  if (max_abs(p * w - w) > leak_tol)
    throw std::invalid_argument("vna witness: truncation too small (range leakage)");
  const std::size_t corner = dim_m * dim_m0;
  CMatrix corner_proj = CMatrix::Zero(d, d);
  corner_proj.topLeftCorner(corner, corner) = CMatrix::Identity(corner, corner);
  if (max_abs(w * corner_proj - w) > leak_tol)
    throw std::invalid_argument("vna witness: truncation too small (support leakage)");
}

namespace {

void require_factor(const TracialStrategy& s, const char* who) {
  if (s.algebra.blocks.size() != 1)
    throw std::invalid_argument(std::string(who) + ": tracial strategy must be a single block");
}

// Embed an (m*k)-corner matrix into the ambient space.
CMatrix corner_embed(const CMatrix& x, std::size_t ambient) {
  CMatrix out = CMatrix::Zero(ambient, ambient);
  out.topLeftCorner(x.rows(), x.cols()) = x;
  return out;
}

}  // namespace

VnaResiduals vna_residuals(const TracialStrategy& s, const TracialStrategy& s_tilde,
                           const VnaWitness& w, const RVector& nu_hat_a) {
  require_factor(s, "vna_residuals");
  require_factor(s_tilde, "vna_residuals");
  w.validate();
  const std::size_t n = s.algebra.blocks[0].dim;
  const std::size_t m = s_tilde.algebra.blocks[0].dim;
  if (m != w.dim_m || w.embed.cols() != static_cast<Eigen::Index>(n))
    throw std::invalid_argument("vna_residuals: witness does not match the strategies");
  const std::size_t k = w.dim_m0;
  const std::size_t d = w.ambient_dim();
  const double corner_dim = static_cast<double>(m * k);

  VnaResiduals out;
  const double trace_p = w.p.trace().real();
  out.p1 = (trace_p - (w.w * w.w.adjoint()).trace().real()) / trace_p;
  out.p2 = (corner_dim - (w.w.adjoint() * w.w).trace().real()) / corner_dim;

  double acc = 0.0;
  for (std::size_t x = 0; x < s.a.size(); ++x) {
    if (nu_hat_a(x) == 0.0) continue;
    double sum = 0.0;
    for (std::size_t a = 0; a < s.a[x].size(); ++a) {
      const CMatrix ideal = corner_embed(kron(s_tilde.a[x][a][0], CMatrix::Identity(k, k)), d);
      const CMatrix pulled = w.w.adjoint() * (w.embed * s.a[x][a][0] * w.embed.adjoint()) * w.w;
      const CMatrix diff = ideal - pulled;
      sum += (diff.adjoint() * diff).trace().real() / corner_dim;
    }
    acc += nu_hat_a(x) * sum;
  }
  out.op = acc;
  return out;
}

std::vector<MeasureConversion> measure_conversion(const TracialStrategy& s,
                                                  const TracialStrategy& s_tilde,
                                                  const VnaWitness& w) {
  require_factor(s, "measure_conversion");
  require_factor(s_tilde, "measure_conversion");
  w.validate();
  const std::size_t n = s.algebra.blocks[0].dim;
  const std::size_t m = w.dim_m;
  const std::size_t k = w.dim_m0;
  const std::size_t d = w.ambient_dim();
  const double corner_dim = static_cast<double>(m * k);
  const double trace_p = w.p.trace().real();
  const double p1 = (trace_p - (w.w * w.w.adjoint()).trace().real()) / trace_p;
  const double p2 = (corner_dim - (w.w.adjoint() * w.w).trace().real()) / corner_dim;
  const double eps = std::max(p1, p2);

  std::vector<MeasureConversion> out;
  for (std::size_t x = 0; x < s.a.size(); ++x) {
    MeasureConversion conv;
    for (std::size_t a = 0; a < s.a[x].size(); ++a) {
      const CMatrix a_op = w.embed * s.a[x][a][0] * w.embed.adjoint();
      const CMatrix ideal = corner_embed(kron(s_tilde.a[x][a][0], CMatrix::Identity(k, k)), d);
      const CMatrix diff_m = ideal - w.w.adjoint() * a_op * w.w;
      conv.lhs_m += (diff_m.adjoint() * diff_m).trace().real() / corner_dim;
      const CMatrix pushed = w.embed.adjoint() * (w.w * ideal * w.w.adjoint()) * w.embed;
      const CMatrix diff_n = pushed - s.a[x][a][0];
      conv.lhs_n += (diff_n.adjoint() * diff_n).trace().real() / static_cast<double>(n);
    }
    conv.bound_m = 2.0 * eps + conv.lhs_n / (1.0 - eps);
    conv.bound_n = 2.0 * eps / (1.0 - eps) + conv.lhs_m / (1.0 - eps);
    out.push_back(conv);
  }
  return out;
}

RVector me_aux_round(const RVector& kappa, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw std::invalid_argument("me_aux_round: dimensions must be positive");
  for (Eigen::Index i = 0; i + 1 < kappa.size(); ++i)
    if (kappa(i) + 1e-12 < kappa(i + 1))
      throw std::invalid_argument("me_aux_round: sequence must be descending");

  if (m < n) {
    const std::size_t len = std::max<std::size_t>(kappa.size(), n);
    RVector out = RVector::Zero(len);
    for (std::size_t i = 0; i < n; ++i) out(i) = 1.0 / std::sqrt(static_cast<double>(n));
    return out;
  }

  const std::size_t limit = (m / n) * n;
  const std::size_t window_end = limit + n;
  const std::size_t len = std::max<std::size_t>(kappa.size(), window_end);
  const double flat = 1.0 / std::sqrt(static_cast<double>(m));
  RVector rounded = RVector::Zero(len);
  for (std::size_t i = 0; i < window_end; ++i) {
    const double ki = i < static_cast<std::size_t>(kappa.size()) ? kappa(i) : 0.0;
    if (i < limit)
      rounded(i) = flat;
    else
      rounded(i) = ki >= 0.5 * flat ? flat : 0.0;
  }
  const double norm = rounded.norm();
  if (norm == 0.0) throw std::runtime_error("me_aux_round: rounded sequence vanished");
  return rounded / norm;
}

PartialIsometrize partial_isometrize(const CMatrix& v_a, const CMatrix& v_b, const CMatrix& p_a,
                                     const CMatrix& p_b, const BipartiteStrategy& s,
                                     const BipartiteStrategy& s_tilde, const CVector& aux,
                                     std::size_t dim_ka, std::size_t dim_kb,
                                     const RVector& nu_hat_a) {
  const std::size_t ta = s_tilde.dim_a;
  const std::size_t tb = s_tilde.dim_b;
  const CMatrix psi_mat = s.psi_matrix();
  const CMatrix psi_tilde_mat = s_tilde.psi_matrix();
  const CVector target = dilation_target(s_tilde.psi, ta, tb, aux, dim_ka, dim_kb);

  const auto measurement_residual = [&](const CMatrix& left, const CMatrix& right) {
    const CMatrix big = kron(left, right);
    double acc = 0.0;
    for (std::size_t x = 0; x < s.a.size(); ++x) {
      if (nu_hat_a(x) == 0.0) continue;
      double sum = 0.0;
      for (std::size_t a = 0; a < s.a[x].size(); ++a) {
        const CVector moved = big * as_vector(s.a[x][a] * psi_mat);
        const CVector rhs = dilation_target(apply_left(s_tilde.a[x][a], psi_tilde_mat), ta, tb,
                                            aux, dim_ka, dim_kb);
        sum += (moved - rhs).squaredNorm();
      }
      acc += nu_hat_a(x) * sum;
    }
    return std::sqrt(acc);
  };

  PartialIsometrize out;
  const double state_in = (kron(v_a, v_b) * s.psi - target).norm();
  const double meas_in = measurement_residual(v_a, v_b);
  out.input_eps = std::max(state_in, meas_in);

  out.v_a_prime = polar(p_a * v_a).isometry;
  out.v_b_prime = polar(p_b * v_b).isometry;

  out.state = (kron(out.v_a_prime, out.v_b_prime) * s.psi - target).norm();
  out.measurement = measurement_residual(out.v_a_prime, out.v_b_prime);
  out.support_a =
      1.0 - (kron(out.v_a_prime, CMatrix::Identity(s.dim_b, s.dim_b)) * s.psi).squaredNorm();
  const CMatrix va_adj = out.v_a_prime.adjoint();
  out.cosupport_a =
      1.0 - (kron(va_adj, CMatrix::Identity(tb * dim_kb, tb * dim_kb)) * target).squaredNorm();

  // "Moreover" estimate requires the target to be maximally entangled across
  // the (H~_A K_A) : (H~_B K_B) cut.
  const RVector coeffs = schmidt_coefficients(target, ta * dim_ka, tb * dim_kb);
  std::size_t support = 0;
  double flat_dev = 0.0;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    if (coeffs(i) > 1e-9) ++support;
  for (std::size_t i = 0; i < support; ++i) flat_dev = std::max(flat_dev, std::abs(coeffs(i) - coeffs(0)));
  const double rank_a = p_a.trace().real();
  const double rank_b = p_b.trace().real();
  out.swapped_valid = flat_dev <= 1e-8 && std::abs(rank_a - static_cast<double>(support)) < 0.5 &&
                      std::abs(rank_b - static_cast<double>(support)) < 0.5;
  const CVector lhs5 = kron(CMatrix::Identity(s.dim_a, s.dim_a), out.v_b_prime) * s.psi;
  const CVector rhs5 = kron(va_adj, CMatrix::Identity(tb * dim_kb, tb * dim_kb)) * target;
  out.swapped = (lhs5 - rhs5).norm();
  return out;
}

namespace {

CMatrix ambient_corner_injection(std::size_t corner, std::size_t ambient) {
  CMatrix j = CMatrix::Zero(ambient, corner);
  j.topLeftCorner(corner, corner) = CMatrix::Identity(corner, corner);
  return j;
}

}  // namespace

VnaConversion pme_to_vna(const TracialStrategy& s, const TracialStrategy& s_tilde,
                         const DilationWitness& w) {
  require_factor(s, "pme_to_vna");
  require_factor(s_tilde, "pme_to_vna");
  const std::size_t n = s.algebra.blocks[0].dim;
  const std::size_t m = s_tilde.algebra.blocks[0].dim;
  const BipartiteStrategy s_bip = gns_realize(s);
  const BipartiteStrategy st_bip = gns_realize(s_tilde);
  const RVector nu_hat_a = w.nu_hat.rowwise().sum();

  VnaConversion out;
  out.input_eps = dilation_residuals(s_bip, st_bip, w).max();

  // Round the auxiliary state to a maximally entangled one (3 eps cost).
  const CVector target = dilation_target(st_bip.psi, m, m, w.aux, w.dim_ka, w.dim_kb);
  RVector kappa = schmidt_coefficients(target, m * w.dim_ka, m * w.dim_kb);
  const RVector rounded = me_aux_round(kappa, m, n);
  std::size_t nonzeros = 0;
  for (Eigen::Index i = 0; i < rounded.size(); ++i)
    if (rounded(i) > 0) ++nonzeros;
  const std::size_t used = nonzeros / m;  // Schmidt slots of the rounded aux

  const SchmidtDecomp aux_schmidt = schmidt(w.aux, w.dim_ka, w.dim_kb);
  if (used > static_cast<std::size_t>(aux_schmidt.coefficients.size()))
    throw std::invalid_argument("pme_to_vna: auxiliary state has too little Schmidt support");
  CVector aux_me = CVector::Zero(w.dim_ka * w.dim_kb);
  for (std::size_t i = 0; i < used; ++i)
    aux_me += std::sqrt(static_cast<double>(m)) * rounded(m * i) *
              kron_vec(aux_schmidt.left_vectors.col(i), aux_schmidt.right_vectors.col(i));

  // Projections onto H~ (x) K' for the partial isometry construction.
  CMatrix proj_ka = CMatrix::Zero(w.dim_ka, w.dim_ka);
  CMatrix proj_kb = CMatrix::Zero(w.dim_kb, w.dim_kb);
  for (std::size_t i = 0; i < used; ++i) {
    proj_ka += aux_schmidt.left_vectors.col(i) * aux_schmidt.left_vectors.col(i).adjoint();
    proj_kb += aux_schmidt.right_vectors.col(i) * aux_schmidt.right_vectors.col(i).adjoint();
  }
  const CMatrix p_a = kron(CMatrix::Identity(m, m), proj_ka);
  const CMatrix p_b = kron(CMatrix::Identity(m, m), proj_kb);

  const PartialIsometrize iso = partial_isometrize(w.v_a, w.v_b, p_a, p_b, s_bip, st_bip, aux_me,
                                                   w.dim_ka, w.dim_kb, nu_hat_a);

  // Compress V'_A onto H~ (x) K'_A and take W = (V'_A)^*.
  const CMatrix basis_ka = aux_schmidt.left_vectors.leftCols(used);
  const CMatrix compress = kron(CMatrix::Identity(m, m), basis_ka);  // (m kA) x (m used)
  const CMatrix v_prime = compress.adjoint() * iso.v_a_prime;        // (m used) x n
  const CMatrix w_n = v_prime.adjoint();                             // (m used) -> n

  const std::size_t corner = m * used;
  Eigen::JacobiSVD<CMatrix> svd(v_prime, Eigen::ComputeThinU);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 0.5) ++rank;
  const std::size_t fresh = n - rank;
  const std::size_t trunc = 1 + (fresh + corner - 1) / corner;
  const std::size_t ambient = corner * trunc;

  VnaWitness witness;
  witness.dim_m = m;
  witness.dim_m0 = used;
  witness.trunc = trunc;
  CMatrix embed = CMatrix::Zero(ambient, n);
  embed.block(0, 0, corner, rank) = svd.matrixU().leftCols(rank);
  for (std::size_t j = 0; j < fresh; ++j) embed(corner + j, rank + j) = 1.0;
  witness.embed = embed;
  witness.p = embed * embed.adjoint();
  witness.w = embed * w_n * ambient_corner_injection(corner, ambient).adjoint();

  out.witness = witness;
  out.certified = 1700.0 * out.input_eps * out.input_eps;
  out.measured = vna_residuals(s, s_tilde, witness, nu_hat_a);
  return out;
}

DilationConversion vna_to_dilation(const TracialStrategy& s, const TracialStrategy& s_tilde,
                                   const VnaWitness& w, const RMatrix& nu_hat) {
  require_factor(s, "vna_to_dilation");
  require_factor(s_tilde, "vna_to_dilation");
  w.validate();
  const std::size_t n = s.algebra.blocks[0].dim;
  const std::size_t m = w.dim_m;
  const std::size_t k = w.dim_m0;
  const std::size_t corner = m * k;
  const RVector nu_hat_a = nu_hat.rowwise().sum();

  DilationConversion out;
  out.input_eps = vna_residuals(s, s_tilde, w, nu_hat_a).max();

  const CMatrix j = ambient_corner_injection(corner, w.ambient_dim());
  const CMatrix w_n = w.embed.adjoint() * w.w * j;  // n x (m k)

  // Pad W^* to an isometry with canonical fresh slots.
  const CMatrix p1 = hermitize(CMatrix::Identity(n, n) - w_n * w_n.adjoint());
  const HermEig p1_eig = herm_eig(p1);
  std::size_t r1 = 0;
  for (Eigen::Index i = 0; i < p1_eig.eigenvalues.size(); ++i)
    if (p1_eig.eigenvalues(i) > 0.5) ++r1;
  const std::size_t k1 = r1 == 0 ? 0 : (r1 + m - 1) / m;
  const std::size_t k_total = k + k1;

  CMatrix v = CMatrix::Zero(m * k_total, n);
  for (std::size_t alpha = 0; alpha < m; ++alpha)
    for (std::size_t i = 0; i < k; ++i)
      v.row(alpha * k_total + i) = w_n.adjoint().row(alpha * k + i);
  for (std::size_t idx = 0; idx < r1; ++idx) {
    const std::size_t alpha = idx / k1;
    const std::size_t i1 = idx % k1;
    v.row(alpha * k_total + k + i1) = p1_eig.eigenvectors.col(idx).adjoint();
  }

  // Both GNS implementations of the compression functional have the same
  // coefficient matrix V V^* / sqrt(mk) in this representation, so the
  // matching unitary on Bob's side is the identity.
  DilationWitness witness;
  witness.v_a = v;
  witness.v_b = v.conjugate();
  witness.dim_ka = k_total;
  witness.dim_kb = k_total;
  CVector aux = CVector::Zero(k_total * k_total);
  for (std::size_t i = 0; i < k; ++i)
    aux(i * k_total + i) = 1.0 / std::sqrt(static_cast<double>(k));
  witness.aux = aux;
  witness.nu_hat = nu_hat;

  out.witness = witness;
  out.certified = (4.0 + std::sqrt(2.0)) * std::sqrt(out.input_eps);
  out.measured = dilation_residuals(gns_realize(s), gns_realize(s_tilde), witness);
  return out;
}

TopEigenspace top_eigenspace_closeness(const CMatrix& t, const CVector& psi_embedded,
                                       const CVector& psi_tilde, std::size_t dim_ta,
                                       std::size_t dim_tb, std::size_t dim_ka,
                                       std::size_t dim_kb) {
  const HermEig eig = herm_eig(t);
  const double alpha = spectral_gap(eig.eigenvalues, max_abs(t));
  if (alpha <= 0.0) throw std::invalid_argument("top_eigenspace_closeness: degenerate top eigenspace");
  if (std::abs(eig.eigenvalues(0) - 1.0) > 1e-8)
    throw std::invalid_argument("top_eigenspace_closeness: top eigenvalue is not 1");
  if ((t * psi_tilde - psi_tilde).norm() > 1e-8)
    throw std::invalid_argument("top_eigenspace_closeness: psi_tilde is not the top eigenvector");

  // reorder to (H~_A, H~_B, K_A, K_B)
  const CVector grouped =
      permute_factors(psi_embedded, {dim_ta, dim_ka, dim_tb, dim_kb}, {0, 2, 1, 3});
  const CMatrix mat = as_matrix(grouped, dim_ta * dim_tb, dim_ka * dim_kb);

  TopEigenspace out;
  out.omega = (mat.adjoint() * t * mat).trace().real();
  out.bound = std::sqrt(std::max(0.0, 1.0 - out.omega) / alpha);
  const CVector aux_raw = mat.adjoint() * psi_tilde.conjugate();
  // <psi~| contracted against the first factor: aux component of P psi
  CVector aux = CVector::Zero(dim_ka * dim_kb);
  for (std::size_t kk = 0; kk < static_cast<std::size_t>(aux.size()); ++kk) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < dim_ta * dim_tb; ++i) acc += std::conj(psi_tilde(i)) * mat(i, kk);
    aux(kk) = acc;
  }
  const double aux_norm = aux.norm();
  out.leak = std::sqrt(std::max(0.0, 1.0 - aux_norm * aux_norm));
  if (aux_norm > 1e-12) aux /= aux_norm;
  out.aux_state = aux;
  const CVector reassembled = dilation_target(psi_tilde, dim_ta, dim_tb, aux, dim_ka, dim_kb);
  out.closeness = (psi_embedded - reassembled).norm();
  return out;
}

SpecGapWitness spec_gap_witness(const CMatrix& t, double /*degeneracy_scale*/) {
  const HermEig eig = herm_eig(t);
  const double gap = spectral_gap(eig.eigenvalues, max_abs(t));
  if (gap <= 0.0) throw std::invalid_argument("spec_gap_witness: degenerate gap");
  const std::size_t total = t.rows();
  const std::size_t n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(total))));
  if (n * n != total) throw std::invalid_argument("spec_gap_witness: space is not bipartite square");

  const CVector psi0 = eig.eigenvectors.col(0);
  const RVector coeffs = schmidt_coefficients(psi0, n, n);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    if (std::abs(coeffs(i) - 1.0 / std::sqrt(static_cast<double>(n))) > 1e-8)
      throw std::invalid_argument("spec_gap_witness: top eigenvector is not maximally entangled");
  const CVector psi1 = eig.eigenvectors.col(1);

  // the optimal phase maximises ||e^{i theta} S + h.c.||_2^2 = 2 + 2|tr(S^2)|
  const SchmidtDecomp sd0 = schmidt(psi0, n, n);
  const CMatrix m1 = as_matrix(psi1, n, n);
  const CMatrix s_frame = sd0.left_vectors.adjoint() * m1 * sd0.right_vectors.conjugate();
  const Complex tr_s2 = (s_frame * s_frame).trace();
  const double theta_star = std::abs(tr_s2) > 0 ? -0.5 * std::arg(tr_s2) : 0.0;

  std::vector<double> phases = {theta_star, theta_star + M_PI, 0.0, M_PI};
  for (int j = 0; j < 16; ++j) phases.push_back(2.0 * M_PI * j / 16.0);

  SpecGapWitness out;
  out.gap = gap;
  out.lower_bound = 1.0 / (16.0 + 12.0 * std::sqrt(2.0));
  const CMatrix id_over_n = CMatrix::Identity(n, n) / static_cast<double>(n);
  for (double theta : phases) {
    const CVector psi = (psi0 + std::polar(1.0, theta) * psi1) / std::sqrt(2.0);
    const CMatrix mat = as_matrix(psi, n, n);
    const CMatrix rho = mat * mat.adjoint();
    out.deviation = std::max(out.deviation, trace_norm(id_over_n - rho));
  }
  out.omega = 0.5 * (eig.eigenvalues(0) + eig.eigenvalues(1));
  return out;
}

double kappa_prime(const std::function<double(double)>& kappa, double eps, double delta,
                   double c) {
  return kappa(24.0 * std::sqrt(delta) + eps) + 9.0 * c * delta;
}

}  // namespace qself
