#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "qself/rng.hpp"

namespace qself {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Shared knob for "is this eigenvalue degenerate": absolute tolerance scaled
// by max(1, ||M||_inf). Keeps the spectral-gap multiplicity rule stable
// across normalisations.
inline constexpr double kDegeneracyTol = 1e-9;

double max_abs(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = 1e-10);
CMatrix hermitize(const CMatrix& m);

struct HermEig {
  RVector eigenvalues;  // descending
  CMatrix eigenvectors; // columns, orthonormal, aligned with eigenvalues
};

// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
// Throws std::invalid_argument on non-square or non-Hermitian input.
HermEig herm_eig(const CMatrix& m, double herm_tol = 1e-10);

struct SchmidtDecomp {
  RVector coefficients;  // nonnegative, descending
  CMatrix left_vectors;  // dimA x r, orthonormal columns
  CMatrix right_vectors; // dimB x r, orthonormal columns
};

// Schmidt decomposition of psi on C^dimA (x) C^dimB, row-major composite
// index (i_A * dimB + i_B).
SchmidtDecomp schmidt(const CVector& psi, std::size_t dim_a, std::size_t dim_b);

// Schmidt coefficients only (descending, padded with zeros to min(dA,dB)).
RVector schmidt_coefficients(const CVector& psi, std::size_t dim_a, std::size_t dim_b);

// Takagi factorisation of a complex symmetric matrix: M = U diag(c) U^T with
// c >= 0 descending and U unitary. This is the Schmidt decomposition of a
// symmetric bipartite state in matrix form.
struct Takagi {
  RVector coefficients;
  CMatrix basis;  // unitary U
};
Takagi takagi(const CMatrix& m, double sym_tol = 1e-9);

struct PolarDecomp {
  CMatrix isometry;  // W, partial isometry with ker W = ker A
  CMatrix positive;  // |A|
};

// A = W |A| with ker(W) = ker(A); total on rectangular inputs.
PolarDecomp polar(const CMatrix& a, double rank_tol = 1e-10);

// p in {1, 2, inf}: trace norm, Frobenius norm, largest singular value.
// Throws std::invalid_argument for other p.
double schatten_norm(const CMatrix& a, double p);

double trace_norm(const CMatrix& a);
double operator_norm(const CMatrix& a);

enum class Side { A, B };

// Partial trace of a (dA*dB)-dimensional operator, row-major composite index.
// side selects the factor that is traced *out*.
CMatrix partial_trace(const CMatrix& m, std::size_t dim_a, std::size_t dim_b, Side traced_out);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron_vec(const CVector& a, const CVector& b);

// Reshape psi on C^dA (x) C^dB into the dA x dB coefficient matrix.
CMatrix as_matrix(const CVector& psi, std::size_t dim_a, std::size_t dim_b);
CVector as_vector(const CMatrix& m);

// <psi| X (x) Y |psi> evaluated as tr(M^* X M Y^T); O(d^3) instead of O(d^4).
Complex sandwich(const CMatrix& psi_mat, const CMatrix& x, const CMatrix& y);

// Reorder the tensor factors of a vector: dims[i] is the dimension of factor
// i, perm[j] = index of the old factor that lands in slot j.
CVector permute_factors(const CVector& v, const std::vector<std::size_t>& dims,
                        const std::vector<std::size_t>& perm);

// Hermitian PSD square root.
CMatrix sqrt_psd(const CMatrix& m);

CMatrix identity(std::size_t d);

// --- seeded random instances -------------------------------------------------

CMatrix ginibre(SeededRng& rng, std::size_t rows, std::size_t cols);
CMatrix gue(SeededRng& rng, std::size_t d);               // Hermitian, Gaussian ensemble
CMatrix haar_unitary(SeededRng& rng, std::size_t d);
CVector haar_state(SeededRng& rng, std::size_t d);
CMatrix haar_isometry(SeededRng& rng, std::size_t from, std::size_t to);

// POVM with `outcomes` outcomes on C^d: positive to -1e-12 and complete to
// 1e-10 by construction; a single outcome yields {Id}.
std::vector<CMatrix> random_povm(SeededRng& rng, std::size_t d, std::size_t outcomes);

// Exact PVM from a Haar basis with a uniformly random outcome assignment
// (empty outcomes allowed).
std::vector<CMatrix> random_pvm(SeededRng& rng, std::size_t d, std::size_t outcomes);

// POVM within operator-norm distance O(eta) of an exact PVM; eta = 0 gives
// the PVM itself.
std::vector<CMatrix> perturbed_pvm(SeededRng& rng, std::size_t d, std::size_t outcomes,
                                   double eta);

}  // namespace qself
