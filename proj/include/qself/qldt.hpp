#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qself/game.hpp"
#include "qself/linalg.hpp"

namespace qself {

// Word of bits packed into 64-bit blocks.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t nbits);

  std::size_t size() const { return nbits_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  void set(std::size_t i, bool v);
  void xor_with(const BitRow& other);
  std::size_t weight() const;
  bool any() const;
  // parity of the AND with another row (inner product over F2)
  bool dot(const BitRow& other) const;

  bool operator==(const BitRow& other) const {
    return nbits_ == other.nbits_ && words_ == other.words_;
  }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

// Binary linear code given by k generator rows of length n; rows must be
// linearly independent over F2. Generator convention follows the k x n
// indexing E_{ij}, i in [k], j in [n], with S_X = columns of E.
struct CodeF2 {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<BitRow> rows;

  void validate() const;  // throws when rows are dependent or sizes are off
  BitRow column(std::size_t j) const;  // (E_{ij})_{i=1..k} as a k-bit row
};

CodeF2 make_code(const std::vector<std::string>& row_strings);
CodeF2 make_code(std::size_t k, std::size_t n, const std::vector<std::vector<int>>& bits);

std::size_t f2_rank(std::vector<BitRow> rows);

// Minimum Hamming weight over the 2^k - 1 nonzero codewords (Gray-code
// enumeration); k <= 24.
struct CodeDistance {
  std::size_t d = 0;
  double d_rel = 0.0;
};
CodeDistance code_distance(const CodeF2& code);

// physical = logical * E over F2
BitRow encode(const CodeF2& code, const BitRow& logical);

enum class PauliKind { X, Z };

struct PauliWord {
  PauliKind kind = PauliKind::X;
  std::size_t qubits = 0;
  BitRow mask;
};

// Dense 2^k matrix of the tensor word; k <= 12.
CMatrix pauli_word(const PauliWord& w);

// T = 1/2 + (1/4n) * sum_{W in {X,Z}} sum_j sigma^W(col_j) (x) sigma^W(col_j)
// on 4^k dimensions; k <= 6.
CMatrix qldt_polynomial(const CodeF2& code);

// <psi_ab| T |psi_ab> = 1 - (w(enc(a)) + w(enc(b))) / (2n)
double bell_eigenvalue(const CodeF2& code, const BitRow& a, const BitRow& b);

// Bell-frame vector |psi_ab> on C^{2^k} (x) C^{2^k}.
CVector bell_state(const BitRow& a, const BitRow& b);

enum class GapMethod { Fast, Dense, Bell };

// Spectral gap of the game polynomial: d_rel / 2. Fast path enumerates
// codeword weights, dense path diagonalises, bell path scans the Bell frame.
double qldt_gap(const CodeF2& code, GapMethod method);

struct QubitTestReport {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t distance = 0;
  double d_rel = 0.0;
  double gap = 0.0;
  bool sx_spans = false;      // columns of E span F2^k
  double beta = 0.0;
  double nu_prime_pair_weight = 0.0;  // 1/2 * 1/2 * 1/n per ordered question pair
  double renormalisation_c = 4.0;     // nu'_qldt <= 4 nu_qldt
};
QubitTestReport qubit_test_report(const CodeF2& code, double beta);

// Binary Reed-Muller-style code with parameters (t, m, d): evaluations of
// Tr(lambda * b_s * x^e) over F_{2^t}^m, concatenated over lambda. Yields an
// [2^{t(m+1)}, t(d+1)^m] code with distance >= (1/2)(1 - md/2^t) 2^{t(m+1)}.
// Requires m*d < 2^t so the rows stay independent.
CodeF2 reed_muller_code(std::size_t t, std::size_t m, std::size_t d);

}  // namespace qself
