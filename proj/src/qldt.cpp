#include "qself/qldt.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qself {

BitRow::BitRow(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

void BitRow::set(std::size_t i, bool v) {
  if (v)
    words_[i >> 6] |= 1ULL << (i & 63);
  else
    words_[i >> 6] &= ~(1ULL << (i & 63));
}

void BitRow::xor_with(const BitRow& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
}

std::size_t BitRow::weight() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

bool BitRow::any() const {
  for (std::uint64_t w : words_)
    if (w) return true;
  return false;
}

bool BitRow::dot(const BitRow& other) const {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w)
    acc ^= std::popcount(words_[w] & other.words_[w]) & 1ULL;
  return acc & 1ULL;
}

std::size_t f2_rank(std::vector<BitRow> rows) {
  if (rows.empty()) return 0;
  const std::size_t n = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot].get(col)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r].get(col)) rows[r].xor_with(rows[rank]);
    ++rank;
  }
  return rank;
}

void CodeF2::validate() const {
  if (k == 0 || n == 0 || k > n) throw std::invalid_argument("code: need 1 <= k <= n");
  if (rows.size() != k) throw std::invalid_argument("code: row count mismatch");
  for (const BitRow& r : rows)
    if (r.size() != n) throw std::invalid_argument("code: row length mismatch");
  if (f2_rank(rows) != k) throw std::invalid_argument("code: generator rows are dependent");
}

BitRow CodeF2::column(std::size_t j) const {
  BitRow col(k);
  for (std::size_t i = 0; i < k; ++i) col.set(i, rows[i].get(j));
  return col;
}

CodeF2 make_code(const std::vector<std::string>& row_strings) {
  CodeF2 code;
  code.k = row_strings.size();
  code.n = code.k > 0 ? row_strings[0].size() : 0;
  for (const std::string& s : row_strings) {
    BitRow row(code.n);
    if (s.size() != code.n) throw std::invalid_argument("code: ragged rows");
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] != '0' && s[j] != '1') throw std::invalid_argument("code: rows must be 0/1");
      row.set(j, s[j] == '1');
    }
    code.rows.push_back(std::move(row));
  }
  code.validate();
  return code;
}

CodeF2 make_code(std::size_t k, std::size_t n, const std::vector<std::vector<int>>& bits) {
  CodeF2 code;
  code.k = k;
  code.n = n;
  for (const auto& r : bits) {
    BitRow row(n);
    if (r.size() != n) throw std::invalid_argument("code: ragged rows");
    for (std::size_t j = 0; j < n; ++j) row.set(j, r[j] != 0);
    code.rows.push_back(std::move(row));
  }
  code.validate();
  return code;
}

CodeDistance code_distance(const CodeF2& code) {
  if (code.k > 24) throw std::invalid_argument("code_distance: k exceeds enumeration budget");
  code.validate();
  // Gray-code walk over nonzero logical words: each step flips one generator.
  BitRow acc(code.n);
  std::size_t best = code.n + 1;
  const std::uint64_t total = 1ULL << code.k;
  std::uint64_t gray = 0;
  for (std::uint64_t i = 1; i < total; ++i) {
    const std::uint64_t next = i ^ (i >> 1);
    const std::uint64_t flipped = gray ^ next;
    acc.xor_with(code.rows[std::countr_zero(flipped)]);
    gray = next;
    best = std::min(best, acc.weight());
  }
  CodeDistance out;
  out.d = best;
  out.d_rel = static_cast<double>(best) / static_cast<double>(code.n);
  return out;
}

BitRow encode(const CodeF2& code, const BitRow& logical) {
  if (logical.size() != code.k) throw std::invalid_argument("encode: length mismatch");
  BitRow out(code.n);
  for (std::size_t i = 0; i < code.k; ++i)
    if (logical.get(i)) out.xor_with(code.rows[i]);
  return out;
}

CMatrix pauli_word(const PauliWord& w) {
  if (w.qubits > 12) throw std::invalid_argument("pauli_word: k exceeds dense budget");
  if (w.mask.size() != w.qubits) throw std::invalid_argument("pauli_word: mask length mismatch");
  const std::size_t d = 1ULL << w.qubits;
  // qubit j (1-based in the tensor order) maps to bit (k - j) of the index
  std::uint64_t mask_int = 0;
  for (std::size_t j = 0; j < w.qubits; ++j)
    if (w.mask.get(j)) mask_int |= 1ULL << (w.qubits - 1 - j);
  CMatrix out = CMatrix::Zero(d, d);
  if (w.kind == PauliKind::X) {
    for (std::size_t i = 0; i < d; ++i) out(i ^ mask_int, i) = 1.0;
  } else {
    for (std::size_t i = 0; i < d; ++i)
      out(i, i) = (std::popcount(i & mask_int) & 1) ? -1.0 : 1.0;
  }
  return out;
}

CMatrix qldt_polynomial(const CodeF2& code) {
  if (code.k > 6) throw std::invalid_argument("qldt_polynomial: k exceeds dense budget");
  code.validate();
  const std::size_t d = 1ULL << code.k;
  CMatrix t = 0.5 * CMatrix::Identity(d * d, d * d);
  const double scale = 1.0 / (4.0 * static_cast<double>(code.n));
  for (std::size_t j = 0; j < code.n; ++j) {
    const BitRow col = code.column(j);
    for (PauliKind kind : {PauliKind::X, PauliKind::Z}) {
      const CMatrix sigma = pauli_word({kind, code.k, col});
      t += scale * kron(sigma, sigma);
    }
  }
  return hermitize(t);
}

double bell_eigenvalue(const CodeF2& code, const BitRow& a, const BitRow& b) {
  const double wa = static_cast<double>(encode(code, a).weight());
  const double wb = static_cast<double>(encode(code, b).weight());
  return 1.0 - (wa + wb) / (2.0 * static_cast<double>(code.n));
}

CVector bell_state(const BitRow& a, const BitRow& b) {
  const std::size_t k = a.size();
  const std::size_t d = 1ULL << k;
  CVector psi = CVector::Zero(d * d);
  // product over qubit factors of (|0 a_j> + (-1)^{b_j} |1 (1-a_j)>)/sqrt(2)
  const double norm = std::pow(2.0, -0.5 * static_cast<double>(k));
  for (std::size_t ia = 0; ia < d; ++ia) {
    double amp = norm;
    std::size_t ib = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const bool bit_a = (ia >> (k - 1 - j)) & 1;  // qubit j of Alice's index
      const bool aj = a.get(j);
      const bool bj = b.get(j);
      const bool bob_bit = bit_a ? !aj : aj;
      if (bit_a && bj) amp = -amp;
      ib |= static_cast<std::size_t>(bob_bit) << (k - 1 - j);
    }
    psi(ia * d + ib) = amp;
  }
  return psi;
}

double qldt_gap(const CodeF2& code, GapMethod method) {
  switch (method) {
    case GapMethod::Fast: {
      const CodeDistance dist = code_distance(code);
      return dist.d_rel / 2.0;
    }
    case GapMethod::Dense:
      return spectral_gap(qldt_polynomial(code));
    case GapMethod::Bell: {
      if (code.k > 12) throw std::invalid_argument("qldt_gap: k exceeds bell budget");
      // second largest of 1 - (w(a)+w(b))/(2n) over pairs: minimise w over
      // nonzero words, the other word zero
      double second = -1.0;
      const std::uint64_t total = 1ULL << code.k;
      for (std::uint64_t ia = 0; ia < total; ++ia) {
        BitRow a(code.k);
        for (std::size_t i = 0; i < code.k; ++i) a.set(i, (ia >> i) & 1);
        for (std::uint64_t ibz = 0; ibz < 2; ++ibz) {
          // scanning all 4^k pairs is wasteful; (a,0) and (0,a) realise every
          // attainable second-largest value
          if (ia == 0) continue;
          const BitRow zero(code.k);
          const double val = ibz == 0 ? bell_eigenvalue(code, a, zero)
                                      : bell_eigenvalue(code, zero, a);
          second = std::max(second, val);
        }
      }
      return 1.0 - second;
    }
  }
  throw std::invalid_argument("qldt_gap: unknown method");
}

QubitTestReport qubit_test_report(const CodeF2& code, double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("qubit_test_report: beta must lie in (0,1)");
  code.validate();
  QubitTestReport rep;
  rep.k = code.k;
  rep.n = code.n;
  const CodeDistance dist = code_distance(code);
  rep.distance = dist.d;
  rep.d_rel = dist.d_rel;
  rep.gap = dist.d_rel / 2.0;
  std::vector<BitRow> cols;
  for (std::size_t j = 0; j < code.n; ++j) cols.push_back(code.column(j));
  rep.sx_spans = f2_rank(cols) == code.k;
  rep.beta = beta;
  rep.nu_prime_pair_weight = 0.25 / static_cast<double>(code.n);
  rep.renormalisation_c = 4.0;
  return rep;
}

namespace {

// F_{2^t} arithmetic in a polynomial basis with a fixed irreducible modulus.
struct GF2t {
  std::size_t t;
  std::uint32_t modulus;  // top bit implicit

  explicit GF2t(std::size_t t_) : t(t_) {
    switch (t_) {
      case 1: modulus = 0b0; break;          // x + ... (trivial)
      case 2: modulus = 0b11; break;         // x^2 + x + 1
      case 3: modulus = 0b011; break;        // x^3 + x + 1
      case 4: modulus = 0b0011; break;       // x^4 + x + 1
      default: throw std::invalid_argument("reed_muller_code: t must be 1..4");
    }
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < t; ++i)
      if ((b >> i) & 1) acc ^= a << i;
    for (std::size_t i = 2 * t; i-- > t;)
      if ((acc >> i) & 1) acc ^= (modulus << (i - t)) | (1u << i);
    return acc & ((1u << t) - 1);
  }

  std::uint32_t pow(std::uint32_t a, std::size_t e) const {
    std::uint32_t acc = 1;
    for (std::size_t i = 0; i < e; ++i) acc = mul(acc, a);
    return acc;
  }

  bool trace(std::uint32_t a) const {
    std::uint32_t acc = 0;
    std::uint32_t p = a;
    for (std::size_t i = 0; i < t; ++i) {
      acc ^= p;
      p = mul(p, p);
    }
    return std::popcount(acc & 1u) & 1;  // trace lands in F2 = {0,1}
  }
};

}  // namespace

CodeF2 reed_muller_code(std::size_t t, std::size_t m, std::size_t d) {
  if (m == 0) throw std::invalid_argument("reed_muller_code: m must be positive");
  const GF2t field(t);
  const std::size_t q = 1ULL << t;
  if (m * d >= q)
    throw std::invalid_argument("reed_muller_code: requires m*d < 2^t for independent rows");
  std::size_t num_monomials = 1;
  for (std::size_t i = 0; i < m; ++i) num_monomials *= d + 1;
  const std::size_t k = t * num_monomials;
  if (k > 24) throw std::invalid_argument("reed_muller_code: k exceeds enumeration budget");
  std::size_t num_points = 1;
  for (std::size_t i = 0; i < m; ++i) num_points *= q;
  const std::size_t n = num_points * q;  // one F2 symbol per (point, lambda)

  CodeF2 code;
  code.k = k;
  code.n = n;
  for (std::size_t mono = 0; mono < num_monomials; ++mono) {
    std::vector<std::size_t> exps(m);
    std::size_t rem = mono;
    for (std::size_t i = 0; i < m; ++i) {
      exps[i] = rem % (d + 1);
      rem /= d + 1;
    }
    for (std::size_t s = 0; s < t; ++s) {
      const std::uint32_t basis = 1u << s;
      BitRow row(n);
      for (std::size_t pt = 0; pt < num_points; ++pt) {
        std::uint32_t value = basis;
        std::size_t prem = pt;
        for (std::size_t i = 0; i < m; ++i) {
          const std::uint32_t xi = prem % q;
          prem /= q;
          value = field.mul(value, field.pow(xi, exps[i]));
        }
        for (std::size_t lambda = 0; lambda < q; ++lambda)
          row.set(pt * q + lambda, field.trace(field.mul(lambda, value)));
      }
      code.rows.push_back(std::move(row));
    }
  }
  code.validate();
  return code;
}

}  // namespace qself
