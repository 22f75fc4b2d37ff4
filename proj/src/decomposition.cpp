#include "qself/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qself {

CMatrix SpectralScan::projection(std::size_t level) const {
  const std::size_t d = basis.rows();
  CMatrix p = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < levels[level].rank; ++i)
    p += basis.col(i) * basis.col(i).adjoint();
  return p;
}

CMatrix SpectralScan::reconstruct() const {
  const std::size_t d = basis.rows();
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < levels.size(); ++j)
    out += (levels[j].weight / static_cast<double>(levels[j].rank)) * projection(j);
  return out;
}

SpectralScan spectral_scan(const CMatrix& rho, double merge_tol) {
  if (rho.rows() != rho.cols() || !is_hermitian(rho, 1e-9))
    throw std::invalid_argument("spectral_scan: input not Hermitian");
  const HermEig eig = herm_eig(rho);
  if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -1e-10)
    throw std::invalid_argument("spectral_scan: input not positive");
  if (std::abs(eig.eigenvalues.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("spectral_scan: input does not have unit trace");

  SpectralScan scan;
  scan.basis = eig.eigenvectors;
  scan.eigenvalues = eig.eigenvalues;

  // group eigenvalues into distinct levels
  std::vector<std::pair<double, std::size_t>> groups;  // (mean value, count)
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double v = eig.eigenvalues(i);
    if (!groups.empty() && groups.back().first - v <= merge_tol) {
      auto& g = groups.back();
      g.first = (g.first * g.second + v) / static_cast<double>(g.second + 1);
      g.second += 1;
    } else {
      groups.emplace_back(v, 1);
    }
  }

  std::size_t rank = 0;
  for (std::size_t j = 0; j < groups.size(); ++j) {
    rank += groups[j].second;
    if (groups[j].first <= 1e-12) continue;
    const double next = j + 1 < groups.size() ? std::max(0.0, groups[j + 1].first) : 0.0;
    SpectralScan::Level level;
    level.threshold = groups[j].first;
    level.rank = rank;
    level.weight = (groups[j].first - next) * static_cast<double>(rank);
    scan.levels.push_back(level);
  }
  return scan;
}

namespace {

PovmFamily rotate_family(const PovmFamily& family, const CMatrix& basis) {
  PovmFamily out(family.size());
  for (std::size_t x = 0; x < family.size(); ++x)
    for (const CMatrix& op : family[x]) out[x].push_back(basis.adjoint() * op * basis);
  return out;
}

}  // namespace

MEComponents me_components(const BipartiteStrategy& s, const RMatrix& nu, Side side) {
  const PovmFamily& family = side == Side::A ? s.a : s.b;
  if (!is_pvm_family(family, 1e-9))
    throw std::invalid_argument("me_components: strategy side is not projective");
  const RVector nu_a = nu.rowwise().sum();

  MEComponents out;
  out.side = side;
  out.scan = spectral_scan(side == Side::A ? s.rho_a() : s.rho_b());
  out.delta = dsync(s, nu_a);
  out.defect_bound = std::sqrt(2.0 * out.delta);
  out.commutator_bound = 2.0 * out.defect_bound;

  out.rotated = rotate_family(family, out.scan.basis);
  const PovmFamily& rotated = out.rotated;
  out.compressed.resize(out.scan.levels.size());
  for (std::size_t j = 0; j < out.scan.levels.size(); ++j) {
    const std::size_t r = out.scan.levels[j].rank;
    PovmFamily comp(rotated.size());
    for (std::size_t x = 0; x < rotated.size(); ++x)
      for (const CMatrix& op : rotated[x]) comp[x].push_back(op.topLeftCorner(r, r));
    out.compressed[j] = std::move(comp);
  }

  for (std::size_t x = 0; x < rotated.size(); ++x) {
    if (nu_a(x) == 0.0) continue;
    double defect_x = 0.0;
    double comm_x = 0.0;
    for (const CMatrix& op : rotated[x]) {
      for (std::size_t j = 0; j < out.scan.levels.size(); ++j) {
        const std::size_t r = out.scan.levels[j].rank;
        if (r == static_cast<std::size_t>(op.rows())) continue;
        const double off = op.topRightCorner(r, op.cols() - r).squaredNorm();
        const double mu = out.scan.levels[j].weight;
        defect_x += mu * off / static_cast<double>(r);
        comm_x += mu * 2.0 * off / static_cast<double>(r);
      }
    }
    out.defect += nu_a(x) * defect_x;
    out.commutator += nu_a(x) * comm_x;
  }
  return out;
}

std::vector<double> per_level_winning(const Game& g, const MEComponents& comps) {
  std::vector<double> out;
  out.reserve(comps.compressed.size());
  for (std::size_t j = 0; j < comps.compressed.size(); ++j) {
    TracialStrategy level;
    level.algebra.blocks = {{comps.scan.levels[j].rank, 1.0}};
    for (const auto& povm : comps.compressed[j]) {
      std::vector<BlockOperator> ops;
      for (const CMatrix& op : povm) ops.push_back({hermitize(op)});
      level.a.push_back(std::move(ops));
    }
    out.push_back(winning_probability(g, level));
  }
  return out;
}

std::vector<double> per_level_commutator(const MEComponents& comps, const RVector& nu_a) {
  std::vector<double> out(comps.scan.levels.size(), 0.0);
  for (std::size_t j = 0; j < comps.scan.levels.size(); ++j) {
    const std::size_t r = comps.scan.levels[j].rank;
    double total = 0.0;
    for (std::size_t x = 0; x < comps.rotated.size(); ++x) {
      if (nu_a(x) == 0.0) continue;
      double per_x = 0.0;
      for (const CMatrix& op : comps.rotated[x]) {
        if (r == static_cast<std::size_t>(op.rows())) continue;
        per_x += 2.0 * op.topRightCorner(r, op.cols() - r).squaredNorm();
      }
      total += nu_a(x) * per_x;
    }
    out[j] = total / static_cast<double>(r);
  }
  return out;
}

LambdaFilter lambda_filter(const SpectralScan& scan, const std::vector<double>& per_level_omega,
                           const std::vector<double>& per_level_defect, double alpha, double beta,
                           double epsilon) {
  if (per_level_omega.size() != scan.levels.size() ||
      per_level_defect.size() != scan.levels.size())
    throw std::invalid_argument("lambda_filter: per-level statistics size mismatch");
  LambdaFilter out;
  const double omega_cut = 1.0 - std::sqrt(alpha) - epsilon;
  const double defect_cut = std::sqrt(beta);
  for (std::size_t j = 0; j < scan.levels.size(); ++j) {
    if (per_level_omega[j] >= omega_cut && per_level_defect[j] <= defect_cut) {
      out.members.push_back(j);
      out.measure += scan.levels[j].weight;
    }
  }
  out.lower_bound = 1.0 - std::sqrt(alpha) - std::sqrt(beta);
  return out;
}

BlockPartition block_partition(const Game& g, const BipartiteStrategy& s,
                               const SpectralScan& scan, const LambdaFilter& lambda, double beta,
                               double alpha, double epsilon) {
  if (lambda.members.empty()) throw std::invalid_argument("block_partition: empty Lambda");

  // Lambda ordered by ascending threshold (descending rank); the first entry
  // is lambda_1 = min(Lambda) with the largest subspace.
  std::vector<std::size_t> order(lambda.members);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scan.levels[a].rank > scan.levels[b].rank; });

  std::vector<std::size_t> reps;  // class representatives lambda_1, ..., lambda_k
  std::size_t pos = 0;
  while (pos < order.size()) {
    reps.push_back(order[pos]);
    const std::size_t rep_rank = scan.levels[order[pos]].rank;
    std::size_t next = pos + 1;
    while (next < order.size() && 2 * scan.levels[order[next]].rank > rep_rank) ++next;
    pos = next;
  }

  const PovmFamily rotated = [&] {
    PovmFamily out(s.a.size());
    for (std::size_t x = 0; x < s.a.size(); ++x)
      for (const CMatrix& op : s.a[x]) out[x].push_back(scan.basis.adjoint() * op * scan.basis);
    return out;
  }();
  const RVector nu_a = g.marginal_a();

  BlockPartition out;
  out.commutator_bound = (std::sqrt(2.0) + 1.0) * (std::sqrt(2.0) + 1.0) * std::sqrt(beta);
  out.dsync_bound = 0.5 * out.commutator_bound;
  out.omega_bound = 1.0 - 2.0 * epsilon - 2.0 * std::sqrt(alpha) - 6.0 * std::sqrt(beta) -
                    8.0 * std::sqrt(2.5 + std::sqrt(2.0)) * std::pow(beta, 0.25);

  const std::size_t d = scan.basis.rows();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const std::size_t hi = scan.levels[reps[i]].rank;
    const std::size_t lo = i + 1 < reps.size() ? scan.levels[reps[i + 1]].rank : 0;
    BlockPartition::Block blk;
    blk.level_begin = reps[i];
    blk.rank = hi - lo;

    CMatrix q = CMatrix::Zero(d, d);
    for (std::size_t r = lo; r < hi; ++r)
      q += scan.basis.col(r) * scan.basis.col(r).adjoint();
    blk.projection = q;

    TracialStrategy compressed;
    compressed.algebra.blocks = {{blk.rank, 1.0}};
    double comm = 0.0;
    for (std::size_t x = 0; x < rotated.size(); ++x) {
      std::vector<BlockOperator> ops;
      double comm_x = 0.0;
      for (const CMatrix& op : rotated[x]) {
        ops.push_back({hermitize(op.block(lo, lo, blk.rank, blk.rank))});
        for (std::size_t r = lo; r < hi; ++r)
          for (std::size_t c = 0; c < d; ++c)
            if (c < lo || c >= hi) comm_x += 2.0 * std::norm(op(r, c));
      }
      compressed.a.push_back(std::move(ops));
      if (nu_a(x) > 0.0) comm += nu_a(x) * comm_x;
    }
    blk.commutator = comm / static_cast<double>(blk.rank);
    blk.dsync = dsync(compressed, nu_a);
    blk.omega = winning_probability(g, compressed);
    out.blocks.push_back(std::move(blk));
  }
  return out;
}

}  // namespace qself
