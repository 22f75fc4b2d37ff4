#pragma once

#include <complex>
#include <cstdint>

namespace qself {

// Counter-based generator: the i-th output is a pure function of (seed, i),
// so trials can be sharded across threads without sharing state.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  double gaussian();

  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  std::uint64_t seed() const { return seed_; }

  // Independent stream for trial `index` of a suite seeded with `seed`.
  static SeededRng for_trial(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (0xD6E8FEB86659FD93ULL + index * 0xCA01F9DD51B143DFULL);
    z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ULL;
    z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ULL;
    return SeededRng(z ^ (z >> 32));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qself
