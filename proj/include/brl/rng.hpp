#ifndef BRL_RNG_HPP_
#define BRL_RNG_HPP_

#include <cstdint>

namespace brl {

/// Deterministic pseudo-random generator: xoshiro256++ seeded via splitmix64.
///
/// Identical seeds produce identical sequences on every platform; the
/// generator core uses only 64-bit integer arithmetic with the reference
/// constants of the algorithm. Gaussian variates use the polar method.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal variate (polar method, internally cached pair).
  double normal();

  /// Unbiased uniform integer in [0, n). n must be >= 1.
  std::uint64_t uniform_u64(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }

  /// Deterministically derives an independent seed for a named substream.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4];
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace brl

#endif  // BRL_RNG_HPP_
