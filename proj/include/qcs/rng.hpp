#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qcs {

/// splitmix64 finalizer; used to derive independent trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of trial `trial` at sweep point `budget` under `base_seed`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t budget, std::uint64_t trial);

/// mt19937_64 plus explicit transforms. std:: distributions are avoided
/// because their output is implementation-defined; everything here is
/// reproducible from the seed on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();
  /// k distinct indices from [0, n), uniformly, in increasing order.
  std::vector<int> choose(int n, int k);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace qcs
