#pragma once

#include <cstdint>
#include <random>

namespace ecmlfd {

// Seeded generator with portable uniform and normal draws. The standard
// distributions are implementation-defined, so they are not used anywhere
// results must be reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal (Box-Muller, second variate cached).
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace ecmlfd
