#pragma once

#include <cstdint>

namespace rsg {

/// Counter-based Gaussian generator. Every draw is addressed by
/// (seed, path, step, component), so results do not depend on the order
/// in which paths are simulated or on the number of worker threads.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Standard normal draw at the given counter address.
  double normal(std::uint64_t path, std::uint64_t step, std::uint64_t component) const;

  /// Uniform in (0,1) at the given counter address.
  double uniform(std::uint64_t path, std::uint64_t step, std::uint64_t component) const;

 private:
  std::uint64_t seed_;
};

}  // namespace rsg
