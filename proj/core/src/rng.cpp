#include "rsgame/rng.hpp"

#include <cmath>
#include <numbers>

namespace rsg {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                  std::uint64_t component) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ path);
  h = splitmix64(h ^ (step << 1));
  h = splitmix64(h ^ (component << 2));
  return h;
}

// (0,1), never exactly 0 or 1
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double CounterRng::uniform(std::uint64_t path, std::uint64_t step,
                           std::uint64_t component) const {
  return to_unit(mix(seed_, path, step, component));
}

double CounterRng::normal(std::uint64_t path, std::uint64_t step,
                          std::uint64_t component) const {
  // Box-Muller on two decorrelated counter streams. Each address uses the
  // cosine branch only so that distinct components stay independent.
  const std::uint64_t a = mix(seed_, path, step, 2 * component);
  const std::uint64_t b = mix(seed_, path, step, 2 * component + 1);
  const double u1 = to_unit(a);
  const double u2 = to_unit(b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rsg
