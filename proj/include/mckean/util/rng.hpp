#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace mckean::util {

/// SplitMix64 finalizer: a bijective 64-bit mix.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stateless random stream: every draw is a pure function of (seed, counters),
/// so results never depend on evaluation order or worker count.
class CounterRng {
public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : key_(splitmix64(seed ^ 0x6d636b65616e0001ULL)) {}

  constexpr std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                               std::uint64_t d = 0) const noexcept {
    std::uint64_t h = key_;
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ (b + 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ (c + 0x85157af5d3c0e6b5ULL));
    h = splitmix64(h ^ (d + 0x1d8e4e27c47d124fULL));
    return h;
  }

  /// Uniform on (0, 1), never 0 or 1.
  double uniform(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0, std::uint64_t d = 0) const noexcept {
    return (static_cast<double>(bits(a, b, c, d) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const noexcept {
    const double u1 = uniform(a, b, c, 0);
    const double u2 = uniform(a, b, c, 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

private:
  std::uint64_t key_;
};

} // namespace mckean::util
