#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "mckean/errors.hpp"
#include "mckean/spectral/field.hpp"
#include "mckean/util/rng.hpp"

namespace mckean::particles {

using spectral::Grid;
using spectral::SpectralField;

/// Stream tags of the counter RNG.
inline constexpr std::uint64_t kNoiseStream = 1;
inline constexpr std::uint64_t kInitialStream = 2;

inline double wrap(double x, double length) {
  double y = std::fmod(x, length);
  if (y < 0.0) y += length;
  return y >= length ? 0.0 : y;
}

/// N points on the torus [0, L)^d, particle-major. The noise of step s for
/// particle i is a pure function of (seed, i, s).
struct ParticleEnsemble {
  Grid grid;
  std::vector<double> positions;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;

  int dim() const noexcept { return grid.dim(); }
  std::size_t size() const noexcept { return positions.size() / static_cast<std::size_t>(grid.dim()); }
  std::span<const double> position(std::size_t i) const {
    return std::span<const double>(positions).subspan(i * grid.dim(), grid.dim());
  }
};

struct EnsembleTrajectory {
  std::vector<ParticleEnsemble> snapshots;
  double dt = 0.0;

  const ParticleEnsemble& at(double t) const {
    for (const auto& s : snapshots)
      if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
    throw UsageError("no snapshot at the requested time");
  }
};

/// Draws N positions from a nonnegative density on the grid: inverse CDF of
/// the piecewise-linear interpolant (d = 1) or rejection from the bilinear
/// interpolant under uniform proposals (d = 2).
inline ParticleEnsemble sample_initial(const SpectralField& density, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("ensemble needs at least one particle");
  if (density.components() != 1) throw UsageError("density must be scalar");
  const Grid& g = density.grid();
  auto vals = density.values();
  for (double x : vals)
    if (x < 0.0) throw DomainError("sampling density must be nonnegative");
  const util::CounterRng rng(seed);
  ParticleEnsemble e{g, std::vector<double>(n * g.dim()), 0.0, seed, 0};
  const int np = g.points();
  const double dx = g.spacing();
  if (g.dim() == 1) {
    std::vector<double> cdf(np + 1, 0.0);
    for (int i = 0; i < np; ++i) cdf[i + 1] = cdf[i] + 0.5 * dx * (vals[i] + vals[(i + 1) % np]);
    const double total = cdf.back();
    if (!(total > 0.0)) throw DomainError("sampling density has zero mass");
    for (std::size_t p = 0; p < n; ++p) {
      const double u = rng.uniform(p, 0, kInitialStream) * total;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const int i = std::clamp(static_cast<int>(it - cdf.begin()) - 1, 0, np - 1);
      const double a = vals[i], b = vals[(i + 1) % np], r = u - cdf[i];
      // Solve a·s + (b − a)s²/(2dx) = r for s ∈ [0, dx].
      double s;
      const double q = (b - a) / (2.0 * dx);
      if (std::abs(q) * dx < 1e-12 * std::max(a, 1e-300))
        s = a > 0.0 ? r / a : 0.5 * dx;
      else
        s = 2.0 * r / (a + std::sqrt(std::max(0.0, a * a + 4.0 * q * r)));
      e.positions[p] = wrap(i * dx + std::clamp(s, 0.0, dx), g.length());
    }
  } else {
    const double vmax = *std::max_element(vals.begin(), vals.end());
    if (!(vmax > 0.0)) throw DomainError("sampling density has zero mass");
    auto at = [&](int i, int j) { return vals[static_cast<std::size_t>((i % np + np) % np) * np + (j % np + np) % np]; };
    for (std::size_t p = 0; p < n; ++p) {
      for (std::uint64_t attempt = 0;; ++attempt) {
        const double x = rng.uniform(p, attempt, kInitialStream, 0) * g.length();
        const double y = rng.uniform(p, attempt, kInitialStream, 1) * g.length();
        const int i = static_cast<int>(x / dx), j = static_cast<int>(y / dx);
        const double sx = x / dx - i, sy = y / dx - j;
        const double f = (1 - sx) * (1 - sy) * at(i, j) + sx * (1 - sy) * at(i + 1, j) + (1 - sx) * sy * at(i, j + 1) +
                         sx * sy * at(i + 1, j + 1);
        if (rng.uniform(p, attempt, kInitialStream, 2) * vmax <= f) {
          e.positions[2 * p] = wrap(x, g.length());
          e.positions[2 * p + 1] = wrap(y, g.length());
          break;
        }
      }
    }
  }
  return e;
}

/// Sample mean and variance per axis (unwrapped coordinates).
inline std::pair<double, double> axis_moments(const ParticleEnsemble& e, int axis) {
  const std::size_t n = e.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m += e.positions[i * e.dim() + axis];
  m /= static_cast<double>(n);
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = e.positions[i * e.dim() + axis] - m;
    v += d * d;
  }
  return {m, n > 1 ? v / static_cast<double>(n - 1) : 0.0};
}

} // namespace mckean::particles
