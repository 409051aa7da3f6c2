#pragma once

// Shared helpers for the test suites: analytic fields and brute-force oracles
// that do not go through the spectral machinery under test.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mckean/spectral/field.hpp"

namespace mckean::testing {

using spectral::Grid;
using spectral::SpectralField;

/// Periodized Gaussian density with variance `var` centred at `center`,
/// evaluated by direct image summation.
inline double wrapped_gaussian_1d(double x, double center, double var, double length) {
  double s = 0.0;
  const int images = 2 + static_cast<int>(std::ceil(8.0 * std::sqrt(var) / length));
  for (int p = -images; p <= images; ++p) {
    const double z = x - center + p * length;
    s += std::exp(-z * z / (2.0 * var));
  }
  return s / std::sqrt(2.0 * std::numbers::pi * var);
}

inline SpectralField wrapped_gaussian(const Grid& g, double center, double var) {
  return SpectralField::sample(g, 1, [&](std::span<const double> x, int) {
    double v = 1.0;
    for (double xa : x) v *= wrapped_gaussian_1d(xa, center, var, g.length());
    return v;
  });
}

/// Random trigonometric polynomial with integer wavenumbers |k_a| <= kmax.
inline SpectralField random_trig_field(const Grid& g, int comps, unsigned seed, int kmax) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  struct Term {
    int k0, k1;
    double a, b;
  };
  std::vector<std::vector<Term>> terms(comps);
  for (int c = 0; c < comps; ++c)
    for (int k0 = 0; k0 <= kmax; ++k0)
      for (int k1 = (g.dim() == 1 ? 0 : -kmax); k1 <= (g.dim() == 1 ? 0 : kmax); ++k1)
        terms[c].push_back({k0, k1, normal(rng), normal(rng)});
  const double w = g.base_frequency();
  return SpectralField::sample(g, comps, [&](std::span<const double> x, int c) {
    double v = 0.0;
    for (const auto& t : terms[c]) {
      const double phase = w * (t.k0 * x[0] + (g.dim() == 2 ? t.k1 * x[1] : 0.0));
      v += t.a * std::cos(phase) + t.b * std::sin(phase);
    }
    return v;
  });
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

} // namespace mckean::testing
