#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "mckean/spectral/field.hpp"

namespace mckean::particles {

/// Periodic four-point (cubic Lagrange) interpolation of one component of a
/// grid field; tensor product in d = 2. Exact for cubic polynomials on each
/// stencil.
class PeriodicCubic {
public:
  explicit PeriodicCubic(const spectral::SpectralField& f, int component = 0)
      : grid_(f.grid()), values_(f.values(component).begin(), f.values(component).end()) {}

  PeriodicCubic(const spectral::Grid& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {}

  double operator()(std::span<const double> x) const {
    const int n = grid_.points();
    int base[2];
    double w[2][4];
    for (int a = 0; a < grid_.dim(); ++a) {
      const double u = x[a] / grid_.spacing();
      const double fl = std::floor(u);
      const double s = u - fl;
      base[a] = static_cast<int>(fl) - 1;
      w[a][0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
      w[a][1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
      w[a][2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
      w[a][3] = (s + 1.0) * s * (s - 1.0) / 6.0;
    }
    auto wrapi = [n](int i) { return ((i % n) + n) % n; };
    if (grid_.dim() == 1) {
      double r = 0.0;
      for (int p = 0; p < 4; ++p) r += w[0][p] * values_[wrapi(base[0] + p)];
      return r;
    }
    double r = 0.0;
    for (int p = 0; p < 4; ++p) {
      const std::size_t row = static_cast<std::size_t>(wrapi(base[0] + p)) * n;
      double s = 0.0;
      for (int q = 0; q < 4; ++q) s += w[1][q] * values_[row + wrapi(base[1] + q)];
      r += w[0][p] * s;
    }
    return r;
  }

private:
  spectral::Grid grid_;
  std::vector<double> values_;
};

} // namespace mckean::particles
