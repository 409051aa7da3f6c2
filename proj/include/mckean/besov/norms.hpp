#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "mckean/besov/littlewood_paley.hpp"
#include "mckean/errors.hpp"

namespace mckean::besov {

struct BesovProfile {
  double gamma = 0.0;
  std::vector<std::pair<int, double>> per_block;  // (j, 2^{jγ} sup|Δ_j f|)
  double norm = 0.0;
};

inline constexpr double kMinGamma = -2.0;
inline constexpr double kMaxGamma = 2.0;

inline void require_supported_gamma(double gamma) {
  if (!(gamma >= kMinGamma && gamma <= kMaxGamma))
    throw DomainError("Besov exponent must lie in [-2, 2], got " + std::to_string(gamma));
}

/// Weights raw block sups (index j + 1) by 2^{jγ}.
inline BesovProfile profile_from_sups(const std::vector<double>& sups, double gamma) {
  require_supported_gamma(gamma);
  BesovProfile p;
  p.gamma = gamma;
  for (std::size_t i = 0; i < sups.size(); ++i) {
    const int j = static_cast<int>(i) - 1;
    const double v = std::exp2(j * gamma) * sups[i];
    p.per_block.emplace_back(j, v);
    p.norm = std::max(p.norm, v);
  }
  return p;
}

inline BesovProfile besov_norm(const SpectralField& f, double gamma) {
  require_supported_gamma(gamma);
  return profile_from_sups(block_sups(f), gamma);
}

inline double besov(const SpectralField& f, double gamma) { return besov_norm(f, gamma).norm; }

/// ‖f‖_∞ + sup over node pairs at periodic distance in (0, 1) of
/// |f(x) - f(y)| / |x - y|^γ, maximized over components. O(N^{2d}).
inline double holder_norm(const SpectralField& f, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("Hölder exponent must lie in (0, 1)");
  const Grid& g = f.grid();
  const std::size_t n = g.size();
  const double h = g.spacing();
  const int np = g.points();
  auto wrapped = [&](int a, int b) {
    const int k = std::abs(a - b);
    return std::min(k, np - k) * h;
  };
  double quotient = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.values(c);
    for (std::size_t p = 0; p < n; ++p) {
      int ip[2];
      g.unflatten(p, ip);
      for (std::size_t q = p + 1; q < n; ++q) {
        int iq[2];
        g.unflatten(q, iq);
        double dist2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
          const double da = wrapped(ip[a], iq[a]);
          dist2 += da * da;
        }
        if (dist2 >= 1.0) continue;
        quotient = std::max(quotient, std::abs(v[p] - v[q]) / std::pow(dist2, 0.5 * gamma));
      }
    }
  }
  return f.sup_norm() + quotient;
}

} // namespace mckean::besov
