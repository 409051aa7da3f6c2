#pragma once

#include <cmath>
#include <vector>

#include "mckean/drift/drift.hpp"

namespace mckean::drift {

/// b^n = P_{1/n} b, with the sup norms of b^n, ∇b^n and its second
/// derivatives on the grid.
struct MollifiedDrift {
  Drift base;
  int n;
  Drift smoothed;
  double sup_norm = 0.0;
  double gradient_sup = 0.0;
  double hessian_sup = 0.0;

  operator const Drift&() const noexcept { return smoothed; }
  SpectralField at(double t) const { return smoothed.at(t); }
  const SpectralField& field() const noexcept { return smoothed.field(); }
};

inline MollifiedDrift mollify(const Drift& b, int n) {
  if (n < 1) throw DomainError("mollification index n must be >= 1");
  auto f = spectral::heat_semigroup(b.field(), 1.0 / n);
  MollifiedDrift m{b, n, Drift(f, b.declared_regularity(), b.time_modulation(), b.seed())};
  m.sup_norm = f.sup_norm();
  for (int c = 0; c < f.components(); ++c) {
    auto grad = spectral::gradient(f.component(c));
    m.gradient_sup = std::max(m.gradient_sup, grad.sup_norm());
    for (int a = 0; a < grad.components(); ++a)
      m.hessian_sup = std::max(m.hessian_sup, spectral::gradient(grad.component(a)).sup_norm());
  }
  return m;
}

struct RateFit {
  double slope = 0.0;       // least-squares slope of log ‖b^n - b‖_{-β} vs log n
  double bound = 0.0;       // -(β - β′)/2 + 0.1
  bool rate_guaranteed = false;
  bool within_bound = false;
  std::vector<int> n_list;
  std::vector<double> distances;
};

/// Fits the decay of ‖b^n - b‖_{C_T C^{-β}} in n for a drift of regularity -β′.
inline RateFit mollification_rate(const Drift& b, double beta, double beta_prime, const std::vector<int>& n_list) {
  if (n_list.size() < 3) throw UsageError("mollification_rate needs at least three n values");
  RateFit fit;
  fit.n_list = n_list;
  fit.bound = -(beta - beta_prime) / 2.0 + 0.1;
  fit.rate_guaranteed = beta > beta_prime;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n : n_list) {
    if (n < 1) throw DomainError("mollification index n must be >= 1");
    const auto diff = spectral::heat_semigroup(b.field(), 1.0 / n) - b.field();
    const double dist = besov::besov(diff, -beta);
    fit.distances.push_back(dist);
    const double x = std::log(static_cast<double>(n)), y = std::log(dist);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(n_list.size());
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.within_bound = fit.slope <= fit.bound;
  return fit;
}

} // namespace mckean::drift
