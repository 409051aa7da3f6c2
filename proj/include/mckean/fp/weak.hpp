#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mckean/fp/picard.hpp"

namespace mckean::fp {

/// cos and sin of the first `modes` wavenumbers along axis 0.
inline std::vector<SpectralField> fourier_test_functions(const Grid& g, int modes) {
  std::vector<SpectralField> out;
  const double base = g.base_frequency();
  for (int k = 1; k <= modes; ++k) {
    out.push_back(SpectralField::sample(g, 1, [&](auto x, int) { return std::cos(k * base * x[0]); }));
    out.push_back(SpectralField::sample(g, 1, [&](auto x, int) { return std::sin(k * base * x[0]); }));
  }
  return out;
}

struct WeakResidual {
  std::vector<double> times;
  std::vector<std::vector<double>> per_test;  // [test][node]
  double max = 0.0;
};

/// |⟨φ, v(t)⟩ − ⟨φ, v0⟩ − ∫⟨½Δφ, v⟩ − ∫⟨∇φ, F̃(v)b⟩| at every node, time
/// integrals by the composite trapezoid rule on the solver's grid. Also
/// stores the per-test maxima in r.residuals.
inline WeakResidual weak_residual(SolverResult& r, const std::vector<SpectralField>& tests) {
  const auto& v = r.v;
  const auto fl = detail::flux(v, r.drift, r.F);
  const double h = v.time.step();
  WeakResidual out{v.time.points(), {}, 0.0};
  r.residuals.clear();
  for (const auto& phi : tests) {
    if (!(phi.grid() == v.grid()) || phi.components() != 1) throw UsageError("test function must be scalar on the solver grid");
    const auto half_lap = 0.5 * spectral::laplacian(phi);
    const auto grad = spectral::gradient(phi);
    std::vector<double> integrand(v.size()), res(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
      integrand[k] = spectral::inner_product(half_lap, v[k]) + spectral::inner_product(grad, fl[k]);
    const double base = spectral::inner_product(phi, v[0]);
    double acc = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k > 0) acc += 0.5 * h * (integrand[k - 1] + integrand[k]);
      res[k] = std::abs(spectral::inner_product(phi, v[k]) - base - acc);
    }
    const double m = *std::max_element(res.begin(), res.end());
    out.max = std::max(out.max, m);
    r.residuals.push_back(m);
    out.per_test.push_back(std::move(res));
  }
  return out;
}

} // namespace mckean::fp
