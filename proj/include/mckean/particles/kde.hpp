#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <vector>

#include "mckean/fp/picard.hpp"
#include "mckean/particles/ensemble.hpp"
#include "mckean/particles/kernel.hpp"

namespace mckean::particles {

struct EmpiricalDensity {
  SpectralField field;
  double bandwidth;
  std::size_t n;
};

/// max(2 grid spacings, N^{−1/(d+4)}·spread), spread the largest per-axis
/// circular standard deviation.
inline double default_bandwidth(const ParticleEnsemble& e, const Grid& g) {
  double spread = 0.0;
  const double base = g.base_frequency();
  for (int a = 0; a < e.dim(); ++a) {
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      c += std::cos(base * e.positions[i * e.dim() + a]);
      s += std::sin(base * e.positions[i * e.dim() + a]);
    }
    const double R = std::hypot(c, s) / static_cast<double>(e.size());
    const double sd = R > 0.0 ? std::sqrt(-2.0 * std::log(R)) / base : g.length();
    spread = std::max(spread, std::min(sd, g.length()));
  }
  const double rule = std::pow(static_cast<double>(e.size()), -1.0 / (e.dim() + 4)) * spread;
  return std::max(2.0 * g.spacing(), rule);
}

/// Wrapped-Gaussian KDE with standard deviation `bandwidth` on grid g: the
/// heat semigroup at time bandwidth² applied to the empirical measure,
/// computed from its exact Fourier coefficients up to the Gaussian cutoff.
inline EmpiricalDensity kde_density(const ParticleEnsemble& e, const Grid& g, double bandwidth) {
  if (g.dim() != e.dim() || g.length() != e.grid.length()) throw UsageError("KDE grid does not match the torus");
  if (!(bandwidth >= 2.0 * g.spacing() * (1 - 1e-12)))
    throw ResolutionError("KDE bandwidth below two grid spacings");
  const int np = g.points();
  const int K = std::min(gaussian_cutoff(bandwidth * bandwidth, g.length()), np / 2 - 1);
  const auto S = empirical_spectrum(e, K);
  const double base = g.base_frequency();
  const double scale = static_cast<double>(g.size()) / g.volume();
  const double var = bandwidth * bandwidth;
  auto heat = [&](int k) { return std::exp(-0.5 * var * base * base * k * k); };
  std::vector<cplx> coeffs(g.size(), cplx{});
  auto idx = [np](int k) { return static_cast<std::size_t>((k % np + np) % np); };
  if (g.dim() == 1) {
    for (int k = 0; k <= K; ++k) {
      const cplx c = scale * heat(k) * S[k];
      coeffs[idx(k)] = c;
      if (k > 0) coeffs[idx(-k)] = std::conj(c);
    }
  } else {
    const std::size_t w1 = 2 * K + 1;
    for (int k0 = 0; k0 <= K; ++k0)
      for (int k1 = -K; k1 <= K; ++k1) {
        const cplx c = scale * heat(k0) * heat(k1) * S[k0 * w1 + (k1 + K)];
        coeffs[idx(k0) * np + idx(k1)] = c;
        coeffs[idx(-k0) * np + idx(-k1)] = std::conj(c);
      }
  }
  coeffs[0] = cplx(scale * S[0].real(), 0.0);
  return {SpectralField::from_coeffs(g, 1, std::move(coeffs)), bandwidth, e.size()};
}

inline double l1_distance(const SpectralField& a, const SpectralField& b) {
  a.require_same_shape(b);
  auto av = a.values(), bv = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) s += std::abs(av[i] - bv[i]);
  return s * a.grid().cell_volume();
}

struct LawDistance {
  double t;
  double l1;
  double sup;
  std::size_t n;
  double bandwidth;
  std::uint64_t seed;
};

/// Per snapshot: L¹ and sup distance between the KDE and P_{bandwidth²}v(t).
inline std::vector<LawDistance> law_vs_pde(const EnsembleTrajectory& traj, const fp::SolverResult& v,
                                           double bandwidth) {
  const auto& tg = v.v.time;
  std::vector<LawDistance> out;
  for (const auto& snap : traj.snapshots) {
    std::size_t node = tg.nodes();
    for (std::size_t k = 0; k < tg.nodes(); ++k)
      if (std::abs(tg.at(k) - snap.t) <= 1e-9 * std::max(1.0, tg.horizon())) node = k;
    if (node == tg.nodes()) throw UsageError("snapshot time is not a node of the PDE time grid");
    const auto kde = kde_density(snap, v.v.grid(), bandwidth);
    const auto pde = spectral::heat_semigroup(v.v[node], bandwidth * bandwidth);
    out.push_back({snap.t, l1_distance(kde.field, pde), spectral::sup_distance(kde.field, pde), snap.size(), bandwidth,
                   snap.seed});
  }
  return out;
}

inline void write_law_csv(std::ostream& os, const std::vector<LawDistance>& rows) {
  os << "time,l1,sup,N,bandwidth,seed\n" << std::setprecision(12);
  for (const auto& r : rows) os << r.t << ',' << r.l1 << ',' << r.sup << ',' << r.n << ',' << r.bandwidth << ',' << r.seed << '\n';
}

inline void write_positions_csv(std::ostream& os, const ParticleEnsemble& e) {
  os << (e.dim() == 1 ? "x\n" : "x,y\n") << std::setprecision(17);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto x = e.position(i);
    os << x[0];
    if (e.dim() == 2) os << ',' << x[1];
    os << '\n';
  }
}

} // namespace mckean::particles
