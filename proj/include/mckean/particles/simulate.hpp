#pragma once

#include <cmath>
#include <vector>

#include "mckean/drift/drift.hpp"
#include "mckean/fp/picard.hpp"
#include "mckean/particles/ensemble.hpp"
#include "mckean/particles/interpolate.hpp"
#include "mckean/particles/kernel.hpp"

namespace mckean::particles {

using drift::Drift;
using fp::Nonlinearity;

namespace detail {

inline std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
  const double r = horizon / dt;
  const double k = std::round(r);
  if (k < 1.0 || std::abs(r - k) > 1e-9 * std::max(1.0, r)) throw UsageError("time step must divide the horizon");
  return static_cast<std::size_t>(k);
}

/// Steps at which snapshots are taken; {0, T} by default.
inline std::vector<std::size_t> snapshot_steps(std::vector<double> times, double dt, double horizon) {
  if (times.empty()) times = {0.0, horizon};
  std::vector<std::size_t> out;
  for (double t : times) {
    if (t < -1e-12 || t > horizon * (1 + 1e-12)) throw UsageError("snapshot time outside [0, T]");
    out.push_back(t <= 0.0 ? 0 : step_count(t, dt));
  }
  return out;
}

inline bool wanted(const std::vector<std::size_t>& snaps, std::size_t s) {
  return std::find(snaps.begin(), snaps.end(), s) != snaps.end();
}

/// X ← X + drift·dt + √dt ξ, ξ keyed by (seed, particle, step).
inline void euler_maruyama(ParticleEnsemble& e, const std::vector<double>& drift, double dt) {
  const util::CounterRng rng(e.seed);
  const int d = e.dim();
  const double sq = std::sqrt(dt), L = e.grid.length();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto [z0, z1] = rng.normal_pair(i, e.steps, kNoiseStream);
    const double z[2] = {z0, z1};
    for (int a = 0; a < d; ++a) {
      double& x = e.positions[i * d + a];
      x = wrap(x + drift[i * d + a] * dt + sq * z[a], L);
    }
  }
  ++e.steps;
  e.t = static_cast<double>(e.steps) * dt;
}

inline std::vector<PeriodicCubic> drift_interpolants(const Drift& b, double t) {
  const auto f = b.at(t);
  std::vector<PeriodicCubic> out;
  for (int a = 0; a < f.components(); ++a) out.emplace_back(f, a);
  return out;
}

} // namespace detail

/// Euler–Maruyama for dX = F(v(s, X)) b(s, X) ds + dW with v frozen at a
/// converged PDE solution (linear in time between its nodes).
inline EnsembleTrajectory simulate_frozen(const fp::SolverResult& v, const Drift& b, const Nonlinearity& F,
                                          std::size_t n, double dt, std::uint64_t seed,
                                          std::vector<double> snapshot_times = {}) {
  if (v.iterates.empty() || !(v.iterates.back() <= v.params.picard_tol))
    throw UsageError("frozen simulation needs a converged PDE solution");
  if (!(b.grid() == v.v.grid())) throw UsageError("drift and PDE solution live on different grids");
  const auto& tg = v.v.time;
  const std::size_t per_node = detail::step_count(tg.step(), dt);
  const std::size_t steps = per_node * static_cast<std::size_t>(tg.steps());
  const auto snaps = detail::snapshot_steps(std::move(snapshot_times), dt, tg.horizon());

  EnsembleTrajectory out{{}, dt};
  auto e = sample_initial(v.v[0], n, seed);
  const int d = e.dim();
  const bool static_drift = b.time_modulation().mode == drift::TimeMode::Static;
  auto bi = detail::drift_interpolants(b, 0.0);
  std::vector<double> field(e.grid.size()), drift(n * d);
  for (std::size_t s = 0;; ++s) {
    if (detail::wanted(snaps, s)) out.snapshots.push_back(e);
    if (s == steps) break;
    const std::size_t k = s / per_node;
    const double frac = static_cast<double>(s % per_node) / static_cast<double>(per_node);
    auto lo = v.v[k].values();
    if (frac == 0.0) {
      std::copy(lo.begin(), lo.end(), field.begin());
    } else {
      auto hi = v.v[k + 1].values();
      for (std::size_t i = 0; i < field.size(); ++i) field[i] = (1.0 - frac) * lo[i] + frac * hi[i];
    }
    const PeriodicCubic vi(e.grid, field);
    if (!static_drift) bi = detail::drift_interpolants(b, static_cast<double>(s) * dt);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = e.position(i);
      const double gain = F.F(vi(x));
      for (int a = 0; a < d; ++a) drift[i * d + a] = gain * bi[a](x);
    }
    detail::euler_maruyama(e, drift, dt);
  }
  return out;
}

enum class InteractionMethod { Direct, Spectral };

/// (1/N) Σ_j p_ε(X_i − X_j) at every particle, self term included.
inline std::vector<double> interaction_density(const ParticleEnsemble& e, double eps, InteractionMethod method) {
  if (!(eps > 0.0)) throw DomainError("interaction width ε must be > 0");
  const std::size_t n = e.size();
  const int d = e.dim();
  if (method == InteractionMethod::Direct) {
    std::vector<double> out(n, 0.0);
    double z[2];
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        for (int a = 0; a < d; ++a) z[a] = e.positions[i * d + a] - e.positions[j * d + a];
        s += heat_kernel(std::span<const double>(z, d), eps, e.grid.length());
      }
      out[i] = s / static_cast<double>(n);
    }
    return out;
  }
  const int K = gaussian_cutoff(eps, e.grid.length());
  if (K > e.grid.points() / 2 - 1)
    throw ResolutionError("interaction kernel p_ε is not resolved on the evaluation grid");
  return evaluate_smoothed(e, empirical_spectrum(e, K), K, eps);
}

/// Moderately interacting system dX^i = F((1/N)Σ_j p_ε(X^i − X^j)) b(s, X^i) ds
/// + dW^i with initial positions drawn from v0.
inline EnsembleTrajectory simulate_interacting(const SpectralField& v0, const Drift& b, const Nonlinearity& F,
                                               std::size_t n, double eps, double dt, double horizon,
                                               std::uint64_t seed,
                                               InteractionMethod method = InteractionMethod::Spectral,
                                               std::vector<double> snapshot_times = {}) {
  if (!(b.grid() == v0.grid())) throw UsageError("drift and initial density live on different grids");
  if (!(eps > 0.0)) throw DomainError("interaction width ε must be > 0");
  if (method == InteractionMethod::Spectral && gaussian_cutoff(eps, b.grid().length()) > b.grid().points() / 2 - 1)
    throw ResolutionError("interaction kernel p_ε is not resolved on the evaluation grid");
  const std::size_t steps = detail::step_count(horizon, dt);
  const auto snaps = detail::snapshot_steps(std::move(snapshot_times), dt, horizon);
  EnsembleTrajectory out{{}, dt};
  auto e = sample_initial(v0, n, seed);
  const int d = e.dim();
  const bool static_drift = b.time_modulation().mode == drift::TimeMode::Static;
  auto bi = detail::drift_interpolants(b, 0.0);
  std::vector<double> drift(n * d);
  for (std::size_t s = 0;; ++s) {
    if (detail::wanted(snaps, s)) out.snapshots.push_back(e);
    if (s == steps) break;
    const auto rho = interaction_density(e, eps, method);
    if (!static_drift) bi = detail::drift_interpolants(b, static_cast<double>(s) * dt);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = e.position(i);
      const double gain = F.F(rho[i]);
      for (int a = 0; a < d; ++a) drift[i * d + a] = gain * bi[a](x);
    }
    detail::euler_maruyama(e, drift, dt);
  }
  return out;
}

} // namespace mckean::particles
