#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mckean/besov/norms.hpp"
#include "mckean/errors.hpp"
#include "mckean/spectral/operators.hpp"

namespace mckean::fp {

using spectral::Grid;
using spectral::SpectralField;
using spectral::TimeGrid;

/// Scalar field sampled at every node t_k of a time grid.
struct Trajectory {
  TimeGrid time;
  std::vector<SpectralField> v;

  Trajectory(TimeGrid tg, std::vector<SpectralField> fields) : time(tg), v(std::move(fields)) {
    if (v.size() != time.nodes()) throw UsageError("trajectory needs one field per time node");
    for (const auto& f : v) f.require_same_shape(v.front());
  }

  static Trajectory zeros(const TimeGrid& tg, const Grid& g) {
    return Trajectory(tg, std::vector<SpectralField>(tg.nodes(), SpectralField(g, 1)));
  }

  const Grid& grid() const noexcept { return v.front().grid(); }
  std::size_t size() const noexcept { return v.size(); }
  const SpectralField& operator[](std::size_t k) const { return v[k]; }
  SpectralField& operator[](std::size_t k) { return v[k]; }

  void require_compatible(const Trajectory& o) const {
    if (!(time == o.time)) throw UsageError("trajectories live on different time grids");
    v.front().require_same_shape(o.v.front());
  }

  Trajectory& operator+=(const Trajectory& o) {
    require_compatible(o);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
    return *this;
  }
  Trajectory& operator-=(const Trajectory& o) {
    require_compatible(o);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
    return *this;
  }
};

inline Trajectory operator+(Trajectory a, const Trajectory& b) { return a += b; }
inline Trajectory operator-(Trajectory a, const Trajectory& b) { return a -= b; }

/// t_k ↦ P_{t_k} v0.
inline Trajectory heat_flow(const SpectralField& v0, const TimeGrid& tg) {
  if (v0.components() != 1) throw UsageError("initial datum must be scalar");
  std::vector<SpectralField> out;
  out.reserve(tg.nodes());
  for (std::size_t k = 0; k < tg.nodes(); ++k) out.push_back(spectral::heat_semigroup(v0, tg.at(k)));
  return Trajectory(tg, std::move(out));
}

/// ‖w(t_k) − z(t_k)‖_α per node.
inline std::vector<double> node_distances(const Trajectory& w, const Trajectory& z, double alpha) {
  w.require_compatible(z);
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = besov::besov(w[k] - z[k], alpha);
  return out;
}

/// log max_k e^{−ρ t_k} n_k; −∞ when every n_k is zero. Stays finite for ρ
/// far beyond the range where e^{−ρ t} is representable.
inline double log_weighted_sup(const std::vector<double>& node_norms, const TimeGrid& tg, double rho) {
  if (node_norms.size() != tg.nodes()) throw UsageError("node norms do not match the time grid");
  if (!(rho >= 0.0)) throw DomainError("weight parameter ρ must be >= 0");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < node_norms.size(); ++k)
    if (node_norms[k] > 0.0) best = std::max(best, std::log(node_norms[k]) - rho * tg.at(k));
  return best;
}

inline double log_weighted_distance(const Trajectory& w, const Trajectory& z, double rho, double alpha) {
  return log_weighted_sup(node_distances(w, z, alpha), w.time, rho);
}

/// d_ρ(w, z) = max_k e^{−ρ t_k}‖w(t_k) − z(t_k)‖_α.
inline double weighted_distance(const Trajectory& w, const Trajectory& z, double rho, double alpha) {
  return std::exp(log_weighted_distance(w, z, rho, alpha));
}

inline double sup_besov(const Trajectory& w, double alpha) {
  double m = 0.0;
  for (const auto& f : w.v) m = std::max(m, besov::besov(f, alpha));
  return m;
}

} // namespace mckean::fp
