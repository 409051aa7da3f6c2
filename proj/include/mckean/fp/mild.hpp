#pragma once

#include <utility>
#include <vector>

#include "mckean/drift/drift.hpp"
#include "mckean/fp/nonlinearity.hpp"
#include "mckean/fp/trajectory.hpp"

namespace mckean::fp {

using drift::Drift;

/// How the Duhamel source enters: as the scalar −div(F̃(v)b), or as the vector
/// F̃(v)b integrated against the semigroup before the divergence is taken.
enum class SourceForm { Divergence, KernelSum };

namespace detail {

inline void require_inputs(const Trajectory& v, const SpectralField& v0, const Drift& b) {
  if (v0.components() != 1) throw UsageError("initial datum must be scalar");
  if (!(v.grid() == v0.grid()) || !(b.grid() == v0.grid()))
    throw UsageError("trajectory, initial datum and drift must share one grid");
}

/// F̃(v(t_k))·b(t_k) per node, dealiased.
inline std::vector<SpectralField> flux(const Trajectory& v, const Drift& b, const Nonlinearity& F) {
  std::vector<SpectralField> out;
  out.reserve(v.size());
  const bool static_drift = b.time_modulation().mode == drift::TimeMode::Static;
  for (std::size_t k = 0; k < v.size(); ++k) {
    auto ft = spectral::map_values(v[k], [&](double z) { return F.Ftilde(z); });
    out.push_back(static_drift ? spectral::pointwise_product(ft, b.field())
                               : spectral::pointwise_product(ft, b.at(v.time.at(k))));
  }
  return out;
}

/// ∫_0^h e^{−λ(h−s)} (s/h) ds, with a series for small λh.
inline double phi2(double lambda, double h) {
  const double x = lambda * h;
  if (x < 1e-3) return h * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
  return (h - spectral::detail::phi1(lambda, h)) / x;
}

/// Exponential Duhamel recursion with the source interpolated linearly in
/// time and integrated exactly per mode: D_0 = 0,
/// D_{k+1} = e^{−λh}D_k + φ1·s_k + φ2·(s_{k+1} − s_k).
inline std::vector<SpectralField> duhamel(const std::vector<SpectralField>& src, const TimeGrid& tg) {
  const Grid& g = src.front().grid();
  const int comps = src.front().components();
  const std::size_t n = g.size();
  const double h = tg.step();
  auto w = spectral::Wavenumbers::of(g);
  std::vector<double> decay(n), p1(n), p2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = 0.5 * w->xi_sq[i];
    decay[i] = std::exp(-lambda * h);
    p1[i] = spectral::detail::phi1(lambda, h);
    p2[i] = phi2(lambda, h);
  }
  std::vector<SpectralField> out;
  out.reserve(src.size());
  std::vector<spectral::cplx> acc(n * comps, spectral::cplx{});
  out.push_back(SpectralField::from_coeffs(g, comps, acc));
  for (std::size_t k = 0; k + 1 < src.size(); ++k) {
    auto a = src[k].coeffs(), b = src[k + 1].coeffs();
    for (int c = 0; c < comps; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = c * n + i;
        acc[j] = decay[i] * acc[j] + p1[i] * a[j] + p2[i] * (b[j] - a[j]);
      }
    out.push_back(SpectralField::from_coeffs(g, comps, acc));
  }
  return out;
}

} // namespace detail

/// I(v)(t_k) = P_{t_k} v0 − Σ Duhamel quadrature of div(F̃(v)b).
inline Trajectory mild_map_I(const Trajectory& v, const SpectralField& v0, const Drift& b, const Nonlinearity& F,
                             SourceForm form = SourceForm::Divergence) {
  detail::require_inputs(v, v0, b);
  auto fl = detail::flux(v, b, F);
  auto out = heat_flow(v0, v.time);
  if (form == SourceForm::Divergence) {
    for (auto& f : fl) f = -1.0 * spectral::divergence(f);
    auto d = detail::duhamel(fl, v.time);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += d[k];
  } else {
    auto d = detail::duhamel(fl, v.time);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= spectral::divergence(d[k]);
  }
  return out;
}

/// J(w) = I(w + P·v0) − P·v0, with P·v0 supplied precomputed.
inline Trajectory mild_map_J(const Trajectory& w, const Trajectory& heat, const SpectralField& v0, const Drift& b,
                             const Nonlinearity& F) {
  return mild_map_I(w + heat, v0, b, F) - heat;
}

inline Trajectory mild_map_J(const Trajectory& w, const SpectralField& v0, const Drift& b, const Nonlinearity& F) {
  return mild_map_J(w, heat_flow(v0, w.time), v0, b, F);
}

} // namespace mckean::fp
