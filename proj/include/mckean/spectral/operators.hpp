#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "mckean/errors.hpp"
#include "mckean/spectral/field.hpp"

namespace mckean::spectral {

/// Physical wavevectors of every FFT mode of a grid.
struct Wavenumbers {
  std::vector<double> xi[2];    // ξ_a per mode; zero on the axis' Nyquist index
  std::vector<double> xi_sq;    // |ξ|², Nyquist included
  std::vector<int> k[2];        // signed integer wavenumbers (Nyquist reported as -N/2)

  static std::shared_ptr<const Wavenumbers> of(const Grid& g) {
    static std::mutex m;
    static std::map<std::tuple<int, int, double>, std::shared_ptr<const Wavenumbers>> cache;
    std::lock_guard lock(m);
    auto key = std::make_tuple(g.dim(), g.points(), g.length());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto w = std::make_shared<Wavenumbers>();
    const std::size_t n = g.size();
    const double base = g.base_frequency();
    for (int a = 0; a < g.dim(); ++a) {
      w->xi[a].resize(n);
      w->k[a].resize(n);
    }
    w->xi_sq.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      int idx[2];
      g.unflatten(i, idx);
      double s = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        const int kk = g.wavenumber(idx[a]);
        w->k[a][i] = kk;
        const double xi = base * kk;
        s += xi * xi;
        w->xi[a][i] = g.is_nyquist(idx[a]) ? 0.0 : xi;
      }
      w->xi_sq[i] = s;
    }
    cache.emplace(key, w);
    return w;
  }
};

namespace detail {

/// Applies a real per-mode multiplier to every component.
template <class Multiplier>
SpectralField apply_multiplier(const SpectralField& f, Multiplier&& mult) {
  auto cf = f.coeffs();
  std::vector<cplx> out(cf.begin(), cf.end());
  const std::size_t n = f.grid().size();
  for (int c = 0; c < f.components(); ++c)
    for (std::size_t i = 0; i < n; ++i) out[c * n + i] *= mult(i);
  return SpectralField::from_coeffs(f.grid(), f.components(), std::move(out));
}

inline double heat_factor(double xi_sq, double t) { return std::exp(-0.5 * t * xi_sq); }

/// (1 - exp(-λ h)) / λ, with the λ → 0 limit h.
inline double phi1(double lambda, double h) {
  if (lambda == 0.0) return h;
  return -std::expm1(-lambda * h) / lambda;
}

} // namespace detail

/// Heat semigroup P_t generated by ½Δ: Fourier multiplier exp(-t|ξ|²/2),
/// applied componentwise.
inline SpectralField heat_semigroup(const SpectralField& f, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("heat semigroup needs finite t >= 0");
  if (t == 0.0) return f;
  auto w = Wavenumbers::of(f.grid());
  return detail::apply_multiplier(f, [&](std::size_t i) { return detail::heat_factor(w->xi_sq[i], t); });
}

/// Spectral gradient of a scalar field; returns d components.
inline SpectralField gradient(const SpectralField& f) {
  if (f.components() != 1) throw UsageError("gradient expects a scalar field");
  const Grid& g = f.grid();
  auto w = Wavenumbers::of(g);
  auto cf = f.coeffs();
  const std::size_t n = g.size();
  std::vector<cplx> out(n * g.dim());
  for (int a = 0; a < g.dim(); ++a)
    for (std::size_t i = 0; i < n; ++i) out[a * n + i] = cf[i] * cplx(0.0, w->xi[a][i]);
  return SpectralField::from_coeffs(g, g.dim(), std::move(out));
}

/// Spectral divergence of a d-component field; the zero mode of the result is
/// exactly zero.
inline SpectralField divergence(const SpectralField& f) {
  const Grid& g = f.grid();
  if (f.components() != g.dim()) throw UsageError("divergence expects a d-component vector field");
  auto w = Wavenumbers::of(g);
  auto cf = f.coeffs();
  const std::size_t n = g.size();
  std::vector<cplx> out(n, cplx{});
  for (int a = 0; a < g.dim(); ++a)
    for (std::size_t i = 0; i < n; ++i) out[i] += cf[a * n + i] * cplx(0.0, w->xi[a][i]);
  out[0] = cplx{};
  return SpectralField::from_coeffs(g, 1, std::move(out));
}

/// Spectral Laplacian, multiplier -|ξ|².
inline SpectralField laplacian(const SpectralField& f) {
  auto w = Wavenumbers::of(f.grid());
  return detail::apply_multiplier(f, [&](std::size_t i) { return -w->xi_sq[i]; });
}

/// Applies a scalar function nodewise.
template <class Fn>
SpectralField map_values(const SpectralField& f, Fn&& fn) {
  auto v = f.values();
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), fn);
  return SpectralField::from_values(f.grid(), f.components(), std::move(out));
}

namespace detail {

/// Copies the N-mode spectrum of one component into a zero-padded P-mode
/// spectrum (P = 3N/2 per axis). Nyquist coefficients are split evenly between
/// the ±N/2 slots so the padded spectrum stays Hermitian.
inline void pad_spectrum(const Grid& g, std::span<const cplx> src, int p, std::span<cplx> dst) {
  const int n = g.points();
  std::fill(dst.begin(), dst.end(), cplx{});
  auto slot = [&](int k) { return k >= 0 ? k : k + p; };
  if (g.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      const int k = g.wavenumber(i);
      if (g.is_nyquist(i)) {
        dst[slot(-n / 2)] += 0.5 * src[i];
        dst[slot(n / 2)] += 0.5 * src[i];
      } else {
        dst[slot(k)] += src[i];
      }
    }
    return;
  }
  struct Slot {
    int k;
    double w;
  };
  auto targets = [&](int i, Slot out[2]) {
    if (g.is_nyquist(i)) {
      out[0] = {-n / 2, 0.5};
      out[1] = {n / 2, 0.5};
      return 2;
    }
    out[0] = {g.wavenumber(i), 1.0};
    return 1;
  };
  Slot s0[2], s1[2];
  for (int i0 = 0; i0 < n; ++i0) {
    const int n0 = targets(i0, s0);
    for (int i1 = 0; i1 < n; ++i1) {
      const int n1 = targets(i1, s1);
      const cplx c = src[static_cast<std::size_t>(i0) * n + i1];
      for (int a = 0; a < n0; ++a)
        for (int b = 0; b < n1; ++b)
          dst[static_cast<std::size_t>(slot(s0[a].k)) * p + slot(s1[b].k)] += s0[a].w * s1[b].w * c;
    }
  }
}

/// Inverse of pad_spectrum's embedding: keeps |k| < N/2; the Nyquist slot
/// collects both the -N/2 and +N/2 fine coefficients.
inline void truncate_spectrum(const Grid& g, std::span<const cplx> src, int p, std::span<cplx> dst) {
  const int n = g.points();
  auto slot = [&](int k) { return k >= 0 ? k : k + p; };
  auto sources = [&](int i, int out[2]) {
    if (g.is_nyquist(i)) {
      out[0] = slot(-n / 2);
      out[1] = slot(n / 2);
      return 2;
    }
    out[0] = slot(g.wavenumber(i));
    return 1;
  };
  int s0[2], s1[2];
  if (g.dim() == 1) {
    for (int i = 0; i < n; ++i) {
      const int m = sources(i, s0);
      cplx acc{};
      for (int a = 0; a < m; ++a) acc += src[s0[a]];
      dst[i] = acc;
    }
    return;
  }
  for (int i0 = 0; i0 < n; ++i0) {
    const int m0 = sources(i0, s0);
    for (int i1 = 0; i1 < n; ++i1) {
      const int m1 = sources(i1, s1);
      cplx acc{};
      for (int a = 0; a < m0; ++a)
        for (int b = 0; b < m1; ++b) acc += src[static_cast<std::size_t>(s0[a]) * p + s1[b]];
      dst[static_cast<std::size_t>(i0) * n + i1] = acc;
    }
  }
}

} // namespace detail

/// Dealiased pointwise product. Both factors are zero-padded to 3N/2 modes per
/// axis (the 2/3 rule), multiplied nodewise on the fine grid and truncated
/// back. A scalar factor broadcasts against a vector one; otherwise the
/// componentry must match.
inline SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw UsageError("pointwise_product: fields live on different grids");
  const int fc = f.components(), gc = g.components();
  if (fc != gc && fc != 1 && gc != 1) throw UsageError("pointwise_product: incompatible componentry");
  const Grid& grid = f.grid();
  const int n = grid.points();
  const int p = 3 * n / 2;
  const int d = grid.dim();
  const std::size_t fine = d == 1 ? static_cast<std::size_t>(p) : static_cast<std::size_t>(p) * p;
  const std::size_t coarse = grid.size();
  const int oc = std::max(fc, gc);

  auto to_fine = [&](const SpectralField& src, int c) {
    std::vector<cplx> padded(fine), out(fine);
    detail::pad_spectrum(grid, src.coeffs(c), p, padded);
    // unnormalized inverse: rescale so values match the coarse sampling
    detail::inverse(d, p, padded, out);
    const double scale = static_cast<double>(fine) / static_cast<double>(coarse);
    for (auto& z : out) z = cplx(z.real() * scale, 0.0);
    return out;
  };

  std::vector<cplx> result(coarse * oc);
  std::vector<cplx> prod(fine), spec(fine);
  std::vector<std::vector<cplx>> fv(fc), gv(gc);
  for (int c = 0; c < fc; ++c) fv[c] = to_fine(f, c);
  for (int c = 0; c < gc; ++c) gv[c] = to_fine(g, c);
  for (int c = 0; c < oc; ++c) {
    const auto& a = fv[fc == 1 ? 0 : c];
    const auto& b = gv[gc == 1 ? 0 : c];
    for (std::size_t i = 0; i < fine; ++i) prod[i] = a[i].real() * b[i].real();
    detail::forward(d, p, prod, spec);
    const double scale = static_cast<double>(coarse) / static_cast<double>(fine);
    for (auto& z : spec) z *= scale;
    detail::truncate_spectrum(grid, spec, p, std::span<cplx>(result).subspan(c * coarse, coarse));
  }
  return SpectralField::from_coeffs(grid, oc, std::move(result));
}

/// One step of the exponential-integrator Duhamel rule on [t_from, t_to]:
/// P_{Δt} v + ∫ P_{t_to - s} g ds with g frozen at the interval midpoint
/// (linear interpolation between the bracketing source nodes) and the per-mode
/// integral (1 - e^{-λΔt})/λ evaluated in closed form.
inline SpectralField duhamel_step(const SpectralField& v,
                                  std::span<const std::pair<double, SpectralField>> sources,
                                  double t_from, double t_to) {
  if (sources.empty()) throw UsageError("duhamel_step: empty source list");
  if (!(t_to >= t_from)) throw DomainError("duhamel_step: t_to must not precede t_from");
  const double scale = std::max({1.0, std::abs(t_from), std::abs(t_to)});
  const double tol = 1e-12 * scale;
  if (sources.front().first > t_from + tol || sources.back().first < t_to - tol)
    throw UsageError("duhamel_step: source nodes do not cover [t_from, t_to]");
  for (std::size_t i = 1; i < sources.size(); ++i)
    if (sources[i].first < sources[i - 1].first) throw UsageError("duhamel_step: source times must be sorted");
  for (const auto& s : sources) v.require_same_shape(s.second);

  const double mid = 0.5 * (t_from + t_to);
  std::size_t hi = 0;
  while (hi + 1 < sources.size() && sources[hi].first < mid) ++hi;
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  double wlo = 0.0, whi = 1.0;
  if (lo != hi) {
    const double span = sources[hi].first - sources[lo].first;
    whi = span > 0.0 ? (mid - sources[lo].first) / span : 1.0;
    wlo = 1.0 - whi;
  }

  const double h = t_to - t_from;
  auto w = Wavenumbers::of(v.grid());
  auto vc = v.coeffs();
  auto glo = sources[lo].second.coeffs();
  auto ghi = sources[hi].second.coeffs();
  const std::size_t n = v.grid().size();
  std::vector<cplx> out(vc.size());
  for (int c = 0; c < v.components(); ++c)
    for (std::size_t i = 0; i < n; ++i) {
      const double lambda = 0.5 * w->xi_sq[i];
      const std::size_t j = c * n + i;
      const cplx gmid = wlo * glo[j] + whi * ghi[j];
      out[j] = std::exp(-lambda * h) * vc[j] + detail::phi1(lambda, h) * gmid;
    }
  return SpectralField::from_coeffs(v.grid(), v.components(), std::move(out));
}

/// sup-norm of P_t div f - div P_t f.
inline double semigroup_div_commute_check(const SpectralField& f, double t) {
  if (!(t >= 0.0)) throw DomainError("semigroup_div_commute_check needs t >= 0");
  const auto a = heat_semigroup(divergence(f), t);
  const auto b = divergence(heat_semigroup(f, t));
  return sup_distance(a, b);
}

} // namespace mckean::spectral
