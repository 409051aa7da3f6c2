#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mckean/errors.hpp"
#include "mckean/particles/ensemble.hpp"

namespace mckean::particles {

using cplx = std::complex<double>;

/// Wrapped Gaussian of variance `var` on a circle of length L, by image sum.
inline double wrapped_gaussian_1d(double z, double var, double length) {
  const int images = 2 + static_cast<int>(std::ceil(9.0 * std::sqrt(var) / length));
  double s = 0.0;
  for (int p = -images; p <= images; ++p) {
    const double y = z + p * length;
    s += std::exp(-y * y / (2.0 * var));
  }
  return s / std::sqrt(2.0 * std::numbers::pi * var);
}

/// p_ε(x) = Π_a wrapped Gaussian of variance ε: the heat kernel of ½Δ at time ε.
inline double heat_kernel(std::span<const double> z, double eps, double length) {
  double r = 1.0;
  for (double za : z) r *= wrapped_gaussian_1d(za, eps, length);
  return r;
}

/// Largest integer wavenumber whose Gaussian factor exp(−var Λ²k²/2) exceeds
/// e^{−40}.
inline int gaussian_cutoff(double var, double length) {
  const double base = 2.0 * std::numbers::pi / length;
  return static_cast<int>(std::ceil(std::sqrt(80.0 / var) / base));
}

/// Empirical Fourier coefficients S_k = (1/N) Σ_j e^{−iΛk·X_j} for
/// 0 ≤ k0 ≤ K and |k1| ≤ K (d = 2) or 0 ≤ k ≤ K (d = 1); row-major over
/// (k0, k1 + K).
inline std::vector<cplx> empirical_spectrum(const ParticleEnsemble& e, int K) {
  const int d = e.dim();
  const double base = e.grid.base_frequency();
  const std::size_t n = e.size();
  const std::size_t w1 = d == 1 ? 1 : static_cast<std::size_t>(2 * K + 1);
  std::vector<cplx> S((K + 1) * w1, cplx{});
  std::vector<cplx> p0(K + 1), p1(2 * K + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto x = e.position(j);
    const cplx e0 = std::polar(1.0, -base * x[0]);
    p0[0] = 1.0;
    for (int k = 1; k <= K; ++k) p0[k] = p0[k - 1] * e0;
    if (d == 1) {
      for (int k = 0; k <= K; ++k) S[k] += p0[k];
      continue;
    }
    const cplx e1 = std::polar(1.0, -base * x[1]);
    p1[K] = 1.0;
    for (int k = 1; k <= K; ++k) {
      p1[K + k] = p1[K + k - 1] * e1;
      p1[K - k] = std::conj(p1[K + k]);
    }
    for (int k0 = 0; k0 <= K; ++k0)
      for (int k1 = 0; k1 <= 2 * K; ++k1) S[k0 * w1 + k1] += p0[k0] * p1[k1];
  }
  for (auto& s : S) s /= static_cast<double>(n);
  return S;
}

/// Evaluates (1/L^d) Σ_k m(k) S_k e^{iΛk·x} at each particle, where m is the
/// real even multiplier exp(−var Λ²|k|²/2) and S the empirical spectrum.
inline std::vector<double> evaluate_smoothed(const ParticleEnsemble& at, const std::vector<cplx>& S, int K,
                                             double var) {
  const int d = at.dim();
  const double base = at.grid.base_frequency();
  const double vol = at.grid.volume();
  const std::size_t w1 = d == 1 ? 1 : static_cast<std::size_t>(2 * K + 1);
  std::vector<double> m0(K + 1);
  for (int k = 0; k <= K; ++k) m0[k] = std::exp(-0.5 * var * base * base * k * k);
  // Hermitian half-space weights: k and −k contribute 2 Re(·).
  std::vector<cplx> coef(S.size());
  for (int k0 = 0; k0 <= K; ++k0)
    for (std::size_t c = 0; c < w1; ++c) {
      const int k1 = d == 1 ? 0 : static_cast<int>(c) - K;
      double weight;
      if (d == 1)
        weight = k0 == 0 ? 1.0 : 2.0;
      else
        weight = (k0 > 0 || k1 > 0) ? 2.0 : (k1 == 0 ? 1.0 : 0.0);
      const double mult = m0[k0] * (d == 1 ? 1.0 : m0[std::abs(k1)]);
      coef[k0 * w1 + c] = weight * mult * S[k0 * w1 + c];
    }
  const std::size_t n = at.size();
  std::vector<double> out(n);
  std::vector<cplx> p0(K + 1), p1(2 * K + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = at.position(i);
    const cplx e0 = std::polar(1.0, base * x[0]);
    p0[0] = 1.0;
    for (int k = 1; k <= K; ++k) p0[k] = p0[k - 1] * e0;
    double r = 0.0;
    if (d == 1) {
      for (int k = 0; k <= K; ++k) r += (coef[k] * p0[k]).real();
    } else {
      const cplx e1 = std::polar(1.0, base * x[1]);
      p1[K] = 1.0;
      for (int k = 1; k <= K; ++k) {
        p1[K + k] = p1[K + k - 1] * e1;
        p1[K - k] = std::conj(p1[K + k]);
      }
      for (int k0 = 0; k0 <= K; ++k0) {
        cplx row{};
        for (std::size_t c = 0; c < w1; ++c) row += coef[k0 * w1 + c] * p1[c];
        r += (row * p0[k0]).real();
      }
    }
    out[i] = r / vol;
  }
  return out;
}

} // namespace mckean::particles
