#pragma once

#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "mckean/spectral/operators.hpp"

namespace mckean::besov {

using spectral::Grid;
using spectral::SpectralField;

namespace detail {

// exp(-1/x) for x > 0, else 0.
inline double bump_tail(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

/// C^∞ step: 0 for x ≤ 0, 1 for x ≥ 1.
inline double smooth_step(double x) {
  const double a = bump_tail(x), b = bump_tail(1.0 - x);
  return a / (a + b);
}

} // namespace detail

inline constexpr double kChiInner = 1.1;
inline constexpr double kChiOuter = 1.4;

/// Radial cutoff in units of the base frequency Λ = 2π/L: 1 on r ≤ 1.1,
/// 0 on r ≥ 1.4, smooth in between.
inline double chi(double r) {
  if (r <= kChiInner) return 1.0;
  if (r >= kChiOuter) return 0.0;
  return detail::smooth_step((kChiOuter - r) / (kChiOuter - kChiInner));
}

/// Highest usable block index: the annulus of block j reaches 1.4·2^j Λ,
/// which must stay below the Nyquist frequency NΛ/2.
inline int max_block(const Grid& g) {
  return static_cast<int>(std::floor(std::log2(g.points() / (2.0 * kChiOuter))));
}

/// φ_j(r) for j ∈ [-1, j_max]; r = |ξ|/Λ. Block j_max takes the whole tail so
/// that Σ_j φ_j ≡ 1 on every grid mode.
inline double lp_multiplier(int j, int j_max, double r) {
  if (j == -1) return chi(2.0 * r);
  if (j == j_max) return 1.0 - chi(r / std::ldexp(1.0, j - 1));
  return chi(r / std::ldexp(1.0, j)) - chi(r / std::ldexp(1.0, j - 1));
}

/// Per-mode multipliers of every block on one grid; row j + 1 holds φ_j.
struct Partition {
  int j_max = 0;
  std::vector<std::vector<double>> rows;

  int block_count() const noexcept { return j_max + 2; }
  const std::vector<double>& row(int j) const { return rows.at(j + 1); }

  static std::shared_ptr<const Partition> of(const Grid& g) {
    static std::mutex m;
    static std::map<std::tuple<int, int, double>, std::shared_ptr<const Partition>> cache;
    std::lock_guard lock(m);
    auto key = std::make_tuple(g.dim(), g.points(), g.length());
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    auto p = std::make_shared<Partition>();
    p->j_max = max_block(g);
    auto w = spectral::Wavenumbers::of(g);
    const double base = g.base_frequency();
    p->rows.assign(p->block_count(), std::vector<double>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = std::sqrt(w->xi_sq[i]) / base;
      for (int j = -1; j <= p->j_max; ++j) p->rows[j + 1][i] = lp_multiplier(j, p->j_max, r);
    }
    cache.emplace(key, p);
    return p;
  }
};

/// Test hook: while set, block 0 is scaled by 1/2 so the blocks no longer
/// sum to the input.
inline std::atomic<bool>& partition_fault() {
  static std::atomic<bool> flag{false};
  return flag;
}

struct Block {
  int j;
  SpectralField field;
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  std::shared_ptr<const Partition> partition;

  SpectralField reconstruct() const {
    SpectralField sum(blocks.front().field.grid(), blocks.front().field.components());
    for (const auto& b : blocks) sum += b.field;
    return sum;
  }
};

namespace detail {

inline double block_scale(int j) { return (j == 0 && partition_fault().load()) ? 0.5 : 1.0; }

/// Δ_j f for every j, as raw values per component (component-major).
template <class Visit>
void for_each_block(const SpectralField& f, Visit&& visit) {
  const Grid& g = f.grid();
  auto part = Partition::of(g);
  auto cf = f.coeffs();
  const std::size_t n = g.size();
  std::vector<spectral::cplx> spec(n), out(n);
  std::vector<double> vals(n * f.components());
  for (int j = -1; j <= part->j_max; ++j) {
    const auto& row = part->row(j);
    const double s = block_scale(j);
    for (int c = 0; c < f.components(); ++c) {
      for (std::size_t i = 0; i < n; ++i) spec[i] = cf[c * n + i] * (s * row[i]);
      spectral::detail::inverse(g.dim(), g.points(), spec, out);
      for (std::size_t i = 0; i < n; ++i) vals[c * n + i] = out[i].real();
    }
    visit(j, std::span<const double>(vals));
  }
}

} // namespace detail

inline BlockDecomposition decompose(const SpectralField& f) {
  BlockDecomposition d;
  d.partition = Partition::of(f.grid());
  detail::for_each_block(f, [&](int j, std::span<const double> vals) {
    d.blocks.push_back({j, SpectralField::from_values(f.grid(), f.components(),
                                                      std::vector<double>(vals.begin(), vals.end()))});
  });
  return d;
}

/// sup_x |Δ_j f| over all components, for j = -1 .. j_max (index j + 1).
inline std::vector<double> block_sups(const SpectralField& f) {
  std::vector<double> sups;
  detail::for_each_block(f, [&](int, std::span<const double> vals) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    sups.push_back(m);
  });
  return sups;
}

} // namespace mckean::besov
