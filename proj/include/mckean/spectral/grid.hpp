#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "mckean/errors.hpp"

namespace mckean::spectral {

/// Periodic computational domain [0, L)^d sampled by N points per axis.
class Grid {
public:
  Grid(int dim, int points, double length = 1.0) : d_(dim), n_(points), l_(length) {
    if (d_ != 1 && d_ != 2)
      throw DomainError("grid dimension must be 1 or 2, got " + std::to_string(d_));
    if (n_ < 8 || (n_ & (n_ - 1)) != 0)
      throw DomainError("grid points per axis must be a power of two >= 8, got " +
                        std::to_string(n_));
    if (!(l_ > 0.0) || !std::isfinite(l_))
      throw DomainError("grid side length must be positive");
  }

  int dim() const noexcept { return d_; }
  int points() const noexcept { return n_; }
  double length() const noexcept { return l_; }

  /// Total number of nodes, N^d.
  std::size_t size() const noexcept {
    return d_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
  }
  double spacing() const noexcept { return l_ / n_; }
  double cell_volume() const noexcept { return std::pow(spacing(), d_); }
  double volume() const noexcept { return std::pow(l_, d_); }

  /// Fundamental wavenumber 2π/L.
  double base_frequency() const noexcept { return 2.0 * std::numbers::pi / l_; }

  /// Signed integer wavenumber stored at FFT index i along an axis.
  int wavenumber(int i) const noexcept { return i < n_ / 2 ? i : i - n_; }
  bool is_nyquist(int i) const noexcept { return i == n_ / 2; }

  /// Multi-index of flat node/mode index (row-major, axis 0 slowest).
  void unflatten(std::size_t flat, int idx[2]) const noexcept {
    if (d_ == 1) {
      idx[0] = static_cast<int>(flat);
      idx[1] = 0;
    } else {
      idx[0] = static_cast<int>(flat / n_);
      idx[1] = static_cast<int>(flat % n_);
    }
  }

  /// Coordinate of node `flat` along `axis`.
  double coordinate(std::size_t flat, int axis) const noexcept {
    int idx[2];
    unflatten(flat, idx);
    return idx[axis] * spacing();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  int d_;
  int n_;
  double l_;
};

inline std::string describe(const Grid& g) {
  return "d=" + std::to_string(g.dim()) + " N=" + std::to_string(g.points()) +
         " L=" + std::to_string(g.length());
}

/// Uniform time grid t_k = kT/M on [0, T].
class TimeGrid {
public:
  TimeGrid(double horizon, int steps) : t_(horizon), m_(steps) {
    if (!(t_ > 0.0) || !std::isfinite(t_)) throw DomainError("time horizon must be positive");
    if (m_ < 1) throw DomainError("time grid needs at least one step");
  }

  double horizon() const noexcept { return t_; }
  int steps() const noexcept { return m_; }
  std::size_t nodes() const noexcept { return static_cast<std::size_t>(m_) + 1; }
  double step() const noexcept { return t_ / m_; }
  double at(std::size_t k) const noexcept {
    return k == static_cast<std::size_t>(m_) ? t_ : static_cast<double>(k) * t_ / m_;
  }
  std::vector<double> points() const {
    std::vector<double> out(nodes());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k);
    return out;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
  double t_;
  int m_;
};

} // namespace mckean::spectral
