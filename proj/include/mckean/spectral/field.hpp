#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <span>
#include <vector>

#include "mckean/errors.hpp"
#include "mckean/spectral/fft.hpp"
#include "mckean/spectral/grid.hpp"

namespace mckean::spectral {

using cplx = std::complex<double>;

/// Real scalar or vector field on a periodic grid, holding node values and
/// unnormalized DFT coefficients. Either representation is computed on demand
/// from the other and cached; mutable access to one invalidates the other.
///
/// Layout: component-major, each component a row-major block of N^d entries.
class SpectralField {
public:
  SpectralField(Grid grid, int components = 1)
      : grid_(grid), comps_(components), values_(grid.size() * components, 0.0),
        coeffs_(grid.size() * components, cplx{}), values_ok_(true), coeffs_ok_(true) {
    if (components < 1) throw UsageError("field needs at least one component");
  }

  static SpectralField from_values(Grid grid, int components, std::vector<double> values) {
    if (values.size() != grid.size() * static_cast<std::size_t>(components))
      throw UsageError("value array does not match grid and componentry");
    SpectralField f(grid, components, Uninit{});
    f.values_ = std::move(values);
    f.values_ok_ = true;
    return f;
  }

  static SpectralField from_coeffs(Grid grid, int components, std::vector<cplx> coeffs) {
    if (coeffs.size() != grid.size() * static_cast<std::size_t>(components))
      throw UsageError("coefficient array does not match grid and componentry");
    SpectralField f(grid, components, Uninit{});
    f.coeffs_ = std::move(coeffs);
    f.coeffs_ok_ = true;
    return f;
  }

  /// Samples fn(x, component) at every node; x holds d coordinates.
  static SpectralField sample(Grid grid, int components,
                              const std::function<double(std::span<const double>, int)>& fn) {
    std::vector<double> vals(grid.size() * components);
    double x[2] = {0.0, 0.0};
    for (int c = 0; c < components; ++c)
      for (std::size_t n = 0; n < grid.size(); ++n) {
        for (int a = 0; a < grid.dim(); ++a) x[a] = grid.coordinate(n, a);
        vals[c * grid.size() + n] = fn(std::span<const double>(x, grid.dim()), c);
      }
    return from_values(grid, components, std::move(vals));
  }

  static SpectralField constant(Grid grid, int components, double value) {
    return from_values(grid, components, std::vector<double>(grid.size() * components, value));
  }

  SpectralField(const SpectralField& other) : grid_(other.grid_), comps_(other.comps_) {
    std::lock_guard lock(other.mutex_);
    values_ = other.values_;
    coeffs_ = other.coeffs_;
    values_ok_ = other.values_ok_;
    coeffs_ok_ = other.coeffs_ok_;
  }
  SpectralField(SpectralField&& other) noexcept
      : grid_(other.grid_), comps_(other.comps_), values_(std::move(other.values_)),
        coeffs_(std::move(other.coeffs_)), values_ok_(other.values_ok_),
        coeffs_ok_(other.coeffs_ok_) {}
  SpectralField& operator=(const SpectralField& other) {
    if (this != &other) {
      SpectralField tmp(other);
      *this = std::move(tmp);
    }
    return *this;
  }
  SpectralField& operator=(SpectralField&& other) noexcept {
    grid_ = other.grid_;
    comps_ = other.comps_;
    values_ = std::move(other.values_);
    coeffs_ = std::move(other.coeffs_);
    values_ok_ = other.values_ok_;
    coeffs_ok_ = other.coeffs_ok_;
    return *this;
  }

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return comps_; }
  std::size_t component_size() const noexcept { return grid_.size(); }

  std::span<const double> values() const {
    sync_values();
    return values_;
  }
  std::span<const double> values(int c) const {
    return values().subspan(c * grid_.size(), grid_.size());
  }
  std::span<const cplx> coeffs() const {
    sync_coeffs();
    return coeffs_;
  }
  std::span<const cplx> coeffs(int c) const {
    return coeffs().subspan(c * grid_.size(), grid_.size());
  }

  std::span<double> mutable_values() {
    sync_values();
    coeffs_ok_ = false;
    return values_;
  }
  std::span<cplx> mutable_coeffs() {
    sync_coeffs();
    values_ok_ = false;
    return coeffs_;
  }

  SpectralField component(int c) const {
    if (c < 0 || c >= comps_) throw UsageError("component index out of range");
    auto v = values(c);
    return from_values(grid_, 1, std::vector<double>(v.begin(), v.end()));
  }

  /// Spatial mean of component c (zero mode / N^d).
  double mean(int c = 0) const {
    auto v = values(c);
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }

  double sup_norm() const {
    double m = 0.0;
    for (double x : values()) m = std::max(m, std::abs(x));
    return m;
  }

  /// Largest imaginary part produced by inverse-transforming the cached
  /// coefficients, relative to the field magnitude. Zero-ish iff the
  /// coefficients are Hermitian.
  double hermitian_defect() const {
    auto cf = coeffs();
    std::vector<cplx> out(grid_.size());
    double imag = 0.0, mag = 0.0;
    for (int c = 0; c < comps_; ++c) {
      detail::inverse(grid_.dim(), grid_.points(), cf.subspan(c * grid_.size(), grid_.size()), out);
      for (const auto& z : out) {
        imag = std::max(imag, std::abs(z.imag()));
        mag = std::max(mag, std::abs(z.real()));
      }
    }
    return mag > 0.0 ? imag / mag : imag;
  }

  SpectralField& operator+=(const SpectralField& o) { return axpy(1.0, o); }
  SpectralField& operator-=(const SpectralField& o) { return axpy(-1.0, o); }
  SpectralField& operator*=(double s) {
    for (double& x : mutable_values()) x *= s;
    return *this;
  }

  /// this += a * o, on node values.
  SpectralField& axpy(double a, const SpectralField& o) {
    require_same_shape(o);
    auto ov = o.values();
    auto v = mutable_values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += a * ov[i];
    return *this;
  }

  void require_same_shape(const SpectralField& o) const {
    if (!(grid_ == o.grid_)) throw UsageError("fields live on different grids");
    if (comps_ != o.comps_) throw UsageError("fields have different componentry");
  }

private:
  struct Uninit {};
  SpectralField(Grid grid, int components, Uninit)
      : grid_(grid), comps_(components), values_ok_(false), coeffs_ok_(false) {
    if (components < 1) throw UsageError("field needs at least one component");
  }

  void sync_values() const {
    std::lock_guard lock(mutex_);
    if (values_ok_) return;
    const std::size_t n = grid_.size();
    values_.assign(n * comps_, 0.0);
    std::vector<cplx> out(n);
    for (int c = 0; c < comps_; ++c) {
      detail::inverse(grid_.dim(), grid_.points(), std::span<const cplx>(coeffs_).subspan(c * n, n), out);
      for (std::size_t i = 0; i < n; ++i) values_[c * n + i] = out[i].real();
    }
    values_ok_ = true;
  }

  void sync_coeffs() const {
    std::lock_guard lock(mutex_);
    if (coeffs_ok_) return;
    const std::size_t n = grid_.size();
    coeffs_.assign(n * comps_, cplx{});
    std::vector<cplx> in(n);
    for (int c = 0; c < comps_; ++c) {
      for (std::size_t i = 0; i < n; ++i) in[i] = values_[c * n + i];
      detail::forward(grid_.dim(), grid_.points(), in, std::span<cplx>(coeffs_).subspan(c * n, n));
    }
    coeffs_ok_ = true;
  }

  Grid grid_;
  int comps_;
  mutable std::vector<double> values_;
  mutable std::vector<cplx> coeffs_;
  mutable bool values_ok_;
  mutable bool coeffs_ok_;
  mutable std::mutex mutex_;
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
inline SpectralField operator*(double s, SpectralField a) { return a *= s; }

/// sup_x |a(x) - b(x)| over all components.
inline double sup_distance(const SpectralField& a, const SpectralField& b) {
  a.require_same_shape(b);
  auto av = a.values();
  auto bv = b.values();
  double m = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
  return m;
}

/// Grid quadrature of a scalar field over the torus.
inline double integral(const SpectralField& f, int c = 0) {
  return f.mean(c) * f.grid().volume();
}

/// L^2 pairing ⟨f, g⟩ over the torus, summed over components.
inline double inner_product(const SpectralField& f, const SpectralField& g) {
  f.require_same_shape(g);
  auto fv = f.values();
  auto gv = g.values();
  double s = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) s += fv[i] * gv[i];
  return s * f.grid().cell_volume();
}

} // namespace mckean::spectral
