#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mckean/besov/norms.hpp"
#include "mckean/errors.hpp"
#include "mckean/util/rng.hpp"

namespace mckean::drift {

using spectral::cplx;
using spectral::Grid;
using spectral::SpectralField;

enum class TimeMode { Static, Modulated };

struct TimeModulation {
  TimeMode mode = TimeMode::Static;
  double frequency = 0.0;  // ν, modulated mode only

  static TimeModulation fixed() { return {}; }
  static TimeModulation modulated(double nu) { return {TimeMode::Modulated, nu}; }

  double factor(double t) const {
    return mode == TimeMode::Static ? 1.0 : std::cos(2.0 * std::numbers::pi * frequency * t);
  }
};

/// Time-indexed d-component drift. Static drifts are constant in t;
/// modulated drifts are cos(2πνt)·field.
class Drift {
public:
  Drift(SpectralField field, double declared_regularity, TimeModulation time = {}, std::uint64_t seed = 0)
      : field_(std::move(field)), regularity_(declared_regularity), time_(time), seed_(seed) {
    if (field_.components() != field_.grid().dim())
      throw UsageError("drift must have d components");
  }

  const Grid& grid() const noexcept { return field_.grid(); }
  const SpectralField& field() const noexcept { return field_; }
  double declared_regularity() const noexcept { return regularity_; }
  const TimeModulation& time_modulation() const noexcept { return time_; }
  std::uint64_t seed() const noexcept { return seed_; }

  SpectralField at(double t) const {
    if (time_.mode == TimeMode::Static) return field_;
    return time_.factor(t) * field_;
  }

  bool is_zero() const { return field_.sup_norm() == 0.0; }

  /// ‖b‖_{C_T C^γ}; the modulation factor reaches 1 at t = 0.
  double norm(double gamma) const { return besov::besov(field_, gamma); }

private:
  SpectralField field_;
  double regularity_;
  TimeModulation time_;
  std::uint64_t seed_;
};

inline Drift zero_drift(const Grid& g) { return Drift(SpectralField(g, g.dim()), 0.0); }

/// b ≡ c, a constant vector.
inline Drift constant_drift(const Grid& g, const std::vector<double>& c) {
  if (static_cast<int>(c.size()) != g.dim()) throw UsageError("constant drift needs d components");
  return Drift(SpectralField::sample(g, g.dim(), [&](auto, int a) { return c[a]; }), 0.0);
}

struct SynthesisOptions {
  double amplitude = 1.0;
  bool zero_mean = true;
  bool zero_coefficients = false;
  bool allow_any_regularity = false;  // lifts the s ∈ (-1/2, 0) requirement
};

/// Random trigonometric series Σ_k g_k (1+|k|)^{-(d/2+s)} e^{iξ_k·x} with
/// standard complex Gaussian g_k (g_{-k} = conj g_k). Each coefficient is keyed
/// by (seed, component, integer wavevector), so a coarser grid carries the
/// truncation of the same series. Nyquist modes are zero.
inline SpectralField synthesize_field(const Grid& g, int components, double s, std::uint64_t seed,
                                      double amplitude = 1.0, bool zero_mean = true) {
  util::CounterRng rng(seed);
  const int d = g.dim();
  const double weight_exp = -(0.5 * d + s);
  const double total = static_cast<double>(g.size());
  std::vector<cplx> coeffs(g.size() * components, cplx{});
  auto canonical = [](int k0, int k1) { return k0 > 0 || (k0 == 0 && k1 > 0); };
  auto code = [](int k) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(k) + (1LL << 31)); };
  for (int c = 0; c < components; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      int idx[2];
      g.unflatten(i, idx);
      if (g.is_nyquist(idx[0]) || (d == 2 && g.is_nyquist(idx[1]))) continue;
      const int k0 = g.wavenumber(idx[0]);
      const int k1 = d == 2 ? g.wavenumber(idx[1]) : 0;
      if (k0 == 0 && k1 == 0) {
        if (zero_mean) continue;
        const double a = rng.normal_pair(code(0), code(0), static_cast<std::uint64_t>(c)).first;
        coeffs[c * g.size() + i] = amplitude * total * a;
        continue;
      }
      const bool canon = canonical(k0, k1);
      const int r0 = canon ? k0 : -k0, r1 = canon ? k1 : -k1;
      auto [a, b] = rng.normal_pair(code(r0), code(r1), static_cast<std::uint64_t>(c));
      cplx z(a, b);
      z /= std::numbers::sqrt2;
      if (!canon) z = std::conj(z);
      const double kabs = std::sqrt(static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1);
      coeffs[c * g.size() + i] = amplitude * total * std::pow(1.0 + kabs, weight_exp) * z;
    }
  return SpectralField::from_coeffs(g, components, std::move(coeffs));
}

/// Rough drift of declared regularity s ∈ (-1/2, 0).
inline Drift synthesize(const Grid& g, double s, std::uint64_t seed, TimeModulation time = {},
                        const SynthesisOptions& opt = {}) {
  if (!opt.allow_any_regularity && !(s > -0.5 && s < 0.0))
    throw DomainError("drift regularity s must lie in (-1/2, 0), got " + std::to_string(s));
  if (opt.zero_coefficients) return Drift(SpectralField(g, g.dim()), s, time, seed);
  return Drift(synthesize_field(g, g.dim(), s, seed, opt.amplitude, opt.zero_mean), s, time, seed);
}

/// Least-squares slope of log2(block sup) against j over the dyadic blocks
/// 0 ≤ j < j_max; minus the slope estimates the Besov regularity.
inline double block_slope(const SpectralField& f) {
  const auto sups = besov::block_sups(f);
  const int j_max = static_cast<int>(sups.size()) - 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int j = 0; j < j_max; ++j) {
    if (!(sups[j + 1] > 0.0)) continue;
    const double y = std::log2(sups[j + 1]);
    sx += j;
    sy += y;
    sxx += static_cast<double>(j) * j;
    sxy += j * y;
    ++m;
  }
  if (m < 2) return 0.0;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline double measured_regularity(const Drift& b) { return -block_slope(b.field()); }

/// Key-value record that regenerates a synthesized drift.
struct DriftSpec {
  std::uint64_t seed = 0;
  double s = -0.2;
  int d = 1;
  int N = 256;
  double L = 1.0;
  TimeModulation time{};
  double amplitude = 1.0;

  Drift build() const {
    SynthesisOptions opt;
    opt.amplitude = amplitude;
    return synthesize(Grid(d, N, L), s, seed, time, opt);
  }

  void write(std::ostream& os) const {
    boost::property_tree::ptree pt;
    pt.put("seed", seed);
    pt.put("s", s);
    pt.put("d", d);
    pt.put("N", N);
    pt.put("L", L);
    pt.put("time_mode", time.mode == TimeMode::Static ? "static" : "modulated");
    pt.put("frequency", time.frequency);
    pt.put("amplitude", amplitude);
    boost::property_tree::write_ini(os, pt);
  }

  static DriftSpec from_tree(const boost::property_tree::ptree& pt) {
    DriftSpec spec;
    spec.seed = pt.get<std::uint64_t>("seed", spec.seed);
    spec.s = pt.get<double>("s", spec.s);
    spec.d = pt.get<int>("d", spec.d);
    spec.N = pt.get<int>("N", spec.N);
    spec.L = pt.get<double>("L", spec.L);
    const auto mode = pt.get<std::string>("time_mode", "static");
    if (mode == "static") {
      spec.time = TimeModulation::fixed();
    } else if (mode == "modulated") {
      spec.time = TimeModulation::modulated(pt.get<double>("frequency", 1.0));
    } else {
      throw ValidationError("drift time_mode must be static or modulated, got " + mode);
    }
    spec.amplitude = pt.get<double>("amplitude", spec.amplitude);
    return spec;
  }

  static DriftSpec read(std::istream& is) {
    boost::property_tree::ptree pt;
    boost::property_tree::read_ini(is, pt);
    return from_tree(pt);
  }
};

} // namespace mckean::drift
