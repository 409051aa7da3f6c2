#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "mckean/besov/norms.hpp"
#include "mckean/drift/drift.hpp"
#include "mckean/errors.hpp"

namespace mckean::besov {

enum class EstimateKind { Schauder, SchauderDiff, Bernstein, GradSemigroup, Bony };

inline constexpr EstimateKind kAllEstimateKinds[] = {EstimateKind::Schauder, EstimateKind::SchauderDiff,
                                                     EstimateKind::Bernstein, EstimateKind::GradSemigroup,
                                                     EstimateKind::Bony};

inline std::string to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::Schauder: return "schauder";
    case EstimateKind::SchauderDiff: return "schauder_diff";
    case EstimateKind::Bernstein: return "bernstein";
    case EstimateKind::GradSemigroup: return "grad_semigroup";
    case EstimateKind::Bony: return "bony";
  }
  return "?";
}

inline EstimateKind parse_estimate_kind(const std::string& s) {
  for (auto k : kAllEstimateKinds)
    if (to_string(k) == s) return k;
  throw ValidationError("unknown estimate kind '" + s + "'");
}

/// Kinds with a time parameter sweep t; the others sweep the resolution N.
inline bool sweeps_time(EstimateKind k) {
  return k == EstimateKind::Schauder || k == EstimateKind::SchauderDiff || k == EstimateKind::GradSemigroup;
}

struct EstimateParams {
  double gamma = -0.2;
  double theta = 0.5;
  double alpha = 0.4;
  double beta = 0.2;
  int dim = 1;
  int points = 256;                          // fixed N for time sweeps
  double length = 2.0 * std::numbers::pi;
  std::vector<double> times = {1e-2, 2e-2, 5e-2, 1e-1};
  std::vector<int> resolutions = {128, 256, 512};
  int trials = 512;
  std::uint64_t seed = 1;
  double tolerance = 0.25;                   // allowed relative spread of fitted constants
};

struct EstimateRow {
  std::uint64_t seed;
  double sweep;
  double lhs;
  double rhs;
  double ratio;
};

struct EstimateReport {
  EstimateKind kind;
  EstimateParams params;
  std::vector<EstimateRow> rows;
  std::vector<std::pair<double, double>> fitted;  // sweep value → max ratio over trials
  double fitted_constant = 0.0;
  double worst_ratio = 0.0;
  double variation = 0.0;
  bool pass = false;

  void write_csv(std::ostream& os, bool header = true) const {
    const auto& p = params;
    if (header) os << "kind,seed,sweep,gamma,theta,alpha,beta,lhs,rhs,ratio\n";
    os << std::setprecision(12);
    for (const auto& r : rows)
      os << to_string(kind) << ',' << r.seed << ',' << r.sweep << ',' << p.gamma << ',' << p.theta << ','
         << p.alpha << ',' << p.beta << ',' << r.lhs << ',' << r.rhs << ',' << r.ratio << '\n';
    os << "# summary," << to_string(kind) << ",fitted_constant=" << fitted_constant
       << ",worst_ratio=" << worst_ratio << ",variation=" << variation << ",pass=" << (pass ? 1 : 0) << '\n';
  }
};

namespace detail {

inline void validate(EstimateKind kind, const EstimateParams& p) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw DomainError("estimate parameters: " + what);
  };
  need(p.trials >= 1, "trials >= 1");
  switch (kind) {
    case EstimateKind::Schauder:
      need(p.theta >= 0.0, "θ >= 0");
      require_supported_gamma(p.gamma);
      require_supported_gamma(p.gamma + 2 * p.theta);
      break;
    case EstimateKind::SchauderDiff:
      need(p.theta > 0.0 && p.theta < 1.0, "θ ∈ (0, 1)");
      require_supported_gamma(p.gamma);
      require_supported_gamma(p.gamma + 2 * p.theta);
      break;
    case EstimateKind::GradSemigroup:
      need(p.theta > 0.0 && p.theta < 1.0, "θ ∈ (0, 1)");
      require_supported_gamma(p.gamma);
      require_supported_gamma(p.gamma + 2 * p.theta - 1);
      break;
    case EstimateKind::Bernstein:
      require_supported_gamma(p.gamma);
      require_supported_gamma(p.gamma + 1);
      break;
    case EstimateKind::Bony:
      need(p.alpha > 0.0 && p.beta > 0.0, "α, β > 0");
      need(p.alpha - p.beta > 0.0, "α − β > 0");
      require_supported_gamma(p.alpha);
      require_supported_gamma(-p.beta);
      break;
  }
  if (sweeps_time(kind)) {
    need(p.times.size() >= 2, "at least two sweep times");
    for (double t : p.times) need(t > 0.0, "sweep times > 0");
  } else {
    need(p.resolutions.size() >= 2, "at least two sweep resolutions");
  }
}

inline double gradient_besov(const SpectralField& f, double gamma) {
  return besov(spectral::gradient(f), gamma);
}

/// (lhs, rhs) of one inequality instance.
inline std::pair<double, double> evaluate(EstimateKind kind, const EstimateParams& p, const Grid& g, double t,
                                          std::uint64_t seed) {
  using drift::synthesize_field;
  switch (kind) {
    case EstimateKind::Schauder: {
      auto f = synthesize_field(g, 1, p.gamma, seed);
      return {besov(spectral::heat_semigroup(f, t), p.gamma + 2 * p.theta), std::pow(t, -p.theta) * besov(f, p.gamma)};
    }
    case EstimateKind::SchauderDiff: {
      auto f = synthesize_field(g, 1, p.gamma + 2 * p.theta, seed);
      return {besov(spectral::heat_semigroup(f, t) - f, p.gamma),
              std::pow(t, p.theta) * besov(f, p.gamma + 2 * p.theta)};
    }
    case EstimateKind::GradSemigroup: {
      auto f = synthesize_field(g, 1, p.gamma, seed);
      return {gradient_besov(spectral::heat_semigroup(f, t), p.gamma + 2 * p.theta - 1),
              std::pow(t, -p.theta) * besov(f, p.gamma)};
    }
    case EstimateKind::Bernstein: {
      auto f = synthesize_field(g, 1, p.gamma + 1, seed);
      return {gradient_besov(f, p.gamma), besov(f, p.gamma + 1)};
    }
    case EstimateKind::Bony: {
      auto f = synthesize_field(g, 1, p.alpha, seed, 1.0, false);
      auto h = synthesize_field(g, 1, -p.beta, seed ^ 0x5bd1e995ULL);
      return {besov(spectral::pointwise_product(f, h), -p.beta), besov(f, p.alpha) * besov(h, -p.beta)};
    }
  }
  return {0.0, 1.0};
}

} // namespace detail

/// Evaluates LHS/RHS of one analytic estimate over random trial fields and a
/// sweep of t (fixed N) or of N. Passes iff the per-sweep-point constants
/// (max ratio over trials) vary by at most `tolerance` relative to their max.
inline EstimateReport run_estimate(EstimateKind kind, const EstimateParams& params) {
  detail::validate(kind, params);
  EstimateReport rep{kind, params, {}, {}, 0.0, 0.0, 0.0, false};
  const bool by_time = sweeps_time(kind);
  const std::size_t points = by_time ? params.times.size() : params.resolutions.size();
  for (std::size_t s = 0; s < points; ++s) {
    const Grid g(params.dim, by_time ? params.points : params.resolutions[s], params.length);
    const double t = by_time ? params.times[s] : 0.0;
    const double sweep = by_time ? t : static_cast<double>(g.points());
    double best = 0.0;
    for (int trial = 0; trial < params.trials; ++trial) {
      const std::uint64_t seed = params.seed + static_cast<std::uint64_t>(trial);
      auto [lhs, rhs] = detail::evaluate(kind, params, g, t, seed);
      const double ratio = rhs > 0.0 ? lhs / rhs : 0.0;
      rep.rows.push_back({seed, sweep, lhs, rhs, ratio});
      best = std::max(best, ratio);
    }
    rep.fitted.emplace_back(sweep, best);
  }
  double lo = rep.fitted.front().second, hi = lo;
  for (const auto& [_, c] : rep.fitted) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  rep.fitted_constant = hi;
  rep.worst_ratio = hi;
  rep.variation = hi > 0.0 ? (hi - lo) / hi : 0.0;
  rep.pass = rep.variation <= params.tolerance;
  return rep;
}

} // namespace mckean::besov
