#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mckean/besov/estimates.hpp"
#include "mckean/fp/mild.hpp"
#include "mckean/fp/mittag_leffler.hpp"

namespace mckean::fp {

struct SolverParams {
  double alpha = 0.4;
  double beta = 0.2;
  double rho = 0.0;                 // weight of the d_ρ stopping rule
  double M = std::numeric_limits<double>::infinity();
  TimeGrid time_grid{0.25, 200};
  double picard_tol = 1e-8;
  int picard_max_iters = 200;
  bool density_mode = false;
  double c = 1.0;                   // working constant of the analytic bounds

  double theta() const noexcept { return 0.5 * (1.0 - alpha - beta); }

  void validate() const {
    if (!(beta >= 0.0 && beta < 0.5)) throw DomainError("β must lie in [0, 1/2)");
    if (!(alpha > beta && alpha < 1.0 - beta)) throw DomainError("α ∈ (β, 1−β) violated");
    if (!(rho >= 0.0)) throw DomainError("ρ must be >= 0");
    if (!(picard_tol > 0.0)) throw DomainError("picard_tol must be > 0");
    if (picard_max_iters < 1) throw DomainError("picard_max_iters must be >= 1");
    if (!(c > 0.0)) throw DomainError("working constant c must be > 0");
  }
};

struct ContractionParams {
  double theta;
  int log2_rho0;   // ρ0 = 2^log2_rho0
  double rho0;
  double M_star;
  double c;
};

inline void require_exponents(double alpha, double beta) {
  if (!(alpha > beta && alpha < 1.0 - beta)) throw DomainError("α ∈ (β, 1−β) violated");
}

/// ρ0: smallest power of two with 2c‖b‖Γ(θ)ρ0^{−θ} ≤ 1/2. M_* is the larger of
/// v0_norm and the ball quotient x/(1 − 2x), x = c‖b‖Γ(θ)ρ0^{−θ}, replaced by
/// its supremum 1/2 once ρ0 > 1 so that M_* is nondecreasing in ‖b‖.
inline ContractionParams pick_contraction_params(double b_norm, double alpha, double beta, double v0_norm,
                                                 double c = 1.0) {
  require_exponents(alpha, beta);
  if (!(b_norm >= 0.0) || !(v0_norm >= 0.0)) throw DomainError("norms must be nonnegative");
  const double theta = 0.5 * (1.0 - alpha - beta);
  const double base = c * b_norm * std::tgamma(theta);
  int k = 0;
  if (base > 0.0) {
    const double need = std::log2(4.0 * base) / theta;
    k = std::max(0, static_cast<int>(std::ceil(need - 1e-12)));
    while (k > 0 && 2.0 * base * std::exp2(-theta * (k - 1)) <= 0.5) --k;
    while (2.0 * base * std::exp2(-theta * k) > 0.5) ++k;
  }
  const double x = base * std::exp2(-theta * k);
  const double quotient = k == 0 ? x / (1.0 - 2.0 * x) : 0.5;
  return {theta, k, std::exp2(k), std::max(v0_norm, quotient), c};
}

/// K = [c‖v0‖_α + c‖b‖T]·E_η(c‖b‖Γ(1)T), η = (1−α−β)/2.
inline double apriori_bound(double v0_norm, double b_norm, double alpha, double beta, double T, double c = 1.0) {
  require_exponents(alpha, beta);
  const double eta = 0.5 * (1.0 - alpha - beta);
  return (c * v0_norm + c * b_norm * T) * mittag_leffler(eta, c * b_norm * T);
}

/// Working constant: the fitted Schauder constant for the smoothing step
/// C^{−β−1} → C^α used by the contraction argument, floored at 1.
inline double fitted_working_constant(double alpha, double beta, std::uint64_t seed = 1, double* fitted = nullptr) {
  besov::EstimateParams p;
  p.gamma = -beta - 1.0;
  p.theta = 0.5 * (alpha + beta + 1.0);
  p.trials = 128;
  p.seed = seed;
  const double fit = besov::run_estimate(besov::EstimateKind::Schauder, p).fitted_constant;
  if (fitted) *fitted = fit;
  return std::max(1.0, fit);
}

struct SolverResult {
  Trajectory v;
  std::vector<double> iterates;                       // d_ρ(w_{m+1}, w_m) at params.rho
  std::vector<std::vector<double>> increment_norms;   // per iteration: ‖w_{m+1}(t_k) − w_m(t_k)‖_α
  SolverParams params;
  double apriori_K = 0.0;
  double v0_norm = 0.0;
  double b_norm = 0.0;
  double sup_norm = 0.0;               // sup_t ‖v(t)‖_α
  double contraction_hat = 0.0;
  double fixed_point_residual = 0.0;   // d_ρ(J(w*), w*)
  int iterations = 0;
  std::vector<double> residuals;       // filled by weak_residual
  Drift drift;
  Nonlinearity F;

  Trajectory w() const { return v - heat_flow(v[0], v.time); }

  /// log d_ρ(w_{m+1}, w_m) for iteration m at an arbitrary weight.
  double log_increment(std::size_t m, double rho) const {
    return log_weighted_sup(increment_norms.at(m), v.time, rho);
  }

  /// Successive ratios d_ρ(w_{m+1}, w_m)/d_ρ(w_m, w_{m−1}) for m ≥ 1. Node
  /// increments at or below `floor` count as roundoff. The list ends once the
  /// node attaining the previous weighted sup has dropped to roundoff, since
  /// from then on the ratio compares different nodes.
  std::vector<double> ratios(double rho, double floor = 0.0) const {
    std::vector<double> out;
    auto dominant = [&](std::size_t m) {
      const auto& n = increment_norms.at(m);
      std::size_t best = n.size();
      double lb = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n.size(); ++k)
        if (n[k] > floor && std::log(n[k]) - rho * v.time.at(k) > lb) {
          lb = std::log(n[k]) - rho * v.time.at(k);
          best = k;
        }
      return std::pair{best, lb};
    };
    for (std::size_t m = 1; m < increment_norms.size(); ++m) {
      const auto [kb, lb] = dominant(m - 1);
      const auto [ka, la] = dominant(m);
      if (kb == increment_norms[m].size() || ka == increment_norms[m].size()) break;
      if (increment_norms[m][kb] <= floor) break;
      out.push_back(std::exp(la - lb));
    }
    return out;
  }
};

namespace detail {

inline void require_density(const SpectralField& v0) {
  for (double x : v0.values())
    if (x < 0.0) throw UsageError("density mode: initial datum must be nonnegative");
  if (std::abs(spectral::integral(v0) - 1.0) > 1e-10) throw UsageError("density mode: initial datum must have mass 1");
}

inline double median(std::vector<double> x) {
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

} // namespace detail

/// Picard iteration w_{m+1} = J(w_m) from w_0 (zero unless given) until
/// d_ρ(w_{m+1}, w_m) ≤ picard_tol; returns v = w* + P·v0.
inline SolverResult solve_picard(const SpectralField& v0, const Drift& b, const Nonlinearity& F,
                                 const SolverParams& params, const std::optional<Trajectory>& start = std::nullopt) {
  params.validate();
  if (v0.components() != 1) throw UsageError("initial datum must be scalar");
  if (!(b.grid() == v0.grid())) throw UsageError("drift and initial datum live on different grids");
  if (params.density_mode) detail::require_density(v0);
  const auto& tg = params.time_grid;
  const auto heat = heat_flow(v0, tg);
  Trajectory w = start ? *start : Trajectory::zeros(tg, v0.grid());
  w.require_compatible(heat);

  std::vector<double> history;
  std::vector<std::vector<double>> norms;
  const double ltol = std::log(params.picard_tol);
  bool converged = false;
  for (int m = 0; m < params.picard_max_iters; ++m) {
    auto next = mild_map_J(w, heat, v0, b, F);
    norms.push_back(node_distances(next, w, params.alpha));
    const double ld = log_weighted_sup(norms.back(), tg, params.rho);
    history.push_back(std::exp(ld));
    w = std::move(next);
    if (ld <= ltol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "Picard iteration did not reach " << params.picard_tol << " within " << params.picard_max_iters
       << " iterations (last distance " << history.back() << ")";
    throw IterationFailure(os.str(), history);
  }

  const double residual = weighted_distance(mild_map_J(w, heat, v0, b, F), w, params.rho, params.alpha);
  SolverResult r{w + heat, std::move(history), std::move(norms), params, 0.0, 0.0, 0.0, 0.0, 0.0, residual,
                 0, {}, b, F};
  r.iterations = static_cast<int>(r.iterates.size());
  r.v0_norm = besov::besov(v0, params.alpha);
  r.b_norm = b.norm(-params.beta);
  r.sup_norm = sup_besov(r.v, params.alpha);
  try {
    r.apriori_K = apriori_bound(r.v0_norm, r.b_norm, params.alpha, params.beta, tg.horizon(), params.c);
  } catch (const RangeError&) {
    r.apriori_K = std::numeric_limits<double>::infinity();  // E_η outside the evaluable range
  }
  r.contraction_hat = detail::median(r.ratios(params.rho, 1e-12 * (1.0 + r.v0_norm)));
  return r;
}

} // namespace mckean::fp
