#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mckean/errors.hpp"
#include "mckean/fp/mittag_leffler.hpp"
#include "mckean/spectral/grid.hpp"

namespace mckean::fp {

enum class GronwallVerdict { Pass, Fail, HypothesisViolated };

inline std::string to_string(GronwallVerdict v) {
  switch (v) {
    case GronwallVerdict::Pass: return "pass";
    case GronwallVerdict::Fail: return "fail";
    case GronwallVerdict::HypothesisViolated: return "hypothesis violated";
  }
  return "?";
}

struct GronwallReport {
  GronwallVerdict verdict;
  double hypothesis_excess;   // max_k of f − (a + g·Q), relative to max(1, rhs)
  double conclusion_excess;   // max_k of f − a·E_η(gΓ(η)t^η), same scaling
  std::size_t worst_node;
};

namespace detail {

/// Weights w_{n,j} with Σ_j w_{n,j} f_j = ∫_0^{t_n}(t_n − s)^{η−1} f̄(s) ds for
/// the piecewise-linear interpolant f̄ of the nodes; exact in s.
inline std::vector<double> product_weights(std::size_t n, double h, double eta) {
  std::vector<double> w(n + 1, 0.0);
  const double tn = static_cast<double>(n) * h;
  for (std::size_t j = 0; j < n; ++j) {
    const double b = tn - static_cast<double>(j) * h;  // t_n − t_j
    const double a = std::max(0.0, b - h);             // t_n − t_{j+1}
    const double ba = std::pow(b, eta), aa = std::pow(a, eta);
    const double plain = (ba - aa) / eta;
    const double ramp = (b * (ba - aa) / eta - (b * ba - a * aa) / (eta + 1.0)) / h;  // weight of f_{j+1}
    w[j] += plain - ramp;
    w[j + 1] += ramp;
  }
  return w;
}

} // namespace detail

/// Checks the fractional Gronwall implication on sampled data: if
/// f ≤ a + g∫_0^t (t−s)^{η−1} f ds holds at every node (quadrature on the
/// piecewise-linear interpolant), then f ≤ a E_η(g Γ(η) t^η) at every node.
/// Both comparisons allow tol·max(1, |right-hand side|).
inline GronwallReport gronwall_oracle(const std::vector<double>& f, const std::vector<double>& a,
                                      const std::vector<double>& g, const spectral::TimeGrid& tg, double eta,
                                      double tol = 1e-6) {
  const std::size_t m = tg.nodes();
  if (f.size() != m || a.size() != m || g.size() != m) throw UsageError("sampled functions must match the time grid");
  if (!(eta > 0.0)) throw DomainError("Gronwall index η must be > 0");
  for (std::size_t k = 0; k < m; ++k) {
    if (f[k] < 0.0 || a[k] < 0.0 || g[k] < 0.0) throw DomainError("Gronwall inputs must be nonnegative");
    if (k > 0 && (a[k] < a[k - 1] || g[k] < g[k - 1])) throw DomainError("a and g must be nondecreasing");
  }
  GronwallReport rep{GronwallVerdict::Pass, -1e300, -1e300, 0};
  const double h = tg.step();
  for (std::size_t n = 0; n < m; ++n) {
    const auto w = detail::product_weights(n, h, eta);
    double q = 0.0;
    for (std::size_t j = 0; j <= n; ++j) q += w[j] * f[j];
    const double rhs = a[n] + g[n] * q;
    const double excess = (f[n] - rhs) / std::max(1.0, std::abs(rhs));
    rep.hypothesis_excess = std::max(rep.hypothesis_excess, excess);
  }
  if (rep.hypothesis_excess > tol) {
    rep.verdict = GronwallVerdict::HypothesisViolated;
    return rep;
  }
  for (std::size_t n = 0; n < m; ++n) {
    const double t = tg.at(n);
    const double bound = a[n] * mittag_leffler(eta, g[n] * std::tgamma(eta) * std::pow(t, eta));
    const double excess = (f[n] - bound) / std::max(1.0, std::abs(bound));
    if (excess > rep.conclusion_excess) {
      rep.conclusion_excess = excess;
      rep.worst_node = n;
    }
  }
  rep.verdict = rep.conclusion_excess <= tol ? GronwallVerdict::Pass : GronwallVerdict::Fail;
  return rep;
}

} // namespace mckean::fp
