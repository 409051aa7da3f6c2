#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "mckean/drift/mollify.hpp"
#include "mckean/fp/picard.hpp"

namespace mckean::fp {

struct StabilityResult {
  double distance;         // sup_t ‖v¹(t) − v²(t)‖_α
  double drift_distance;   // ‖b¹ − b²‖_{C_T C^{−β}}
  double ratio;
};

inline double drift_distance(const Drift& b1, const Drift& b2, const TimeGrid& tg, double beta) {
  if (!(b1.grid() == b2.grid())) throw UsageError("drifts live on different grids");
  const bool both_static =
      b1.time_modulation().mode == drift::TimeMode::Static && b2.time_modulation().mode == drift::TimeMode::Static;
  if (both_static) return besov::besov(b1.field() - b2.field(), -beta);
  double m = 0.0;
  for (double t : tg.points()) m = std::max(m, besov::besov(b1.at(t) - b2.at(t), -beta));
  return m;
}

inline StabilityResult compare_solutions(const SolverResult& s1, const SolverResult& s2, const Drift& b1,
                                         const Drift& b2, const SolverParams& params) {
  double dist = 0.0;
  for (double x : node_distances(s1.v, s2.v, params.alpha)) dist = std::max(dist, x);
  const double db = drift_distance(b1, b2, params.time_grid, params.beta);
  double ratio = 0.0;
  if (db > 0.0)
    ratio = dist / db;
  else if (dist > 0.0)
    ratio = std::numeric_limits<double>::infinity();
  return {dist, db, ratio};
}

inline StabilityResult stability_in_b(const SpectralField& v0, const Drift& b1, const Drift& b2, const Nonlinearity& F,
                                      const SolverParams& params) {
  if (!(b1.grid() == b2.grid())) throw UsageError("drifts live on different grids");
  const auto s1 = solve_picard(v0, b1, F, params);
  const auto s2 = solve_picard(v0, b2, F, params);
  return compare_solutions(s1, s2, b1, b2, params);
}

struct LadderRung {
  int n;
  double distance;
  double drift_distance;
  double ratio;
};

struct LadderResult {
  std::vector<LadderRung> rungs;
  int reference_n;
  bool decreasing = false;
  double ratio_bound = 0.0;   // max ratio over rungs relative to the coarsest rung
  bool pass = false;
};

/// Solves with b^n for each n and with b^{reference} (default 4·max n), and
/// compares each rung with the reference. Passes iff distances strictly
/// decrease and every ratio stays within `ratio_factor` of the coarsest one.
inline LadderResult stability_ladder(const SpectralField& v0, const Drift& b, const Nonlinearity& F,
                                     const SolverParams& params, const std::vector<int>& ns, int reference = 0,
                                     double ratio_factor = 2.0) {
  if (ns.empty()) throw UsageError("ladder needs at least one rung");
  if (reference == 0) reference = 4 * *std::max_element(ns.begin(), ns.end());
  const auto bref = drift::mollify(b, reference);
  const auto sref = solve_picard(v0, bref, F, params);
  LadderResult out{{}, reference};
  for (int n : ns) {
    const auto bn = drift::mollify(b, n);
    const auto s = solve_picard(v0, bn, F, params);
    const auto c = compare_solutions(s, sref, bn, bref, params);
    out.rungs.push_back({n, c.distance, c.drift_distance, c.ratio});
  }
  out.decreasing = true;
  for (std::size_t i = 1; i < out.rungs.size(); ++i)
    out.decreasing = out.decreasing && out.rungs[i].distance < out.rungs[i - 1].distance;
  const double first = out.rungs.front().ratio;
  double worst = 0.0;
  for (const auto& r : out.rungs) worst = std::max(worst, r.ratio);
  out.ratio_bound = first > 0.0 ? worst / first : std::numeric_limits<double>::infinity();
  out.pass = out.decreasing && out.ratio_bound <= ratio_factor;
  return out;
}

} // namespace mckean::fp
