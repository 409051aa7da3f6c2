#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mckean/drift/mollify.hpp"
#include "mckean/particles/kde.hpp"
#include "mckean/particles/simulate.hpp"
#include "test_support.hpp"

namespace mckean::particles {
namespace {

constexpr double kPi = std::numbers::pi;
const Grid kGrid(1, 512, 2 * kPi);

SpectralField density(const Grid& g, double var = 0.3) { return testing::wrapped_gaussian(g, kPi, var); }

fp::SolverResult solve(const SpectralField& v0, const Drift& b, const Nonlinearity& F, int steps, double T = 0.25) {
  fp::SolverParams p;
  p.time_grid = spectral::TimeGrid(T, steps);
  return fp::solve_picard(v0, b, F, p);
}

// ---------------------------------------------------------------- interpolation and sampling

TEST(PeriodicCubic, ReproducesNodesAndSmoothFields) {
  for (int d : {1, 2}) {
    Grid g(d, 64, 2 * kPi);
    auto f = testing::random_trig_field(g, 1, 3, 3);
    PeriodicCubic I(f);
    double x[2];
    for (std::size_t n = 0; n < g.size(); n += 7) {
      for (int a = 0; a < d; ++a) x[a] = g.coordinate(n, a);
      EXPECT_NEAR(I(std::span<const double>(x, d)), f.values()[n], 1e-12);
    }
    double err = 0.0;
    for (int i = 0; i < 200; ++i) {
      x[0] = 0.0371 * i;
      x[1] = 6.2 - 0.029 * i;
      double exact = 0.0;
      // Re-evaluate the trig field at an off-grid point by its Fourier series.
      auto cf = f.coeffs();
      for (std::size_t m = 0; m < g.size(); ++m) {
        int idx[2];
        g.unflatten(m, idx);
        double phase = g.wavenumber(idx[0]) * x[0] + (d == 2 ? g.wavenumber(idx[1]) * x[1] : 0.0);
        exact += (cf[m] * std::polar(1.0, phase)).real();
      }
      exact /= static_cast<double>(g.size());
      err = std::max(err, std::abs(I(std::span<const double>(x, d)) - exact));
    }
    EXPECT_LT(err, 5e-3 * f.sup_norm()) << "d = " << d;
  }
}

TEST(SampleInitial, MatchesTheMomentsOfTheDensity) {
  const std::size_t n = 100000;
  auto e = sample_initial(density(kGrid), n, 7);
  auto [m, v] = axis_moments(e, 0);
  EXPECT_NEAR(m, kPi, 3 * std::sqrt(0.3 / n));
  EXPECT_NEAR(v, 0.3, 3 * 0.3 * std::sqrt(2.0 / n));
  for (double x : e.positions) {
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 2 * kPi);
  }
}

TEST(SampleInitial, RejectionSamplerIn2DMatchesMoments) {
  Grid g(2, 64, 2 * kPi);
  const std::size_t n = 40000;
  auto e = sample_initial(testing::wrapped_gaussian(g, kPi, 0.4), n, 3);
  for (int a = 0; a < 2; ++a) {
    auto [m, v] = axis_moments(e, a);
    EXPECT_NEAR(m, kPi, 3 * std::sqrt(0.4 / n));
    EXPECT_NEAR(v, 0.4, 3 * 0.4 * std::sqrt(2.0 / n) + 2e-3);
  }
}

TEST(SampleInitial, RejectsInvalidDensities) {
  EXPECT_THROW(sample_initial(-1.0 * density(kGrid), 10, 1), DomainError);
  EXPECT_THROW(sample_initial(SpectralField(kGrid, 1), 10, 1), DomainError);
  EXPECT_THROW(sample_initial(density(kGrid), 0, 1), DomainError);
}

// ---------------------------------------------------------------- frozen simulation

TEST(SimulateFrozen, ZeroDriftGivesBrownianParticles) {
  const std::size_t n = 100000;
  const double T = 0.25;
  auto v0 = density(kGrid);
  auto r = solve(v0, drift::zero_drift(kGrid), Nonlinearity::arctan(), 50, T);
  auto traj = simulate_frozen(r, drift::zero_drift(kGrid), Nonlinearity::arctan(), n, T / 100, 11);
  ASSERT_EQ(traj.snapshots.size(), 2u);
  auto [m, v] = axis_moments(traj.at(T), 0);
  EXPECT_NEAR(v, 0.3 + T, 3 * (0.3 + T) * std::sqrt(2.0 / n));
  EXPECT_NEAR(m, kPi, 3 * std::sqrt((0.3 + T) / n));
}

TEST(SimulateFrozen, ZeroGainIsTheZeroDriftRun) {
  auto v0 = density(kGrid);
  auto b = drift::mollify(drift::synthesize(kGrid, -0.2, 1), 64);
  auto r = solve(v0, b, Nonlinearity::constant(0.0), 20);
  auto a = simulate_frozen(r, b, Nonlinearity::constant(0.0), 2000, r.v.time.step(), 5);
  auto z = simulate_frozen(r, drift::zero_drift(kGrid), Nonlinearity::arctan(), 2000, r.v.time.step(), 5);
  EXPECT_EQ(a.snapshots.back().positions, z.snapshots.back().positions);
}

TEST(SimulateFrozen, ConstantDriftMovesTheMeanAtRateC) {
  const std::size_t n = 100000;
  const double c = 0.5, T = 0.25;
  auto v0 = density(kGrid);
  auto b = drift::constant_drift(kGrid, {c});
  auto r = solve(v0, b, Nonlinearity::constant(1.0), 50, T);
  auto traj = simulate_frozen(r, b, Nonlinearity::constant(1.0), n, T / 50, 4);
  const double shift = axis_moments(traj.at(T), 0).first - axis_moments(traj.at(0.0), 0).first;
  EXPECT_NEAR(shift, c * T, 3 * std::sqrt(T / n));
}

TEST(SimulateFrozen, IsReproducibleAndValidatesInputs) {
  auto v0 = density(kGrid);
  auto b = drift::mollify(drift::synthesize(kGrid, -0.2, 2), 64);
  auto r = solve(v0, b, Nonlinearity::arctan(), 20);
  const double h = r.v.time.step();
  auto a = simulate_frozen(r, b, Nonlinearity::arctan(), 3000, h / 2, 9, {0.0, 0.125, 0.25});
  auto c = simulate_frozen(r, b, Nonlinearity::arctan(), 3000, h / 2, 9, {0.0, 0.125, 0.25});
  ASSERT_EQ(a.snapshots.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.snapshots[i].positions, c.snapshots[i].positions);
  EXPECT_THROW(simulate_frozen(r, b, Nonlinearity::arctan(), 10, h / 2.5, 1), UsageError);
  auto bad = r;
  bad.iterates.back() = 1.0;
  EXPECT_THROW(simulate_frozen(bad, b, Nonlinearity::arctan(), 10, h, 1), UsageError);
}

TEST(SimulateFrozen, WeakErrorIsFirstOrderInTheStep) {
  // Linear Fokker-Planck (F ≡ 1, smooth b): E cos X_T against ⟨cos, v(T)⟩
  // from a finely resolved PDE solve.
  const Grid g(1, 128, 2 * kPi);
  const double T = 0.5;
  auto v0 = density(g, 0.2);
  auto b = Drift(SpectralField::sample(g, 1, [](auto x, int) { return 1.5 * std::sin(x[0]); }), 1.0);
  const auto F = Nonlinearity::constant(1.0);
  auto ref = solve(v0, b, F, 400, T);
  auto phi = SpectralField::sample(g, 1, [](auto x, int) { return std::cos(x[0]); });
  const double exact = spectral::inner_product(phi, ref.v[400]);
  auto coarse = solve(v0, b, F, 5, T);
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025}) {
    auto traj = simulate_frozen(coarse, b, F, 400000, dt, 21);
    double s = 0.0;
    for (double x : traj.at(T).positions) s += std::cos(x);
    err.push_back(std::abs(s / 400000 - exact));
  }
  // Monte-Carlo standard error of the mean of cos is below 1.2e-3.
  EXPECT_GT(err[0], 5e-3);
  EXPECT_LT(err[2], err[0]);
  EXPECT_GT(err[0] / err[2], 2.0);
  EXPECT_LT(err[0] / err[2], 8.0);
}

// ---------------------------------------------------------------- interacting system

TEST(Interaction, SingleParticleSeesTheKernelAtZero) {
  const double eps = 0.05;
  double wrap = 0.0;
  for (int p = -3; p <= 3; ++p) wrap += std::exp(-p * p * 4 * kPi * kPi / (2 * eps));
  const double expected = wrap / std::sqrt(2 * kPi * eps);
  ParticleEnsemble e{kGrid, {1.234}, 0.0, 1, 0};
  EXPECT_NEAR(interaction_density(e, eps, InteractionMethod::Direct)[0], expected, 1e-12);
  EXPECT_NEAR(interaction_density(e, eps, InteractionMethod::Spectral)[0], expected, 1e-10);
}

TEST(Interaction, SingleParticleStepUsesTheClosedFormGain) {
  const double eps = 0.05, c = 0.7, dt = 0.01;
  auto v0 = density(kGrid);
  auto traj = simulate_interacting(v0, drift::constant_drift(kGrid, {c}), Nonlinearity::arctan(), 1, eps, dt, dt, 3);
  const double x0 = traj.snapshots.front().positions[0];
  const double gain = std::atan(1.0 / std::sqrt(2 * kPi * eps));
  const double z = util::CounterRng(3).normal_pair(0, 0, kNoiseStream).first;
  EXPECT_NEAR(traj.snapshots.back().positions[0], wrap(x0 + gain * c * dt + std::sqrt(dt) * z, 2 * kPi), 1e-12);
}

TEST(Interaction, ZeroDriftIsTheBrownianEnsemble) {
  auto v0 = density(kGrid);
  auto r = solve(v0, drift::zero_drift(kGrid), Nonlinearity::arctan(), 10);
  auto frozen = simulate_frozen(r, drift::zero_drift(kGrid), Nonlinearity::arctan(), 500, r.v.time.step(), 8);
  auto inter = simulate_interacting(v0, drift::zero_drift(kGrid), Nonlinearity::arctan(), 500, 0.05,
                                    r.v.time.step(), 0.25, 8);
  EXPECT_EQ(frozen.snapshots.back().positions, inter.snapshots.back().positions);
}

TEST(Interaction, SpectralSumMatchesTheDirectSum) {
  auto e = sample_initial(density(kGrid), 5000, 12);
  const auto direct = interaction_density(e, 0.05, InteractionMethod::Direct);
  const auto spectral = interaction_density(e, 0.05, InteractionMethod::Spectral);
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.size(); ++i) worst = std::max(worst, std::abs(direct[i] / spectral[i] - 1.0));
  EXPECT_LE(worst, 1e-8);
  Grid g2(2, 64, 2 * kPi);
  auto e2 = sample_initial(testing::wrapped_gaussian(g2, kPi, 0.5), 400, 2);
  const auto d2 = interaction_density(e2, 0.2, InteractionMethod::Direct);
  const auto s2 = interaction_density(e2, 0.2, InteractionMethod::Spectral);
  for (std::size_t i = 0; i < d2.size(); ++i) ASSERT_NEAR(d2[i] / s2[i], 1.0, 1e-8);
}

TEST(Interaction, UnresolvedKernelIsAResolutionError) {
  const Grid coarse(1, 64, 2 * kPi);
  auto v0 = density(coarse);
  EXPECT_THROW(simulate_interacting(v0, drift::zero_drift(coarse), Nonlinearity::arctan(), 10, 1e-3, 0.01, 0.1, 1),
               ResolutionError);
  EXPECT_THROW(simulate_interacting(v0, drift::zero_drift(coarse), Nonlinearity::arctan(), 10, 0.0, 0.01, 0.1, 1),
               DomainError);
}

// ---------------------------------------------------------------- KDE

TEST(Kde, SingleParticleIsAWrappedGaussian) {
  const double x0 = kGrid.coordinate(100, 0), h = 0.05;
  ParticleEnsemble e{kGrid, {x0}, 0.0, 1, 0};
  auto k = kde_density(e, kGrid, h);
  EXPECT_NEAR(spectral::integral(k.field), 1.0, 1e-10);
  for (std::size_t n = 0; n < kGrid.size(); ++n)
    ASSERT_NEAR(k.field.values()[n], testing::wrapped_gaussian_1d(kGrid.coordinate(n, 0), x0, h * h, 2 * kPi), 1e-8);
}

TEST(Kde, MatchesTheDirectKernelSum) {
  auto e = sample_initial(density(kGrid), 1000, 5);
  const double h = 0.1;
  auto k = kde_density(e, kGrid, h);
  for (std::size_t n = 0; n < kGrid.size(); n += 3) {
    double s = 0.0;
    for (double x : e.positions) s += testing::wrapped_gaussian_1d(kGrid.coordinate(n, 0), x, h * h, 2 * kPi);
    ASSERT_NEAR(k.field.values()[n], s / 1000, 1e-8);
  }
  EXPECT_NEAR(spectral::integral(k.field), 1.0, 1e-10);
  EXPECT_GE(*std::min_element(k.field.values().begin(), k.field.values().end()), -1e-12);
}

TEST(Kde, UniformSamplesStayInTheBinomialBand) {
  const std::size_t n = 10000;
  const double h = 0.1, L = 2 * kPi;
  ParticleEnsemble e{kGrid, std::vector<double>(n), 0.0, 3, 0};
  const util::CounterRng rng(3);
  for (std::size_t i = 0; i < n; ++i) e.positions[i] = rng.uniform(i) * L;
  auto k = kde_density(e, kGrid, h);
  // Var of a KDE at a point under uniform sampling: (∫K² /L − 1/L²)/N.
  const double sd = std::sqrt((1.0 / (2 * h * std::sqrt(kPi) * L) - 1.0 / (L * L)) / n);
  int outside = 0;
  double worst = 0.0;
  for (double v : k.field.values()) {
    const double z = std::abs(v - 1.0 / L) / sd;
    worst = std::max(worst, z);
    if (z > 3.0) ++outside;
  }
  EXPECT_LE(outside, static_cast<int>(0.02 * kGrid.size()));
  EXPECT_LT(worst, 4.5);
}

TEST(Kde, BandwidthBelowResolutionIsRejected) {
  ParticleEnsemble e{kGrid, {1.0}, 0.0, 1, 0};
  EXPECT_THROW(kde_density(e, kGrid, kGrid.spacing()), ResolutionError);
  auto big = sample_initial(density(kGrid), 5000, 1);
  EXPECT_GE(default_bandwidth(big, kGrid), 2 * kGrid.spacing());
}

// ---------------------------------------------------------------- law vs PDE

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (std::log(xs[i]) - mx) * (std::log(ys[i]) - my);
    sxx += (std::log(xs[i]) - mx) * (std::log(xs[i]) - mx);
  }
  return sxy / sxx;
}

TEST(LawVsPde, SamplingErrorScalesLikeInverseRootN) {
  auto v0 = density(kGrid);
  auto r = solve(v0, drift::zero_drift(kGrid), Nonlinearity::arctan(), 20);
  const double h = 0.1;
  std::vector<double> ns, l1_0, l1_T;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    auto traj = simulate_frozen(r, drift::zero_drift(kGrid), Nonlinearity::arctan(), n, r.v.time.step(), 17);
    auto d = law_vs_pde(traj, r, h);
    ns.push_back(static_cast<double>(n));
    l1_0.push_back(d[0].l1);
    l1_T.push_back(d[1].l1);
  }
  EXPECT_NEAR(fitted_slope(ns, l1_0), -0.5, 0.15);
  EXPECT_NEAR(fitted_slope(ns, l1_T), -0.5, 0.15);
  EXPECT_LT(l1_T.back(), 0.02);
}

TEST(LawVsPde, SnapshotsMustSitOnPdeNodes) {
  auto v0 = density(kGrid);
  auto r = solve(v0, drift::zero_drift(kGrid), Nonlinearity::arctan(), 10);
  auto traj = simulate_frozen(r, drift::zero_drift(kGrid), Nonlinearity::arctan(), 100, r.v.time.step() / 2, 1,
                              {0.0, r.v.time.step() / 2});
  EXPECT_THROW(law_vs_pde(traj, r, 0.1), UsageError);
}

} // namespace
} // namespace mckean::particles
