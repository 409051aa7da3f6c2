#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mckean/drift/mollify.hpp"
#include "test_support.hpp"

namespace mckean::drift {
namespace {

constexpr double kPi = std::numbers::pi;
const Grid kGrid(1, 512, 2 * kPi);

TEST(Synthesize, RegularityOutsideRangeIsDomainError) {
  EXPECT_THROW(synthesize(kGrid, -0.5, 1), DomainError);
  EXPECT_THROW(synthesize(kGrid, 0.0, 1), DomainError);
  EXPECT_THROW(synthesize(kGrid, 0.3, 1), DomainError);
  SynthesisOptions opt;
  opt.allow_any_regularity = true;
  EXPECT_NO_THROW(synthesize(kGrid, 1.5, 1, {}, opt));
}

TEST(Synthesize, ZeroCoefficientOverrideGivesZeroDrift) {
  SynthesisOptions opt;
  opt.zero_coefficients = true;
  auto b = synthesize(kGrid, -0.2, 9, {}, opt);
  EXPECT_TRUE(b.is_zero());
  EXPECT_EQ(b.norm(-0.2), 0.0);
}

TEST(Synthesize, IsAPureFunctionOfItsInputs) {
  auto a = synthesize(Grid(2, 64), -0.3, 11);
  auto b = synthesize(Grid(2, 64), -0.3, 11);
  auto c = synthesize(Grid(2, 64), -0.3, 12);
  for (std::size_t i = 0; i < a.field().values().size(); ++i) ASSERT_EQ(a.field().values()[i], b.field().values()[i]);
  EXPECT_GT(spectral::sup_distance(a.field(), c.field()), 0.0);
}

TEST(Synthesize, FieldIsRealZeroMeanAndNyquistFree) {
  for (int d : {1, 2}) {
    Grid g(d, 64, 3.0);
    auto b = synthesize(g, -0.25, 5);
    EXPECT_EQ(b.field().components(), d);
    EXPECT_LT(b.field().hermitian_defect(), 1e-12);
    for (int c = 0; c < d; ++c) EXPECT_LT(std::abs(b.field().mean(c)), 1e-14);
    auto cf = b.field().coeffs(0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      int idx[2];
      g.unflatten(i, idx);
      if (g.is_nyquist(idx[0]) || (d == 2 && g.is_nyquist(idx[1]))) {
        EXPECT_EQ(std::abs(cf[i]), 0.0);
      }
    }
  }
}

TEST(Synthesize, CoarseGridCarriesTheTruncatedSeries) {
  Grid coarse(1, 64, 2 * kPi), fine(1, 512, 2 * kPi);
  auto a = synthesize_field(coarse, 1, -0.2, 3);
  auto b = synthesize_field(fine, 1, -0.2, 3);
  for (int k = -31; k <= 31; ++k) {
    const auto ca = a.coeffs()[(k + 64) % 64] / 64.0;
    const auto cb = b.coeffs()[(k + 512) % 512] / 512.0;
    ASSERT_NEAR(std::abs(ca - cb), 0.0, 1e-14);
  }
}

double slope_of(double s, std::uint64_t seed) {
  return block_slope(synthesize(Grid(1, 4096, 2 * kPi), s, seed).field());
}

TEST(Synthesize, BlockSlopeTracksDeclaredRegularity) {
  // On a shared seed the Gaussian-maximum bias of the block sups is common to
  // both fields, so slope differences isolate the declared exponent gap.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double gap = slope_of(-0.1, seed) - slope_of(-0.45, seed);
    EXPECT_NEAR(gap, -0.35, 0.15) << "seed " << seed;
    const double mid = slope_of(-0.2, seed) - slope_of(-0.3, seed);
    EXPECT_NEAR(mid, -0.1, 0.15) << "seed " << seed;
  }
}

TEST(Synthesize, MeasuredRegularityIsBelowDeclaredByAtMostTheMaximumBias) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto b = synthesize(Grid(1, 4096, 2 * kPi), -0.2, seed);
    const double m = measured_regularity(b);
    EXPECT_LE(m, -0.2 + 0.05);
    EXPECT_GE(m, -0.2 - 0.35);
  }
}

TEST(Drift, ModulatedDriftIsLipschitzInTime) {
  const double nu = 1.5;
  auto b = synthesize(kGrid, -0.2, 2, TimeModulation::modulated(nu));
  const double bound = 2 * kPi * nu * b.norm(-0.4);
  for (auto [s, t] : {std::pair{0.0, 0.01}, std::pair{0.1, 0.13}, std::pair{0.2, 0.45}}) {
    const double lhs = besov::besov(b.at(t) - b.at(s), -0.4);
    EXPECT_LE(lhs, bound * (t - s) * (1 + 1e-12));
  }
  auto st = synthesize(kGrid, -0.2, 2);
  EXPECT_EQ(spectral::sup_distance(st.at(0.0), st.at(0.7)), 0.0);
}

TEST(Drift, SpecRecordRoundTrips) {
  DriftSpec spec;
  spec.seed = 77;
  spec.s = -0.35;
  spec.d = 2;
  spec.N = 32;
  spec.L = 1.5;
  spec.time = TimeModulation::modulated(2.0);
  std::stringstream ss;
  spec.write(ss);
  auto back = DriftSpec::read(ss);
  auto a = spec.build(), b = back.build();
  EXPECT_EQ(spectral::sup_distance(a.field(), b.field()), 0.0);
  EXPECT_EQ(b.time_modulation().frequency, 2.0);
}

TEST(Mollify, IsTheHeatSemigroupAtOneOverN) {
  auto b = synthesize(kGrid, -0.2, 4);
  for (int n : {1, 16, 300}) {
    auto m = mollify(b, n);
    auto ref = spectral::heat_semigroup(b.field(), 1.0 / n);
    for (std::size_t i = 0; i < ref.values().size(); ++i) ASSERT_EQ(m.field().values()[i], ref.values()[i]);
    EXPECT_TRUE(std::isfinite(m.sup_norm));
    EXPECT_TRUE(std::isfinite(m.gradient_sup));
    EXPECT_TRUE(std::isfinite(m.hessian_sup));
    EXPECT_GT(m.hessian_sup, 0.0);
  }
  EXPECT_THROW(mollify(b, 0), DomainError);
}

TEST(Mollify, ConvergesMonotonicallyOnSmoothDrift) {
  auto b = Drift(testing::random_trig_field(kGrid, 1, 8, 6), 1.0);
  double prev = 1e300;
  for (int n : {4, 16, 64, 256}) {
    const double e = spectral::sup_distance(mollify(b, n).field(), b.field());
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(Mollify, SmoothedNormGrowsAtMostLikeTheSchauderRate) {
  // ‖b^n‖_γ ≤ c n^{(γ+β)/2} ‖b‖_{−β}: the normalized ratio stays within a band.
  const double gamma = 0.5, beta = 0.45;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto b = synthesize(kGrid, -0.2, seed);
    const double base = b.norm(-beta);
    double lo = 1e300, hi = 0.0;
    for (int n : {4, 16, 64, 256}) {
      const double r = besov::besov(mollify(b, n).field(), gamma) / (std::pow(n, (gamma + beta) / 2) * base);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    EXPECT_LE(hi, 1.0);
    EXPECT_LE((hi - lo) / hi, 0.5) << "seed " << seed;
  }
}

TEST(MollificationRate, NeedsThreeIndices) {
  auto b = synthesize(kGrid, -0.2, 1);
  EXPECT_THROW(mollification_rate(b, 0.4, 0.2, {4, 16}), UsageError);
}

TEST(MollificationRate, RoughDriftMeetsTheExponentOnResolvedBlocks) {
  Grid g(1, 512, 16 * kPi);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto fit = mollification_rate(synthesize(g, -0.2, seed), 0.4, 0.2, {4, 16, 64, 256});
    EXPECT_TRUE(fit.rate_guaranteed);
    EXPECT_LE(fit.slope, fit.bound) << "seed " << seed;
    for (std::size_t i = 1; i < fit.distances.size(); ++i) EXPECT_LE(fit.distances[i], 1.01 * fit.distances[i - 1]);
    EXPECT_LT(fit.distances.back(), fit.distances.front());
  }
}

TEST(MollificationRate, EqualExponentsGuaranteeNothing) {
  auto fit = mollification_rate(synthesize(kGrid, -0.2, 1), 0.2, 0.2, {4, 16, 64});
  EXPECT_FALSE(fit.rate_guaranteed);
}

TEST(MollificationRate, SmoothDriftConvergesFaster) {
  SynthesisOptions opt;
  opt.allow_any_regularity = true;
  auto b = synthesize(kGrid, 1.0, 6, {}, opt);
  auto fit = mollification_rate(b, 0.4, -1.0, {4, 16, 64, 256});
  EXPECT_LE(fit.slope, -0.4 / 2);
}

} // namespace
} // namespace mckean::drift
