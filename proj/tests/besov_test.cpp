#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mckean/besov/estimates.hpp"
#include "mckean/besov/norms.hpp"
#include "test_support.hpp"

namespace mckean::besov {
namespace {

using testing::random_trig_field;

constexpr double kPi = std::numbers::pi;

// Naive O(N²) inverse DFT of one block of a 1D field; independent of FFTW.
std::vector<double> direct_block(const SpectralField& f, int j) {
  const Grid& g = f.grid();
  const int n = g.points();
  const int jm = max_block(g);
  auto cf = f.coeffs();
  std::vector<double> out(n, 0.0);
  for (int x = 0; x < n; ++x) {
    std::complex<double> acc{};
    for (int k = 0; k < n; ++k) {
      const double r = std::abs(static_cast<double>(g.wavenumber(k)));
      acc += lp_multiplier(j, jm, r) * cf[k] * std::polar(1.0, 2 * kPi * k * x / n);
    }
    out[x] = acc.real() / n;
  }
  return out;
}

TEST(Partition, MultipliersSumToOneEverywhere) {
  for (int n : {16, 256, 1024}) {
    const int jm = max_block(Grid(1, n));
    for (double r = 0.0; r <= n; r += 0.0137) {
      double s = 0.0;
      for (int j = -1; j <= jm; ++j) s += lp_multiplier(j, jm, r);
      ASSERT_NEAR(s, 1.0, 1e-15) << "r=" << r;
    }
  }
}

TEST(Partition, BlocksAreNonnegativeAndSmooth) {
  const int jm = 8;
  for (int j = -1; j <= jm; ++j)
    for (double r = 0.0; r < 600.0; r += 0.01) {
      const double v = lp_multiplier(j, jm, r);
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  EXPECT_EQ(chi(1.1), 1.0);
  EXPECT_EQ(chi(1.4), 0.0);
  EXPECT_NEAR(chi(1.25), 0.5, 1e-12);
}

TEST(Partition, ScalesThreeApartHaveDisjointSupport) {
  const int jm = max_block(Grid(1, 1024));
  for (int j = -1; j <= jm; ++j)
    for (int jj = j + 3; jj <= jm; ++jj)
      for (double r = 0.0; r < 1024.0; r += 0.05) ASSERT_EQ(lp_multiplier(j, jm, r) * lp_multiplier(jj, jm, r), 0.0);
}

TEST(Partition, UsableBlockCountIsNyquistLimited) {
  EXPECT_EQ(max_block(Grid(1, 8)), 1);
  EXPECT_EQ(max_block(Grid(1, 256)), 6);
  EXPECT_EQ(max_block(Grid(2, 512, 3.0)), 7);
}

TEST(Decompose, ReconstructsRandomFields) {
  for (int d : {1, 2}) {
    Grid g(d, d == 1 ? 512 : 64, 1.3);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal;
    std::vector<double> vals(g.size() * d);
    for (double& x : vals) x = normal(rng);
    auto f = SpectralField::from_values(g, d, vals);
    auto rec = decompose(f).reconstruct();
    EXPECT_LE(spectral::sup_distance(rec, f) / f.sup_norm(), 1e-10);
  }
}

TEST(Decompose, ConstantLivesInLowestBlock) {
  Grid g(1, 64);
  auto dec = decompose(SpectralField::constant(g, 1, 2.5));
  for (const auto& b : dec.blocks) {
    if (b.j == -1) {
      for (double v : b.field.values()) EXPECT_NEAR(v, 2.5, 1e-14);
    } else {
      EXPECT_LT(b.field.sup_norm(), 1e-14);
    }
  }
}

TEST(Decompose, SingleModeMatchesDirectSummation) {
  Grid g(1, 128, 2 * kPi);
  for (int k : {3, 5, 12, 40}) {
    auto f = SpectralField::sample(g, 1, [&](auto x, int) { return std::cos(k * x[0]); });
    auto dec = decompose(f);
    int significant = 0;
    for (const auto& b : dec.blocks) {
      auto oracle = direct_block(f, b.j);
      for (std::size_t i = 0; i < g.size(); ++i) ASSERT_NEAR(b.field.values()[i], oracle[i], 1e-12);
      const double expect = lp_multiplier(b.j, max_block(g), k);
      EXPECT_NEAR(b.field.sup_norm(), expect, 1e-12);
      if (b.field.sup_norm() > 1e-12) ++significant;
    }
    // modes in the interior of one annulus hit exactly one block
    if (k == 3 || k == 12) {
      EXPECT_EQ(significant, 1) << k;
    }
  }
}

TEST(BesovNorm, ZeroFieldHasZeroNorm) {
  for (double gamma : {-2.0, -0.3, 0.0, 1.7}) EXPECT_EQ(besov(SpectralField(Grid(2, 16)), gamma), 0.0);
}

TEST(BesovNorm, IsHomogeneous) {
  Grid g(1, 256);
  auto f = random_trig_field(g, 1, 3, 30);
  for (double lambda : {-3.0, 0.25, 7.0})
    EXPECT_NEAR(besov(lambda * f, -0.4), std::abs(lambda) * besov(f, -0.4), 1e-12 * besov(f, -0.4) * 8);
}

TEST(BesovNorm, UnsupportedExponentIsDomainError) {
  Grid g(1, 16);
  EXPECT_THROW(besov_norm(SpectralField(g), 2.5), DomainError);
  EXPECT_THROW(besov_norm(SpectralField(g), -2.01), DomainError);
}

TEST(BesovNorm, SingleModeProfileMatchesDirectSummation) {
  Grid g(1, 256, 2 * kPi);
  const double amp = 1.7, gamma = -0.35;
  const int k = 5;  // straddles blocks 2 and 3
  auto f = SpectralField::sample(g, 1, [&](auto x, int) { return amp * std::cos(k * x[0]); });
  auto prof = besov_norm(f, gamma);
  double norm = 0.0;
  for (const auto& [j, v] : prof.per_block) {
    auto blk = direct_block(f, j);
    double sup = 0.0;
    for (double x : blk) sup = std::max(sup, std::abs(x));
    const double oracle = std::exp2(j * gamma) * sup;
    EXPECT_NEAR(v, oracle, 1e-8);
    norm = std::max(norm, oracle);
  }
  EXPECT_NEAR(prof.norm, norm, 1e-8);
  EXPECT_GT(prof.per_block[3].second, 0.0);
  EXPECT_GT(prof.per_block[4].second, 0.0);
}

TEST(BesovNorm, NormIsMaxOfNonnegativeProfile) {
  Grid g(2, 32);
  auto f = random_trig_field(g, 2, 8, 6);
  auto prof = besov_norm(f, 0.3);
  double m = 0.0;
  for (const auto& [j, v] : prof.per_block) {
    EXPECT_GE(v, 0.0);
    m = std::max(m, v);
  }
  EXPECT_EQ(prof.norm, m);
}

TEST(BesovNorm, EmbeddingConstantIsTwoToTheGap) {
  Grid g(1, 512, 2 * kPi);
  for (unsigned seed = 0; seed < 20; ++seed) {
    auto f = drift::synthesize_field(g, 1, -0.3, seed, 1.0, seed % 2 == 0);
    for (auto [gp, gm] : {std::pair{0.5, -0.5}, std::pair{-0.1, -1.2}})
      EXPECT_LE(besov(f, gm), std::exp2(gp - gm) * besov(f, gp) * (1 + 1e-12));
  }
}

TEST(BesovNorm, SemigroupIsHolderContinuousInTime) {
  // ‖P_t f − P_s f‖_γ ≤ c (t−s)^θ ‖f‖_{γ+2θ}: every pair ratio is bounded by the
  // single-step ratio at lag t−s, and the fitted constant is stable across lags.
  Grid g(1, 256, 2 * kPi);
  const double gamma = -0.2, theta = 0.4;
  for (std::uint64_t seed : {3, 4, 5}) {
    auto f = drift::synthesize_field(g, 1, gamma + 2 * theta, seed);
    const double rhs_norm = besov(f, gamma + 2 * theta);
    double lo = 1e300, hi = 0.0;
    for (double s : {0.0, 0.01, 0.05})
      for (double lag : {0.01, 0.02, 0.05, 0.1}) {
        const double t = s + lag;
        const double pair =
            besov(spectral::heat_semigroup(f, t) - spectral::heat_semigroup(f, s), gamma) / (std::pow(lag, theta) * rhs_norm);
        const double step = besov(spectral::heat_semigroup(f, lag) - f, gamma) / (std::pow(lag, theta) * rhs_norm);
        EXPECT_LE(pair, step * (1 + 1e-12));
        lo = std::min(lo, step);
        hi = std::max(hi, step);
      }
    EXPECT_LE((hi - lo) / hi, 0.5);
  }
}

TEST(HolderNorm, ConstantHasNormAbsC) {
  EXPECT_NEAR(holder_norm(SpectralField::constant(Grid(1, 64), 1, -1.5), 0.5), 1.5, 1e-15);
  EXPECT_NEAR(holder_norm(SpectralField::constant(Grid(2, 16), 1, 2.0), 0.3), 2.0, 1e-15);
}

TEST(HolderNorm, SineMatchesRefinedGrid) {
  // The dense oracle evaluates the closed form on a 16x finer node set.
  const double L = 1.0, gamma = 0.6;
  Grid g(1, 128, L);
  auto f = SpectralField::sample(g, 1, [&](auto x, int) { return std::sin(2 * kPi * x[0] / L); });
  const int fine = 16 * 128;
  double q = 0.0;
  for (int a = 0; a < fine; ++a)
    for (int b = a + 1; b < fine; ++b) {
      const double dx = std::min(b - a, fine - (b - a)) * L / fine;
      if (dx >= 1.0) continue;
      const double fa = std::sin(2 * kPi * a / fine), fb = std::sin(2 * kPi * b / fine);
      q = std::max(q, std::abs(fa - fb) / std::pow(dx, gamma));
    }
  EXPECT_NEAR(holder_norm(f, gamma), 1.0 + q, 0.01 * (1.0 + q));
}

TEST(HolderNorm, ExponentOutsideUnitIntervalIsDomainError) {
  Grid g(1, 16);
  EXPECT_THROW(holder_norm(SpectralField(g), 0.0), DomainError);
  EXPECT_THROW(holder_norm(SpectralField(g), 1.0), DomainError);
}

TEST(HolderNorm, EquivalentToBesovNormOnRandomSmoothFields) {
  Grid g(1, 128, 2 * kPi);
  const double gamma = 0.5;
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> kdist(1, 20);
  double lo = 1e300, hi = 0.0;
  for (unsigned trial = 0; trial < 100; ++trial) {
    auto f = random_trig_field(g, 1, 100 + trial, kdist(rng));
    const double r = holder_norm(f, gamma) / besov(f, gamma);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double c = std::max(hi, 1.0 / lo);
  EXPECT_LE(c, 10.0) << "ratio range [" << lo << ", " << hi << "]";
}

TEST(Estimates, DefaultSuitesStabilize) {
  for (auto kind : kAllEstimateKinds) {
    auto rep = run_estimate(kind, EstimateParams{});
    EXPECT_TRUE(rep.pass) << to_string(kind) << " variation " << rep.variation;
    EXPECT_GT(rep.fitted_constant, 0.0);
    EXPECT_TRUE(std::isfinite(rep.fitted_constant));
  }
}

TEST(Estimates, ViolatedConstraintsAreDomainErrors) {
  EstimateParams p;
  p.alpha = 0.2;
  p.beta = 0.3;
  EXPECT_THROW(run_estimate(EstimateKind::Bony, p), DomainError);
  EstimateParams q;
  q.theta = 1.0;
  EXPECT_THROW(run_estimate(EstimateKind::SchauderDiff, q), DomainError);
  EstimateParams r;
  r.gamma = 1.5;
  EXPECT_THROW(run_estimate(EstimateKind::Bernstein, r), DomainError);
}

TEST(Estimates, BonyWithUnitFactorStaysBelowFittedConstant) {
  EstimateParams p;
  p.trials = 64;
  const double c = run_estimate(EstimateKind::Bony, p).fitted_constant;
  Grid g(1, 256, 2 * kPi);
  const auto one = SpectralField::constant(g, 1, 1.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto f = drift::synthesize_field(g, 1, p.alpha, seed, 1.0, false);
    const double lhs = besov(spectral::pointwise_product(f, one), -p.beta);
    EXPECT_NEAR(lhs, besov(f, -p.beta), 1e-12 * lhs);
    EXPECT_LE(lhs / (besov(f, p.alpha) * besov(one, -p.beta)), c);
  }
}

TEST(Estimates, CsvCarriesEveryRowAndSummary) {
  EstimateParams p;
  p.trials = 3;
  auto rep = run_estimate(EstimateKind::Schauder, p);
  std::stringstream ss;
  rep.write_csv(ss);
  std::string line;
  int rows = 0;
  std::string last;
  while (std::getline(ss, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, 1 + 3 * static_cast<int>(p.times.size()) + 1);
  EXPECT_EQ(last.rfind("# summary,schauder", 0), 0u);
}

TEST(FaultInjection, CorruptedPartitionBreaksReconstruction) {
  Grid g(1, 64);
  auto f = random_trig_field(g, 1, 2, 3);
  partition_fault() = true;
  const double err = spectral::sup_distance(decompose(f).reconstruct(), f);
  partition_fault() = false;
  EXPECT_GT(err, 1e-3);
  EXPECT_LT(spectral::sup_distance(decompose(f).reconstruct(), f), 1e-12);
}

} // namespace
} // namespace mckean::besov
