#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "poissonity/calibrate.hpp"
#include "poissonity/distributions.hpp"
#include "poissonity/error.hpp"

using namespace poissonity;

namespace {

struct SampleMoments {
  double mean;
  double variance;
};

SampleMoments moments_of(const CountSample& s) {
  double sum = 0.0;
  for (Count x : s.values()) sum += static_cast<double>(x);
  const double mean = sum / static_cast<double>(s.size());
  double ss = 0.0;
  for (Count x : s.values()) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(s.size())};
}

// Exact pmf on 0..upper from the oracle implementations for each family.
std::vector<double> oracle_pmf(const AlternativeSpec& spec) {
  if (const auto* s = std::get_if<Poisson>(&spec)) return oracle::poisson_pmf(s->lambda);
  if (const auto* s = std::get_if<Binomial>(&spec)) {
    return oracle::binomial_pmf(static_cast<int>(s->trials), s->p);
  }
  if (const auto* s = std::get_if<NegativeBinomial>(&spec)) {
    return oracle::negative_binomial_pmf(static_cast<int>(s->successes), s->p);
  }
  if (const auto* s = std::get_if<BetaBinomial>(&spec)) {
    return oracle::beta_binomial_pmf(static_cast<int>(s->trials), s->alpha, s->beta);
  }
  if (const auto* s = std::get_if<BinNegBinMixture>(&spec)) {
    auto nb = oracle::negative_binomial_pmf(static_cast<int>(s->m_nb), s->p);
    const auto b = oracle::binomial_pmf(static_cast<int>(s->m_b), s->p);
    for (auto& v : nb) v *= 1.0 - s->w;
    if (nb.size() < b.size()) nb.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) nb[i] += s->w * b[i];
    return nb;
  }
  if (const auto* s = std::get_if<FloorNormal>(&spec)) {
    const double a = s->a;
    auto p = oracle::floor_pmf([a](double z) { return oracle::normal_cdf(a + 0.5, a, z); }, 200);
    return p;
  }
  if (const auto* s = std::get_if<FloorGamma>(&spec)) {
    const FloorGamma g = *s;
    return oracle::floor_pmf([g](double z) { return oracle::gamma_cdf(g.k, g.b, z); }, 200);
  }
  const auto w = std::get<FloorWeibull>(spec);
  return oracle::floor_pmf([w](double z) { return oracle::weibull_cdf(w.k, w.b, z); }, 200);
}

const std::vector<AlternativeSpec>& all_specs() {
  static const std::vector<AlternativeSpec> specs{
      Poisson{7.0},
      Binomial{50, 0.14},
      NegativeBinomial{70, 10.0 / 11.0},
      BetaBinomial{10, 4, 4},
      BetaBinomial{10, 3, 2},
      BetaBinomial{21, 6, 3},
      BinNegBinMixture{2.0 / 3.0, 20, 10, 0.5},
      FloorNormal{8.0},
      FloorGamma{11.025, 0.952},
      FloorWeibull{3.698, 11.637},
  };
  return specs;
}

}  // namespace

TEST(PoissonPmf, ValueAtZero) { EXPECT_NEAR(poisson_pmf(7.0, 0), 9.1188e-4, 1e-8); }

TEST(PoissonPmf, Normalizes) {
  for (double lambda : {0.3, 7.0, 14.0, 30.0}) {
    double sum = 0.0;
    for (Count x = 0;; ++x) {
      const double p = poisson_pmf(lambda, x);
      sum += p;
      if (x > lambda && p < 1e-15) break;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12) << lambda;
  }
}

TEST(PoissonPmf, SatisfiesRecurrence) {
  EXPECT_NEAR(poisson_pmf(10.0, 10), poisson_pmf(10.0, 9) * 10.0 / 10.0, 1e-15);
  for (double lambda : {0.5, 7.0, 14.0, 30.0}) {
    for (Count x = 1; x <= 200; ++x) {
      const double expect = poisson_pmf(lambda, x - 1) * lambda / static_cast<double>(x);
      if (expect < 1e-300) break;
      EXPECT_NEAR(poisson_pmf(lambda, x) / expect, 1.0, 1e-12) << lambda << " " << x;
    }
  }
}

TEST(PoissonPmf, StableAtLargeArguments) {
  const double p = poisson_pmf(14.0, 30);
  EXPECT_TRUE(std::isfinite(p));
  EXPECT_GT(p, 0.0);
  EXPECT_TRUE(std::isfinite(poisson_pmf(30.0, 200)));
}

TEST(PoissonPmf, RejectsNonPositiveLambda) {
  EXPECT_THROW(poisson_pmf(0.0, 1), DomainError);
  EXPECT_THROW(poisson_pmf(-1.0, 1), DomainError);
  EXPECT_THROW(poisson_cdf(0.0, 1), DomainError);
}

TEST(PoissonCdf, ExtremeCellValues) {
  EXPECT_NEAR(poisson_cdf(7.0, 3), 0.0818, 5e-4);
  EXPECT_NEAR(poisson_cdf(10.0, 4), 0.0293, 5e-4);
  EXPECT_NEAR(poisson_cdf(7.0, 1000), 1.0, 1e-14);
}

TEST(PoissonSf, MatchesForwardTailSums) {
  for (double lambda : {0.5, 7.0, 14.0}) {
    for (Count k = 0; k <= 40; ++k) {
      // Tail summed upward from k, far enough that the remainder is negligible.
      double tail = 0.0;
      for (Count j = k; j < k + 200; ++j) tail += poisson_pmf(lambda, j);
      EXPECT_NEAR(poisson_sf(lambda, k), tail, 1e-13 * tail + 1e-300) << lambda << " " << k;
    }
  }
  EXPECT_GT(poisson_sf(0.5, 30), 0.0);
}

TEST(PoissonCdf, MonotoneAndMatchesPartialSums) {
  for (double lambda : {0.8, 5.0, 14.0}) {
    double prev = 0.0;
    double partial = 0.0;
    for (Count x = 0; x < 60; ++x) {
      partial += poisson_pmf(lambda, x);
      const double c = poisson_cdf(lambda, x);
      EXPECT_GE(c, prev);
      EXPECT_NEAR(c, partial, 1e-14);
      prev = c;
    }
  }
}

TEST(Draw, BinomialMoments) {
  RngStream stream(2024, 0);
  const auto s = draw(Binomial{50, 0.14}, 1'000'000, stream);
  const auto m = moments_of(s);
  const auto ex = oracle::moments_of(oracle::binomial_pmf(50, 0.14));
  const double n = 1e6;
  EXPECT_NEAR(ex.mean, 7.0, 1e-12);
  EXPECT_NEAR(ex.variance, 6.02, 1e-12);
  EXPECT_NEAR(m.mean, 7.0, 3.0 * std::sqrt(ex.variance / n));
  EXPECT_NEAR(m.variance, 6.02, 3.0 * std::sqrt((ex.central4 - ex.variance * ex.variance) / n));
}

TEST(Draw, DegenerateBernoulli) {
  RngStream stream(1, 0);
  const auto s = draw(Binomial{1, 1.0}, 5, stream);
  for (Count x : s.values()) EXPECT_EQ(x, 1);
}

TEST(Draw, FloorGammaMoments) {
  RngStream stream(99, 3);
  const auto s = draw(FloorGamma{11.025, 0.952}, 1'000'000, stream);
  const auto m = moments_of(s);
  const auto ex = oracle::moments_of(oracle_pmf(FloorGamma{11.025, 0.952}));
  const double n = 1e6;
  EXPECT_NEAR(m.mean, 10.0, 0.05);
  // The reference parameters are rounded; the exact series variance is
  // about 10.075, so compare against the series rather than 10.
  EXPECT_NEAR(m.mean, ex.mean, 3.0 * std::sqrt(ex.variance / n));
  EXPECT_NEAR(m.variance, ex.variance,
              3.0 * std::sqrt((ex.central4 - ex.variance * ex.variance) / n));
}

TEST(Draw, FiniteSupportFrequenciesMatchPmf) {
  const std::vector<AlternativeSpec> specs{BetaBinomial{10, 4, 4}, BetaBinomial{10, 3, 2},
                                           BetaBinomial{21, 6, 3}, Binomial{50, 0.14}};
  std::uint64_t index = 10;
  for (const auto& spec : specs) {
    RngStream stream(5, index++);
    const auto s = draw(spec, 1'000'000, stream);
    const auto exact = oracle_pmf(spec);
    std::vector<double> freq(exact.size(), 0.0);
    for (Count x : s.values()) {
      ASSERT_LT(static_cast<std::size_t>(x), freq.size());
      freq[static_cast<std::size_t>(x)] += 1e-6;
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) tv += std::abs(freq[i] - exact[i]);
    EXPECT_LT(0.5 * tv, 0.005) << describe(spec);
  }
}

TEST(Draw, MomentsMatchForEveryFamily) {
  std::uint64_t index = 100;
  const double n = 1e6;
  for (const auto& spec : all_specs()) {
    RngStream stream(77, index++);
    const auto s = draw(spec, 1'000'000, stream);
    const auto m = moments_of(s);
    const Moments target = spec_moments(spec);
    const auto ex = oracle::moments_of(oracle_pmf(spec));
    EXPECT_NEAR(m.mean, target.mean, 4.0 * std::sqrt(ex.variance / n)) << describe(spec);
    EXPECT_NEAR(m.variance, target.variance,
                4.0 * std::sqrt((ex.central4 - ex.variance * ex.variance) / n))
        << describe(spec);
  }
}

TEST(Draw, ReproducibleAndStreamSensitive) {
  for (const auto& spec : all_specs()) {
    RngStream a(9, 4);
    RngStream b(9, 4);
    RngStream c(9, 5);
    const auto sa = draw(spec, 500, a);
    const auto sb = draw(spec, 500, b);
    const auto sc = draw(spec, 500, c);
    EXPECT_TRUE(std::equal(sa.values().begin(), sa.values().end(), sb.values().begin()));
    // No shared prefix between distinct streams.
    const auto first_diff =
        std::mismatch(sa.values().begin(), sa.values().end(), sc.values().begin());
    EXPECT_LT(std::distance(sa.values().begin(), first_diff.first), 20) << describe(spec);
    EXPECT_NE(moments_of(sa).mean, moments_of(sc).mean) << describe(spec);
  }
}

TEST(Draw, FloorNormalClampsNegativeDraws) {
  // a = 0.1 puts about 5% of the mass of Z below zero.
  RngStream stream(3, 3);
  const auto s = draw(FloorNormal{0.1}, 100000, stream);
  std::size_t zeros = 0;
  for (Count x : s.values()) {
    ASSERT_GE(x, 0);
    zeros += x == 0;
  }
  EXPECT_NEAR(zeros / 1e5, oracle::normal_cdf(0.6, 0.1, 1.0), 0.005);
}

TEST(Draw, SmallShapeGammaAndWeibull) {
  RngStream stream(4, 4);
  for (const AlternativeSpec& spec : {AlternativeSpec{FloorGamma{0.3, 20.0}},
                                      AlternativeSpec{FloorWeibull{0.7, 5.0}}}) {
    const auto s = draw(spec, 200000, stream);
    const auto ex = oracle::moments_of(oracle_pmf(spec));
    const auto m = moments_of(s);
    EXPECT_NEAR(m.mean, ex.mean, 4.0 * std::sqrt(ex.variance / 2e5)) << describe(spec);
  }
}

TEST(Draw, RejectsInvalidParameters) {
  RngStream s(1, 1);
  EXPECT_THROW(draw(Poisson{-1.0}, 10, s), DomainError);
  EXPECT_THROW(draw(Binomial{0, 0.5}, 10, s), DomainError);
  EXPECT_THROW(draw(Binomial{10, 1.5}, 10, s), DomainError);
  EXPECT_THROW(draw(NegativeBinomial{5, 0.0}, 10, s), DomainError);
  EXPECT_THROW(draw(BetaBinomial{10, 0.0, 1.0}, 10, s), DomainError);
  EXPECT_THROW(draw(BinNegBinMixture{1.5, 20, 10, 0.5}, 10, s), DomainError);
  EXPECT_THROW(draw(FloorNormal{0.0}, 10, s), DomainError);
  EXPECT_THROW(draw(FloorGamma{1.0, -1.0}, 10, s), DomainError);
  EXPECT_THROW(draw(FloorWeibull{NAN, 1.0}, 10, s), DomainError);
  EXPECT_THROW(draw(Poisson{7.0}, 0, s), DomainError);
}

TEST(CountSample, RejectsNegativesAndEmpty) {
  EXPECT_THROW(CountSample({1, -1}), DomainError);
  EXPECT_THROW(CountSample(std::vector<Count>{}), DomainError);
  EXPECT_EQ(CountSample({0, 3, 4}).size(), 3u);
}

TEST(AnalyticMoments, ReferenceValues) {
  const auto nb = analytic_moments(NegativeBinomial{70, 10.0 / 11.0});
  EXPECT_NEAR(nb.mean, 7.0, 1e-12);
  EXPECT_NEAR(nb.variance, 7.7, 1e-12);
  const auto bb = analytic_moments(BetaBinomial{10, 4, 4});
  EXPECT_NEAR(bb.mean, 5.0, 1e-12);
  EXPECT_NEAR(bb.variance, 5.0, 1e-12);
  const auto po = analytic_moments(Poisson{3.5});
  EXPECT_EQ(po.mean, 3.5);
  EXPECT_EQ(po.variance, 3.5);
  const auto bb2 = analytic_moments(BetaBinomial{10, 3, 2});
  EXPECT_NEAR(bb2.mean, 6.0, 1e-12);
  EXPECT_NEAR(bb2.variance, 6.0, 1e-12);
  const auto bb3 = analytic_moments(BetaBinomial{21, 6, 3});
  EXPECT_NEAR(bb3.mean, 14.0, 1e-12);
  EXPECT_NEAR(bb3.variance, 14.0, 1e-12);
  const auto mix = analytic_moments(BinNegBinMixture{2.0 / 3.0, 20, 10, 0.5});
  EXPECT_NEAR(mix.mean, 10.0, 1e-12);
  EXPECT_NEAR(mix.variance, 10.0, 1e-12);
}

TEST(AnalyticMoments, MatchEnumeration) {
  for (const auto& spec : all_specs()) {
    if (is_floor_discretized(spec)) continue;
    const auto a = analytic_moments(spec);
    const auto e = oracle::moments_of(oracle_pmf(spec));
    EXPECT_NEAR(a.mean, e.mean, 1e-9 * a.mean) << describe(spec);
    EXPECT_NEAR(a.variance, e.variance, 1e-9 * a.variance) << describe(spec);
  }
}

TEST(AnalyticMoments, FloorSpecsUnsupported) {
  EXPECT_THROW(analytic_moments(FloorGamma{11.025, 0.952}), UnsupportedSpecError);
  EXPECT_THROW(analytic_moments(FloorNormal{8}), UnsupportedSpecError);
}

TEST(TheoreticalC, ReferenceValues) {
  EXPECT_EQ(theoretical_c(Poisson{7}), 1.0);
  EXPECT_NEAR(theoretical_c(Binomial{50, 0.14}), 0.98, 1e-15);
  EXPECT_NEAR(theoretical_c(NegativeBinomial{70, 10.0 / 11.0}), 71.0 / 70.0, 1e-15);
  EXPECT_THROW(theoretical_c(BetaBinomial{10, 4, 4}), UnsupportedSpecError);
  EXPECT_THROW(theoretical_c(FloorGamma{11, 1}), UnsupportedSpecError);
}

TEST(TheoreticalC, MatchesEnumeration) {
  for (int m = 1; m <= 20; ++m) {
    for (double p : {0.05, 0.3, 0.5, 0.9}) {
      const double c = oracle::c_value(oracle::binomial_pmf(m, p));
      EXPECT_NEAR(theoretical_c(Binomial{m, p}), c, 1e-9 * std::max(c, 1e-300)) << m << " " << p;
    }
  }
  for (double lambda : {0.5, 7.0, 14.0}) {
    EXPECT_NEAR(oracle::c_value(oracle::poisson_pmf(lambda, 1e-13)), theoretical_c(Poisson{lambda}),
                1e-9);
  }
  for (int m : {1, 5, 70}) {
    for (double p : {0.3, 10.0 / 11.0}) {
      const double c = oracle::c_value(oracle::negative_binomial_pmf(m, p, 1e-14));
      EXPECT_NEAR(theoretical_c(NegativeBinomial{m, p}) / c, 1.0, 1e-9) << m << " " << p;
    }
  }
}

TEST(AlternativePmf, MatchesOraclePmfs) {
  for (const auto& spec : all_specs()) {
    const auto exact = oracle_pmf(spec);
    double total = 0.0;
    for (std::size_t x = 0; x < std::min<std::size_t>(exact.size(), 80); ++x) {
      const double p = alternative_pmf(spec, static_cast<Count>(x));
      total += p;
      EXPECT_NEAR(p, exact[x], 1e-12) << describe(spec) << " x=" << x;
    }
    EXPECT_NEAR(total, 1.0, 1e-9) << describe(spec);
  }
  EXPECT_EQ(alternative_pmf(BetaBinomial{10, 3, 2}, 11), 0.0);
  EXPECT_EQ(alternative_pmf(Binomial{10, 0.3}, -1), 0.0);
}

TEST(SupportMax, FiniteFamilies) {
  EXPECT_EQ(support_max(Binomial{50, 0.14}), 50);
  EXPECT_EQ(support_max(BetaBinomial{10, 3, 2}), 10);
  EXPECT_FALSE(support_max(Poisson{3}).has_value());
  EXPECT_FALSE(support_max(BinNegBinMixture{2.0 / 3.0, 20, 10, 0.5}).has_value());
}
