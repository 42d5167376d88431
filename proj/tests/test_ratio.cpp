#include <gtest/gtest.h>

#include <cmath>

#include "chaosclt/errors.hpp"
#include "chaosclt/ratio.hpp"
#include "oracles.hpp"

using namespace chaosclt;

namespace {

// z with z_i^2 = 1 on the eigendirections of g, so V = 0.
std::vector<double> v_zero_point(const RatioFamily& fam, double zf) {
  std::vector<double> z(fam.dim, 0.0);
  for (std::size_t i = 0; i < fam.m; ++i) z[i] = (i % 2 == 0) ? 1.0 : -1.0;
  z[fam.m] = zf;
  return z;
}

}  // namespace

TEST(SyntheticFamily, DefaultExample) {
  const RatioFamily fam = make_synthetic_family(1.0, 1.0, 1.0, 4.0);
  EXPECT_EQ(fam.m, 4u);
  EXPECT_EQ(fam.dim, 7u);
  EXPECT_NEAR(2.0 * fam.g.squared_norm(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(fam.mean_G, 2.0);
  EXPECT_DOUBLE_EQ(fam.limit_variance(), 2.0);
  for (double c : fam.g.eigenvalues) EXPECT_NEAR(c, 1.0 / std::sqrt(8.0), 1e-15);
  EXPECT_EQ(fam.f[fam.m], 1.0);
}

TEST(SyntheticFamily, SecondChaosVarianceIsExactAtEveryLambda) {
  for (double lambda : {1.0, 3.5, 100.0, 1e4}) {
    const RatioFamily fam = make_synthetic_family(1.0, 1.2, 0.5, lambda);
    EXPECT_EQ(fam.m, static_cast<std::size_t>(std::ceil(lambda)));
    EXPECT_NEAR(2.0 * fam.g.squared_norm(), 1.44, 1e-12);
  }
}

TEST(SyntheticFamily, RejectsInvalidParameters) {
  EXPECT_THROW(make_synthetic_family(1.0, 1.5, 1.0, 4.0), DomainError);
  EXPECT_THROW(make_synthetic_family(1.0, std::sqrt(2.0), 1.0, 4.0), DomainError);
  EXPECT_THROW(make_synthetic_family(1.0, 1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(make_synthetic_family(0.0, 1.0, 1.0, 4.0), DomainError);
  EXPECT_THROW(make_synthetic_family(1.0, 0.0, 1.0, 4.0), DomainError);
  PerturbationConfig bad_overlap;
  bad_overlap.overlap = 1.5;
  EXPECT_THROW(make_synthetic_family(1.0, 1.0, 1.0, 4.0, bad_overlap), DomainError);
  PerturbationConfig bad_decay;
  bad_decay.decay = 0.5;
  EXPECT_THROW(make_synthetic_family(1.0, 1.0, 1.0, 4.0, bad_decay), DomainError);
}

TEST(SampleRatio, Examples) {
  const RatioFamily fam = make_synthetic_family(1.0, 1.0, 0.8, 9.0);
  const RatioSample s = sample_ratio(fam, v_zero_point(fam, 1.7));
  EXPECT_FALSE(s.rejected);
  EXPECT_NEAR(s.value, 0.8 * 1.7, 1e-14);

  const RatioFamily no_f = make_synthetic_family(1.0, 1.0, 1e-300, 9.0);
  EXPECT_NEAR(sample_ratio(no_f, v_zero_point(no_f, 0.3)).value, 0.0, 1e-14);
}

TEST(SampleRatio, MatchesDirectFormula) {
  PerturbationConfig p;
  p.s_linear = 0.3;
  p.u_quadratic = -0.4;
  p.mu = 0.25;
  p.decay = 0.2;
  const double lambda = 5.0;
  const RatioFamily fam = make_synthetic_family(1.3, 1.0, 0.7, lambda, p);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto z = oracle::random_vector(rng, fam.dim);
    double v = 0.0;
    for (std::size_t i = 0; i < fam.m; ++i) v += fam.g.eigenvalues[i] * (z[i] * z[i] - 1.0);
    const double scale = std::pow(lambda, 0.2);
    const double sv = scale * 0.3 * z[fam.m + 1];
    const double uv = scale * -0.4 * (z[fam.m + 2] * z[fam.m + 2] - 1.0) / std::sqrt(2.0);
    const double f = 0.7 * z[fam.m];
    const double root = std::sqrt(lambda);
    const double num = v + sv / root + f + (uv + scale * 0.25) / root;
    const double den = (fam.mean_G + v + sv / root) / (1.3 * root);
    const RatioSample s = sample_ratio(fam, z);
    ASSERT_EQ(s.rejected, den <= 0.0);
    if (!s.rejected) {
      EXPECT_NEAR(s.value, num / den, 1e-12 * (1 + std::abs(num / den)));
    }
  }
}

TEST(SampleRatio, FlagsNonPositiveDenominator) {
  PerturbationConfig p;
  p.s_linear = 1.0;
  const RatioFamily fam = make_synthetic_family(1.0, 1.0, 1.0, 1.0, p);
  std::vector<double> z(fam.dim, 0.0);
  z[0] = 1.0;
  z[fam.m + 1] = -5.0;  // G = 1 + 0 - 5 < 0
  EXPECT_TRUE(sample_ratio(fam, z).rejected);
}

TEST(SampleRatioBatch, CenteredAtLargeLambda) {
  const RatioFamily fam = make_synthetic_family(1.0, 1.0, 1.0, 1e4);
  const RatioBatch batch = sample_ratio_batch(fam, 100'000, 17);
  EXPECT_EQ(batch.rejected, 0u);
  EXPECT_EQ(batch.accepted.size(), 100'000u);
  const auto est = oracle::estimate_mean(batch.accepted);
  EXPECT_LE(std::abs(est.mean), 5.0 * est.standard_error);
  const auto var = oracle::estimate_variance(batch.accepted);
  EXPECT_NEAR(var.mean, fam.limit_variance(), 0.05);
}

TEST(SampleRatioBatch, DeterministicAcrossThreads) {
  const RatioFamily fam = make_synthetic_family(1.0, 1.0, 1.0, 50.0);
  const RatioBatch a = sample_ratio_batch(fam, 500, 3, 1), b = sample_ratio_batch(fam, 500, 3, 4);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.replicas, 500u);
}

TEST(Theorem41, DefaultFamilyTerms) {
  for (double lambda : {4.0, 100.0, 1000.0}) {
    const RatioFamily fam = make_synthetic_family(1.0, 1.1, 0.9, lambda);
    const BoundReport r = theorem41_bound(fam);
    const double m = std::ceil(lambda);
    EXPECT_NEAR(r.term("phi"), 1.21 * std::sqrt(12.0 / m), 1e-12);
    EXPECT_EQ(r.term("mean_G"), 0.0);
    EXPECT_EQ(r.term("variance_F"), 0.0);
    EXPECT_EQ(r.term("variance_G"), 0.0);
    EXPECT_EQ(r.term("perturbations"), 0.0);
    EXPECT_EQ(r.variance, 1.0);
  }
}

TEST(Theorem41, SinglePerturbations) {
  PerturbationConfig mu_only;
  mu_only.mu = -0.6;
  EXPECT_NEAR(theorem41_bound(make_synthetic_family(1.0, 1.0, 1.0, 16.0, mu_only)).term("perturbations"),
              0.6 / 4.0, 1e-15);

  PerturbationConfig shifted;
  shifted.mean_shift = 0.01;
  const BoundReport r = theorem41_bound(make_synthetic_family(1.0, 1.0, 1.0, 16.0, shifted));
  EXPECT_NEAR(r.term("mean_G"), 2.0 * 0.01, 1e-14);
  EXPECT_EQ(r.term("perturbations"), 0.0);

  PerturbationConfig s_only;
  s_only.s_linear = 0.3;
  s_only.s_quadratic = 0.4;
  const BoundReport rs = theorem41_bound(make_synthetic_family(1.0, 1.0, 1.0, 25.0, s_only));
  EXPECT_NEAR(rs.term("perturbations"), 0.5 / 5.0, 1e-15);
  // S is orthogonal to V, so Var(G - E G) = sigma1^2 + ||S||^2 / lambda.
  EXPECT_NEAR(rs.term("variance_G"), 0.25 / 25.0, 1e-15);
}

TEST(Theorem41, OverlapEntersMixedTerm) {
  PerturbationConfig p;
  p.overlap = 0.6;
  const RatioFamily fam = make_synthetic_family(1.0, 1.0, 1.0, 4.0, p);
  const double c = 1.0 / std::sqrt(8.0);
  EXPECT_NEAR(theorem41_bound(fam).term("phi"), std::sqrt(48 * 4 * std::pow(c, 4)) + std::sqrt(c * c * 0.36), 1e-13);
  EXPECT_EQ(theorem41_bound(fam).term("variance_F"), 0.0);
}

TEST(Theorem41, StrictlyDecreasingOverLambdaGrid) {
  double previous = INFINITY;
  for (double lambda : {1e2, 1e3, 1e4}) {
    const double total = theorem41_bound(make_synthetic_family(1.0, 1.0, 1.0, lambda)).total;
    EXPECT_LT(total, previous);
    previous = total;
  }
}
