// Copyright 2026 The ldpest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "ldpest/channel.h"
#include "ldpest/hashing.h"
#include "ldpest/mechanisms.h"
#include "ldpest/privacy_budget.h"
#include "ldpest/prob_vector.h"
#include "ldpest/rng.h"
#include "ldpest/sampling.h"

namespace ldpest {
namespace {

TEST(RngStreamTest, MatchesFrozenReferenceSequence) {
  // Values generated from an independent implementation of the same
  // SplitMix64 construction; any platform or refactor drift shows up here.
  RngStream rng(42, 7);
  EXPECT_EQ(rng.NextUint64(), 0xC2E3DFBB11ED9379ULL);
  EXPECT_EQ(rng.NextUint64(), 0xA1EC5A7F85C0AF19ULL);
  EXPECT_EQ(rng.NextUint64(), 0x3C1C6A4DC837FE84ULL);
  EXPECT_EQ(rng.NextUint64(), 0x37BC8E5C46F86563ULL);

  RngStream zero(0, 0);
  EXPECT_EQ(zero.NextUint64(), 0x238275BC38FCBE91ULL);
  EXPECT_EQ(zero.NextUint64(), 0xF89A2566B5822C54ULL);

  RngStream doubles(42, 7);
  EXPECT_DOUBLE_EQ(doubles.NextDouble(), 0.7612895805086082);
  EXPECT_DOUBLE_EQ(doubles.NextDouble(), 0.6325127183279188);
}

TEST(RngStreamTest, IdenticalSeedsYieldIdenticalSequences) {
  RngStream a(7, 0);
  RngStream b(7, 0);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.NextUint64(), b.NextUint64());
  }
}

TEST(RngStreamTest, DistinctStreamsDiverge) {
  RngStream a(7, 0);
  RngStream b(7, 1);
  int equal = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.NextUint64() == b.NextUint64()) ++equal;
  }
  EXPECT_EQ(equal, 0);
}

TEST(RngStreamTest, NextBelowIsUnbiasedEnough) {
  RngStream rng(123, 0);
  const uint64_t bound = 6;
  std::vector<int> counts(bound, 0);
  const int draws = 600000;
  for (int i = 0; i < draws; ++i) ++counts[rng.NextBelow(bound)];
  const double expected = static_cast<double>(draws) / bound;
  const double four_sigma = 4.0 * std::sqrt(expected * (1.0 - 1.0 / bound));
  for (uint64_t v = 0; v < bound; ++v) {
    EXPECT_NEAR(counts[v], expected, four_sigma) << "value " << v;
  }
  EXPECT_THROW(rng.NextBelow(0), std::invalid_argument);
}

TEST(Xxh64Test, MatchesReferenceVectors) {
  EXPECT_EQ(Xxh64("", 0), 0xEF46DB3751D8E999ULL);
  EXPECT_EQ(Xxh64("", 1), 0xD5AFBA1336A3BE4BULL);
  EXPECT_EQ(Xxh64("a", 0), 0xD24EC4F1A98C6E5BULL);
  EXPECT_EQ(Xxh64("abc", 0), 0x44BC2CF5AD770999ULL);
  EXPECT_EQ(Xxh64("abc", 42), 0x13C1D910702770E6ULL);
  EXPECT_EQ(Xxh64("candidate string 17", 0xDEADBEEF), 0x0F8E348A90C8D90FULL);
  EXPECT_EQ(Xxh64("0123456789abcdef0123456789abcdef0", 2026),
            0x126BD0066BB8C3E4ULL);
}

TEST(ProbVectorTest, ValidatesEntries) {
  EXPECT_NO_THROW(ProbVector({0.5, 0.25, 0.25}));
  EXPECT_THROW(ProbVector({1.0}), std::invalid_argument);          // k < 2
  EXPECT_THROW(ProbVector({0.6, 0.6}), std::invalid_argument);     // sum != 1
  EXPECT_THROW(ProbVector({-0.1, 1.1}), std::invalid_argument);    // negative
  EXPECT_THROW(ProbVector({0.5, std::numeric_limits<double>::quiet_NaN()}),
               std::invalid_argument);
  EXPECT_DOUBLE_EQ(ProbVector::Uniform(4)[2], 0.25);
  EXPECT_DOUBLE_EQ(ProbVector::PointMass(3, 1)[1], 1.0);
}

TEST(SignedVectorTest, RejectsNonFinite) {
  EXPECT_NO_THROW(SignedVector({1.4, -0.2, -0.2}));
  EXPECT_THROW(SignedVector({std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
}

TEST(PrivacyBudgetTest, CachesExponentials) {
  const PrivacyBudget budget(std::log(3.0));
  EXPECT_DOUBLE_EQ(budget.exp_epsilon(), 3.0);
  EXPECT_DOUBLE_EQ(budget.exp_half_epsilon(), std::sqrt(3.0));
  EXPECT_THROW(PrivacyBudget(-0.1), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(std::numeric_limits<double>::infinity()),
               std::invalid_argument);
}

TEST(PrivacyBudgetTest, ParsesEpsilonSpellings) {
  EXPECT_DOUBLE_EQ(ParseEpsilon("0.5"), 0.5);
  EXPECT_DOUBLE_EQ(ParseEpsilon("ln8"), std::log(8.0));
  EXPECT_DOUBLE_EQ(ParseEpsilon("ln2.5"), std::log(2.5));
  EXPECT_THROW(ParseEpsilon("ln"), std::invalid_argument);
  EXPECT_THROW(ParseEpsilon("abc"), std::invalid_argument);
  EXPECT_THROW(ParseEpsilon("ln-2"), std::invalid_argument);
}

TEST(ChannelTest, RejectsMalformedRowsNamingTheRow) {
  std::vector<std::vector<double>> rows = {{0.5, 0.5}, {0.7, 0.7}};
  try {
    Channel bad(rows);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
}

TEST(VerifyChannelDpTest, KrrChannelIsTight) {
  const PrivacyBudget budget(std::log(2.0));
  const auto verdict = VerifyChannelDp(BuildKrrChannel(3, budget), budget);
  EXPECT_NEAR(verdict.max_ratio, 2.0, 1e-12);
  EXPECT_TRUE(verdict.satisfied);
}

TEST(VerifyChannelDpTest, UniformChannelSatisfiesZeroEpsilon) {
  Channel uniform(std::vector<std::vector<double>>(3, std::vector<double>(4, 0.25)));
  const auto verdict = VerifyChannelDp(uniform, PrivacyBudget(0.0));
  EXPECT_DOUBLE_EQ(verdict.max_ratio, 1.0);
  EXPECT_TRUE(verdict.satisfied);
}

TEST(VerifyChannelDpTest, IdentityChannelNeverSatisfiesFiniteEpsilon) {
  std::vector<std::vector<double>> rows(3, std::vector<double>(3, 0.0));
  for (int i = 0; i < 3; ++i) rows[i][i] = 1.0;
  const auto verdict = VerifyChannelDp(Channel(rows), PrivacyBudget(50.0));
  EXPECT_TRUE(std::isinf(verdict.max_ratio));
  EXPECT_FALSE(verdict.satisfied);
}

TEST(VerifyChannelDpTest, EnumeratedVariantAgreesWithMaterialized) {
  const PrivacyBudget budget(1.0);
  const Channel channel = BuildKrrChannel(5, budget);
  const auto streamed = VerifyEnumeratedDp(
      5, 5,
      [&](int64_t y, std::span<double> column) {
        for (int x = 0; x < 5; ++x) column[x] = channel.entry(x, static_cast<int>(y));
      },
      budget);
  const auto direct = VerifyChannelDp(channel, budget);
  EXPECT_DOUBLE_EQ(streamed.max_ratio, direct.max_ratio);
  EXPECT_EQ(streamed.satisfied, direct.satisfied);
}

TEST(SampleCategoricalTest, DegenerateDistributionAlwaysHits) {
  RngStream rng(1, 0);
  const std::vector<double> point{1.0, 0.0, 0.0};
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(SampleCategorical(point, rng), 0);
  }
}

TEST(SampleCategoricalTest, FairCoinFrequency) {
  RngStream rng(2, 0);
  const std::vector<double> coin{0.5, 0.5};
  int zeros = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    if (SampleCategorical(coin, rng) == 0) ++zeros;
  }
  EXPECT_NEAR(static_cast<double>(zeros) / draws, 0.5, 0.002);
}

TEST(SampleCategoricalTest, DeterministicGivenStream) {
  RngStream a(7, 0), b(7, 0);
  const std::vector<double> dist{0.2, 0.3, 0.5};
  const CategoricalSampler sampler(dist);
  for (int i = 0; i < 200; ++i) {
    ASSERT_EQ(sampler.Sample(a), sampler.Sample(b));
  }
}

// Every coordinate of 100 random distributions reproduced within 4 binomial
// sigma over 1e5 draws.
TEST(SampleCategoricalTest, ReproducesRandomDistributions) {
  RngStream meta(99, 0);
  const int draws = 100000;
  for (int rep = 0; rep < 100; ++rep) {
    const int k = 2 + static_cast<int>(meta.NextBelow(9));
    std::vector<double> dist = SampleDirichletUniform(k, meta);
    const CategoricalSampler sampler(dist);
    RngStream rng(100 + rep, 0);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < draws; ++i) ++counts[sampler.Sample(rng)];
    for (int j = 0; j < k; ++j) {
      const double sigma = std::sqrt(dist[j] * (1.0 - dist[j]) / draws) + 1e-12;
      EXPECT_NEAR(static_cast<double>(counts[j]) / draws, dist[j], 4.0 * sigma + 1e-4)
          << "rep " << rep << " coordinate " << j;
    }
  }
}

TEST(EmpiricalFrequenciesTest, CountsAndEdgeCases) {
  const std::vector<int> reports{0, 0, 1, 2};
  const ProbVector freq = EmpiricalFrequencies(reports, 3);
  EXPECT_DOUBLE_EQ(freq[0], 0.5);
  EXPECT_DOUBLE_EQ(freq[1], 0.25);
  EXPECT_DOUBLE_EQ(freq[2], 0.25);

  const std::vector<int> ones{1, 1, 1};
  const ProbVector single = EmpiricalFrequencies(ones, 2);
  EXPECT_DOUBLE_EQ(single[0], 0.0);
  EXPECT_DOUBLE_EQ(single[1], 1.0);

  const std::vector<int> sparse{0, 1};
  const ProbVector wide = EmpiricalFrequencies(sparse, 4);
  EXPECT_DOUBLE_EQ(wide[0], 0.5);
  EXPECT_DOUBLE_EQ(wide[1], 0.5);
  EXPECT_DOUBLE_EQ(wide[2], 0.0);
  EXPECT_DOUBLE_EQ(wide[3], 0.0);

  EXPECT_THROW(EmpiricalFrequencies({}, 3), std::invalid_argument);
  const std::vector<int> bad{0, 3};
  EXPECT_THROW(EmpiricalFrequencies(bad, 3), std::invalid_argument);
}

double ExactBinomialLogPmf(int64_t n, double p, int64_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

// Chi-square goodness of fit against the exact pmf; catches any bias in the
// rejection sampler's envelope. The threshold is ~8 sigma above the
// chi-square mean, far from flaking at a fixed seed.
void CheckBinomialDistribution(int64_t n, double p, uint64_t seed) {
  RngStream rng(seed, 0);
  const int draws = 200000;
  std::vector<int64_t> counts(n + 1, 0);
  for (int i = 0; i < draws; ++i) {
    const int64_t v = SampleBinomial(n, p, rng);
    ASSERT_GE(v, 0);
    ASSERT_LE(v, n);
    ++counts[v];
  }
  // Pool outcomes into bins with expected count >= 10.
  double chi2 = 0.0;
  int df = -1;
  double pooled_expected = 0.0;
  int64_t pooled_observed = 0;
  for (int64_t k = 0; k <= n; ++k) {
    pooled_expected += draws * std::exp(ExactBinomialLogPmf(n, p, k));
    pooled_observed += counts[k];
    if (pooled_expected >= 10.0 || k == n) {
      const double diff = pooled_observed - pooled_expected;
      chi2 += diff * diff / std::max(pooled_expected, 1e-9);
      ++df;
      pooled_expected = 0.0;
      pooled_observed = 0;
    }
  }
  ASSERT_GE(df, 1);
  EXPECT_LT(chi2, df + 8.0 * std::sqrt(2.0 * df))
      << "n=" << n << " p=" << p << " df=" << df;
}

TEST(SampleBinomialTest, MatchesExactPmfAcrossRegimes) {
  CheckBinomialDistribution(20, 0.3, 11);     // inversion
  CheckBinomialDistribution(50, 0.04, 12);    // inversion, small np
  CheckBinomialDistribution(200, 0.4, 13);    // rejection
  CheckBinomialDistribution(1000, 0.5, 14);   // rejection, symmetric
  CheckBinomialDistribution(1000, 0.97, 15);  // mirrored
  CheckBinomialDistribution(100000, 0.001, 16);
}

TEST(SampleBinomialTest, EdgeCases) {
  RngStream rng(5, 0);
  EXPECT_EQ(SampleBinomial(0, 0.5, rng), 0);
  EXPECT_EQ(SampleBinomial(100, 0.0, rng), 0);
  EXPECT_EQ(SampleBinomial(100, 1.0, rng), 100);
  EXPECT_THROW(SampleBinomial(-1, 0.5, rng), std::invalid_argument);
  EXPECT_THROW(SampleBinomial(10, 1.5, rng), std::invalid_argument);
}

TEST(SampleMultinomialTest, CountsSumToNWithCorrectMeans) {
  RngStream rng(6, 0);
  const std::vector<double> p{0.5, 0.3, 0.15, 0.05};
  std::vector<int64_t> out(4);
  std::vector<double> totals(4, 0.0);
  const int reps = 20000;
  const int64_t n = 100;
  for (int r = 0; r < reps; ++r) {
    SampleMultinomial(n, p, rng, out);
    int64_t sum = 0;
    for (int j = 0; j < 4; ++j) {
      ASSERT_GE(out[j], 0);
      sum += out[j];
      totals[j] += static_cast<double>(out[j]);
    }
    ASSERT_EQ(sum, n);
  }
  for (int j = 0; j < 4; ++j) {
    const double mean = totals[j] / reps;
    const double sigma = std::sqrt(n * p[j] * (1 - p[j]) / reps);
    EXPECT_NEAR(mean, n * p[j], 5.0 * sigma + 1e-9) << "cell " << j;
  }
}

TEST(SampleDirichletUniformTest, ProducesSimplexPoints) {
  RngStream rng(8, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto v = SampleDirichletUniform(5, rng);
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (double x : v) EXPECT_GE(x, 0.0);
  }
}

}  // namespace
}  // namespace ldpest
