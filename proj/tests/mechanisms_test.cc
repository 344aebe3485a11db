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

#include "ldpest/mechanisms.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ldpest/channel.h"
#include "ldpest/rng.h"
#include "ldpest/sampling.h"

namespace ldpest {
namespace {

TEST(FlipParamsTest, KeepAndFlipArePartnersAndKeepDominates) {
  for (double eps : {0.0, 0.3, 1.0, 5.0}) {
    const FlipParams fp = RapporFlipParams(PrivacyBudget(eps));
    EXPECT_DOUBLE_EQ(fp.keep_prob + fp.flip_prob, 1.0);
    EXPECT_GE(fp.keep_prob, 0.5);
  }
  const FlipParams split = RapporPerBitFlipParams(PrivacyBudget(2.0), 2);
  const FlipParams direct = RapporFlipParams(PrivacyBudget(1.0));
  EXPECT_DOUBLE_EQ(split.keep_prob, direct.keep_prob);
}

TEST(BuildKrrChannelTest, HandEvaluatedEntries) {
  const Channel q = BuildKrrChannel(3, PrivacyBudget(std::log(2.0)));
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      EXPECT_NEAR(q.entry(x, y), x == y ? 0.5 : 0.25, 1e-15);
    }
  }
}

TEST(BuildKrrChannelTest, BinaryCaseIsTheClassicTwoByTwoMatrix) {
  for (double eps : {0.1, 1.0, std::log(3.0), 4.0}) {
    const Channel q = BuildKrrChannel(2, PrivacyBudget(eps));
    const double e = std::exp(eps);
    EXPECT_DOUBLE_EQ(q.entry(0, 0), e / (e + 1.0));
    EXPECT_DOUBLE_EQ(q.entry(0, 1), 1.0 / (e + 1.0));
    EXPECT_DOUBLE_EQ(q.entry(1, 0), 1.0 / (e + 1.0));
    EXPECT_DOUBLE_EQ(q.entry(1, 1), e / (e + 1.0));
  }
}

TEST(BuildKrrChannelTest, ZeroEpsilonIsUniform) {
  const Channel q = BuildKrrChannel(5, PrivacyBudget(0.0));
  for (int x = 0; x < 5; ++x) {
    for (int y = 0; y < 5; ++y) EXPECT_DOUBLE_EQ(q.entry(x, y), 0.2);
  }
}

TEST(BuildKrrChannelTest, RejectsTinyAlphabets) {
  EXPECT_THROW(BuildKrrChannel(1, PrivacyBudget(1.0)), std::invalid_argument);
}

TEST(EncodeKrrTest, HugeEpsilonIsIdentity) {
  RngStream rng(1, 0);
  const PrivacyBudget budget(50.0);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(EncodeKrr(3, 8, budget, rng), 3);
  }
}

TEST(EncodeKrrTest, TruthFrequencyMatchesDiagonal) {
  RngStream rng(2, 0);
  const PrivacyBudget budget(std::log(3.0));  // e^eps/(e^eps+3) = 0.5 at k=4
  int hits = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    if (EncodeKrr(2, 4, budget, rng) == 2) ++hits;
  }
  EXPECT_NEAR(static_cast<double>(hits) / draws, 0.5, 0.002);
}

TEST(EncodeKrrTest, ZeroEpsilonIsAFairCoinForBinary) {
  RngStream rng(3, 0);
  const PrivacyBudget budget(0.0);
  int zeros = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    if (EncodeKrr(0, 2, budget, rng) == 0) ++zeros;
  }
  EXPECT_NEAR(static_cast<double>(zeros) / draws, 0.5, 0.002);
}

TEST(EncodeKrrTest, RejectsOutOfRangeSymbol) {
  RngStream rng(4, 0);
  EXPECT_THROW(EncodeKrr(4, 4, PrivacyBudget(1.0), rng), std::invalid_argument);
  EXPECT_THROW(EncodeKrr(-1, 4, PrivacyBudget(1.0), rng), std::invalid_argument);
}

// The empirical channel estimated from draws matches the closed form within
// 4 binomial sigma, entrywise.
TEST(EncodeKrrTest, EmpiricalChannelMatchesClosedForm) {
  const int k = 5;
  const PrivacyBudget budget(1.0);
  const Channel expected = BuildKrrChannel(k, budget);
  const int draws = 1000000;
  for (int x = 0; x < k; ++x) {
    RngStream rng(10 + x, 0);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < draws; ++i) ++counts[EncodeKrr(x, k, budget, rng)];
    for (int y = 0; y < k; ++y) {
      const double p = expected.entry(x, y);
      const double sigma = std::sqrt(p * (1.0 - p) / draws);
      EXPECT_NEAR(static_cast<double>(counts[y]) / draws, p, 4.0 * sigma)
          << "entry (" << x << "," << y << ")";
    }
  }
}

TEST(EncodeRapporTest, HugeEpsilonKeepsTheOneHot) {
  RngStream rng(5, 0);
  const PrivacyBudget budget(60.0);
  for (int i = 0; i < 200; ++i) {
    const BitReport report = EncodeRappor(1, 3, budget, rng);
    EXPECT_FALSE(report.bit(0));
    EXPECT_TRUE(report.bit(1));
    EXPECT_FALSE(report.bit(2));
  }
}

TEST(EncodeRapporTest, BitFrequenciesMatchKeepAndFlip) {
  RngStream rng(6, 0);
  const PrivacyBudget budget(2.0 * std::log(3.0));  // keep = 0.75
  const int draws = 1000000;
  std::vector<int64_t> bit_counts(2, 0);
  for (int i = 0; i < draws; ++i) {
    EncodeRappor(0, 2, budget, rng).AccumulateInto(bit_counts);
  }
  EXPECT_NEAR(static_cast<double>(bit_counts[0]) / draws, 0.75, 0.002);
  EXPECT_NEAR(static_cast<double>(bit_counts[1]) / draws, 0.25, 0.002);
}

TEST(EnumerateRapporChannelTest, PassesPrivacyCheckOverAllOutputs) {
  const PrivacyBudget budget(1.0);
  const auto verdict = VerifyChannelDp(EnumerateRapporChannel(3, budget), budget);
  EXPECT_NEAR(verdict.max_ratio, budget.exp_epsilon(), 1e-12);
  EXPECT_TRUE(verdict.satisfied);
}

TEST(RapporBitMarginalTest, ClosedFormExamples) {
  const PrivacyBudget budget(2.0 * std::log(3.0));
  const auto point = RapporBitMarginal(ProbVector::PointMass(3, 0), budget);
  EXPECT_DOUBLE_EQ(point[0], 0.75);
  EXPECT_DOUBLE_EQ(point[1], 0.25);

  const auto blind = RapporBitMarginal(ProbVector::Uniform(4), PrivacyBudget(0.0));
  for (double m : blind) EXPECT_DOUBLE_EQ(m, 0.5);

  const auto uniform = RapporBitMarginal(ProbVector::Uniform(4), budget);
  for (double m : uniform) EXPECT_DOUBLE_EQ(m, 0.375);
}

// Mean of encoded bits over draws X ~ p converges to the closed-form
// marginal.
TEST(RapporBitMarginalTest, MatchesEncodedBitMeans) {
  const PrivacyBudget budget(1.0);
  const ProbVector p({0.6, 0.3, 0.1});
  const auto marginal = RapporBitMarginal(p, budget);
  RngStream rng(7, 0);
  const CategoricalSampler sampler(p.span());
  const int draws = 400000;
  std::vector<int64_t> bit_counts(3, 0);
  for (int i = 0; i < draws; ++i) {
    EncodeRappor(sampler.Sample(rng), 3, budget, rng).AccumulateInto(bit_counts);
  }
  for (int j = 0; j < 3; ++j) {
    const double sigma = std::sqrt(marginal[j] * (1.0 - marginal[j]) / draws);
    EXPECT_NEAR(static_cast<double>(bit_counts[j]) / draws, marginal[j], 4.0 * sigma);
  }
}

TEST(KrrOutputDistributionTest, ClosedFormExamples) {
  const PrivacyBudget ln2(std::log(2.0));
  const ProbVector m = KrrOutputDistribution(ProbVector::PointMass(3, 0), ln2);
  EXPECT_DOUBLE_EQ(m[0], 0.5);
  EXPECT_DOUBLE_EQ(m[1], 0.25);
  EXPECT_DOUBLE_EQ(m[2], 0.25);

  const ProbVector fixed = KrrOutputDistribution(ProbVector::Uniform(4), ln2);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(fixed[i], 0.25, 1e-15);

  const ProbVector blind =
      KrrOutputDistribution(ProbVector({0.9, 0.05, 0.05}), PrivacyBudget(0.0));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(blind[i], 1.0 / 3.0, 1e-15);
}

// Matrix-vector product through the channel equals the closed form.
TEST(KrrOutputDistributionTest, AgreesWithChannelPushThrough) {
  RngStream rng(8, 0);
  for (int k : {2, 3, 8, 17}) {
    for (double eps : {0.25, 1.0, std::log(static_cast<double>(k)), 4.0}) {
      const PrivacyBudget budget(eps);
      const ProbVector p(SampleDirichletUniform(k, rng));
      const auto closed = KrrOutputDistribution(p, budget);
      const auto product = BuildKrrChannel(k, budget).PushThrough(p.span());
      for (int i = 0; i < k; ++i) {
        EXPECT_NEAR(closed[i], product[i], 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace ldpest
