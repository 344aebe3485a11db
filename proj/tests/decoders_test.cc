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

#include "ldpest/decoders.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "ldpest/sampling.h"

namespace ldpest {
namespace {

// Independent projection oracle: enumerate every candidate support set,
// solve the equality-constrained minimizer on it, keep the feasible solution
// with the smallest objective. Exponential, for k <= ~12 only.
std::vector<double> BruteForceProjection(std::span<const double> v) {
  const int k = static_cast<int>(v.size());
  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<double> best(k, 0.0);
  for (uint32_t mask = 1; mask < (uint32_t{1} << k); ++mask) {
    double sum = 0.0;
    int size = 0;
    for (int i = 0; i < k; ++i) {
      if (mask & (uint32_t{1} << i)) {
        sum += v[i];
        ++size;
      }
    }
    const double theta = (sum - 1.0) / size;
    std::vector<double> w(k, 0.0);
    bool feasible = true;
    double objective = 0.0;
    for (int i = 0; i < k; ++i) {
      if (mask & (uint32_t{1} << i)) {
        w[i] = v[i] - theta;
        if (w[i] < -1e-12) {
          feasible = false;
          break;
        }
        w[i] = std::max(w[i], 0.0);
      }
      const double d = w[i] - v[i];
      objective += d * d;
    }
    if (feasible && objective < best_objective) {
      best_objective = objective;
      best = w;
    }
  }
  return best;
}

TEST(DecodeKrrEmpiricalTest, InvertsWorkedExamples) {
  const PrivacyBudget ln2(std::log(2.0));
  const auto recovered = DecodeKrrEmpirical(std::vector<double>{0.5, 0.25, 0.25}, ln2);
  EXPECT_NEAR(recovered[0], 1.0, 1e-12);
  EXPECT_NEAR(recovered[1], 0.0, 1e-12);
  EXPECT_NEAR(recovered[2], 0.0, 1e-12);

  const auto uniform =
      DecodeKrrEmpirical(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}, ln2);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(uniform[i], 1.0 / 3, 1e-12);

  const auto negative = DecodeKrrEmpirical(std::vector<double>{0.6, 0.2, 0.2}, ln2);
  EXPECT_NEAR(negative[0], 1.4, 1e-12);
  EXPECT_NEAR(negative[1], -0.2, 1e-12);
  EXPECT_NEAR(negative[2], -0.2, 1e-12);
}

TEST(DecodeKrrEmpiricalTest, EstimatesSumToOne) {
  RngStream rng(1, 0);
  const PrivacyBudget budget(0.7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto m_hat = SampleDirichletUniform(6, rng);
    const auto p_hat = DecodeKrrEmpirical(m_hat, budget);
    double sum = 0.0;
    for (int i = 0; i < p_hat.size(); ++i) sum += p_hat[i];
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(DecodeKrrEmpiricalTest, SingularAtZeroEpsilon) {
  EXPECT_THROW(
      DecodeKrrEmpirical(std::vector<double>{0.5, 0.5}, PrivacyBudget(0.0)),
      std::domain_error);
}

TEST(DecodeKrrEmpiricalTest, ExactlyInvertsTheOutputDistribution) {
  RngStream rng(2, 0);
  for (int k : {2, 5, 12}) {
    for (double eps : {0.3, 1.0, 3.0}) {
      const PrivacyBudget budget(eps);
      const ProbVector p(SampleDirichletUniform(k, rng));
      const ProbVector m = KrrOutputDistribution(p, budget);
      const auto recovered = DecodeKrrEmpirical(m.span(), budget);
      for (int i = 0; i < k; ++i) {
        EXPECT_NEAR(recovered[i], p[i], 1e-12);
      }
    }
  }
}

TEST(DecodeRapporEmpiricalTest, UnbiasesBitFrequencies) {
  const PrivacyBudget budget(2.0 * std::log(3.0));
  const auto high = DecodeRapporEmpirical(std::vector<int64_t>{75, 25}, 100, budget);
  EXPECT_NEAR(high[0], 1.0, 1e-12);  // 2*0.75 - 0.5
  EXPECT_NEAR(high[1], 0.0, 1e-12);  // the flip-probability baseline maps to 0

  const auto mid = DecodeRapporEmpirical(std::vector<int64_t>{50, 50, 50}, 100,
                                         PrivacyBudget(1.3));
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(mid[j], 0.5, 1e-12);

  EXPECT_THROW(
      DecodeRapporEmpirical(std::vector<int64_t>{5, 5}, 10, PrivacyBudget(0.0)),
      std::domain_error);
  EXPECT_THROW(DecodeRapporEmpirical(std::vector<int64_t>{11, 5}, 10, budget),
               std::invalid_argument);
}

TEST(NormalizeTruncateTest, TruncatesAndRenormalizes) {
  const auto clipped = NormalizeTruncate(SignedVector({1.4, -0.2, -0.2}));
  EXPECT_DOUBLE_EQ(clipped[0], 1.0);
  EXPECT_DOUBLE_EQ(clipped[1], 0.0);
  EXPECT_DOUBLE_EQ(clipped[2], 0.0);

  const auto untouched = NormalizeTruncate(SignedVector({0.5, 0.3, 0.2}));
  EXPECT_DOUBLE_EQ(untouched[0], 0.5);
  EXPECT_DOUBLE_EQ(untouched[1], 0.3);
  EXPECT_DOUBLE_EQ(untouched[2], 0.2);

  const auto renormalized = NormalizeTruncate(SignedVector({0.3, 0.3, -0.1}));
  EXPECT_DOUBLE_EQ(renormalized[0], 0.5);
  EXPECT_DOUBLE_EQ(renormalized[1], 0.5);
  EXPECT_DOUBLE_EQ(renormalized[2], 0.0);

  EXPECT_THROW(NormalizeTruncate(SignedVector({-0.5, -0.5, 0.0})), std::domain_error);
}

TEST(ProjectSimplexTest, WorkedExamples) {
  const auto vertex = ProjectSimplex(SignedVector({1.4, -0.2, -0.2}));
  EXPECT_NEAR(vertex[0], 1.0, 1e-12);
  EXPECT_NEAR(vertex[1], 0.0, 1e-12);
  EXPECT_NEAR(vertex[2], 0.0, 1e-12);

  const auto interior = ProjectSimplex(SignedVector({0.5, 0.3, 0.2}));
  EXPECT_NEAR(interior[0], 0.5, 1e-12);
  EXPECT_NEAR(interior[1], 0.3, 1e-12);
  EXPECT_NEAR(interior[2], 0.2, 1e-12);

  const auto symmetric = ProjectSimplex(SignedVector({0.5, 0.5, 0.5}));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(symmetric[i], 1.0 / 3.0, 1e-12);
}

TEST(ProjectSimplexTest, MatchesBruteForceQuadraticMinimization) {
  RngStream rng(3, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const int k = 2 + static_cast<int>(rng.NextBelow(9));
    std::vector<double> v(k);
    for (double& x : v) x = 4.0 * rng.NextDouble() - 2.0;
    const auto fast = ProjectSimplex(v);
    const auto slow = BruteForceProjection(v);
    for (int i = 0; i < k; ++i) {
      ASSERT_NEAR(fast[i], slow[i], 1e-9) << "rep " << rep;
    }
  }
}

TEST(ProjectSimplexTest, IdempotentAndNonExpansive) {
  RngStream rng(4, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const int k = 2 + static_cast<int>(rng.NextBelow(7));
    std::vector<double> u(k), v(k);
    for (int i = 0; i < k; ++i) {
      u[i] = 3.0 * rng.NextDouble() - 1.5;
      v[i] = 3.0 * rng.NextDouble() - 1.5;
    }
    const auto pu = ProjectSimplex(u);
    const auto pv = ProjectSimplex(v);
    const auto ppu = ProjectSimplex(pu.span());
    for (int i = 0; i < k; ++i) ASSERT_NEAR(ppu[i], pu[i], 1e-12);
    EXPECT_LE(L2SquaredDistance(pu.span(), pv.span()),
              L2SquaredDistance(u, v) + 1e-12);
  }
}

TEST(DecodeKrrMlTest, WaterFillingExamples) {
  // Active set {0, 1} gives lambda = 3; entry 1 lands exactly at zero and
  // entry 2 is excluded.
  const auto vertex =
      DecodeKrrMl(std::vector<int64_t>{6, 3, 1}, PrivacyBudget(std::log(2.0)));
  EXPECT_NEAR(vertex[0], 1.0, 1e-12);
  EXPECT_NEAR(vertex[1], 0.0, 1e-12);
  EXPECT_NEAR(vertex[2], 0.0, 1e-12);

  // All empirical entries nonnegative, so ML equals the empirical inverse.
  const auto interior =
      DecodeKrrMl(std::vector<int64_t>{5, 3, 2}, PrivacyBudget(std::log(4.0)));
  EXPECT_NEAR(interior[0], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(interior[1], 4.0 / 15.0, 1e-12);
  EXPECT_NEAR(interior[2], 1.0 / 15.0, 1e-12);

  const auto mass = DecodeKrrMl(std::vector<int64_t>{10, 0, 0, 0}, PrivacyBudget(1.0));
  EXPECT_NEAR(mass[0], 1.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(mass[i], 0.0, 1e-12);

  EXPECT_THROW(DecodeKrrMl(std::vector<int64_t>{0, 0}, PrivacyBudget(1.0)),
               std::invalid_argument);
}

TEST(DecodeKrrMlTest, DominatesConstrainedEmpiricalVariantsInLikelihood) {
  RngStream rng(5, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const int k = 2 + static_cast<int>(rng.NextBelow(7));
    const double eps = 0.2 + 2.5 * rng.NextDouble();
    const PrivacyBudget budget(eps);
    const int64_t n = 5 + static_cast<int64_t>(rng.NextBelow(200));
    const ProbVector p(SampleDirichletUniform(k, rng));
    const ProbVector m = KrrOutputDistribution(p, budget);
    std::vector<int64_t> counts(k);
    SampleMultinomial(n, m.span(), rng, counts);

    const auto ml = DecodeKrrMl(counts, budget);
    for (int i = 0; i < k; ++i) ASSERT_GE(ml[i], 0.0);

    std::vector<double> m_hat(k);
    for (int i = 0; i < k; ++i) {
      m_hat[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    }
    const auto empirical = DecodeKrrEmpirical(m_hat, budget);
    const double ml_ll = KrrLogLikelihood(counts, ml.span(), budget);
    EXPECT_GE(ml_ll + 1e-9,
              KrrLogLikelihood(counts, ProjectSimplex(empirical).span(), budget));
    bool nonnegative = true;
    double truncate_ll = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) nonnegative &= empirical[i] >= 0.0;
    try {
      truncate_ll =
          KrrLogLikelihood(counts, NormalizeTruncate(empirical).span(), budget);
    } catch (const std::domain_error&) {
      truncate_ll = -std::numeric_limits<double>::infinity();
    }
    EXPECT_GE(ml_ll + 1e-9, truncate_ll);
    if (nonnegative) {
      for (int i = 0; i < k; ++i) {
        EXPECT_NEAR(ml[i], empirical[i], 1e-9) << "rep " << rep;
      }
    }
  }
}

TEST(DecodeRapporMlTest, MatchesOneDimensionalBruteForce) {
  const PrivacyBudget budget(2.0 * std::log(3.0));
  const std::vector<int64_t> bit_counts{75, 25};
  const int64_t n = 100;
  const auto result = DecodeRapporMl(bit_counts, n, budget);

  double best_p1 = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 100000; ++i) {
    const double p1 = i * 1e-5;
    const std::vector<double> p{p1, 1.0 - p1};
    const double ll = RapporLogLikelihood(bit_counts, n, p, budget);
    if (ll > best_ll) {
      best_ll = ll;
      best_p1 = p1;
    }
  }
  EXPECT_NEAR(result.estimate[0], best_p1, 1e-4);
  EXPECT_GE(result.objective, best_ll - 1e-6);
}

TEST(DecodeRapporMlTest, PureNoiseStatisticsReturnUniform) {
  const PrivacyBudget budget(2.0 * std::log(3.0));  // delta = 0.25
  const std::vector<int64_t> noise{25, 25, 25, 25};
  const auto result = DecodeRapporMl(noise, 100, budget);
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(result.estimate[j], 0.25, 1e-6);
  }
}

TEST(DecodeRapporMlTest, NoiselessLimitRecoversTheVertex) {
  const PrivacyBudget budget(30.0);
  const std::vector<int64_t> clean{1000, 0, 0};
  const auto result = DecodeRapporMl(clean, 1000, budget);
  EXPECT_NEAR(result.estimate[0], 1.0, 1e-6);
  EXPECT_NEAR(result.estimate[1], 0.0, 1e-6);
}

TEST(DecodeRapporMlTest, ObjectiveTraceIsMonotone) {
  RngStream rng(6, 0);
  RapporMlOptions options;
  options.record_trace = true;
  for (int rep = 0; rep < 30; ++rep) {
    const int k = 2 + static_cast<int>(rng.NextBelow(9));
    const int64_t n = 50 + static_cast<int64_t>(rng.NextBelow(500));
    std::vector<int64_t> bits(k);
    for (auto& b : bits) b = static_cast<int64_t>(rng.NextBelow(n + 1));
    const auto result = DecodeRapporMl(bits, n, PrivacyBudget(1.0), options);
    for (size_t i = 1; i < result.objective_trace.size(); ++i) {
      ASSERT_GE(result.objective_trace[i] + 1e-12, result.objective_trace[i - 1])
          << "rep " << rep << " step " << i;
    }
  }
}

TEST(DecodeDispatchTest, ComposesConstraintsOnTheStandardOutput) {
  const PrivacyBudget ln2(std::log(2.0));
  // m_hat = (0.6, 0.2, 0.2) as counts over n = 10.
  const std::vector<int64_t> counts{6, 2, 2};
  const auto projected =
      Decode(DecoderKind::kProjected, Mechanism::kKrr, counts, 10, 3, ln2);
  EXPECT_TRUE(projected.on_simplex);
  EXPECT_NEAR(projected.estimate[0], 1.0, 1e-12);
  EXPECT_NEAR(projected.estimate[1], 0.0, 1e-12);

  const std::vector<int64_t> uniform{5, 5, 5};
  const auto standard =
      Decode(DecoderKind::kStandard, Mechanism::kKrr, uniform, 15, 3, ln2);
  EXPECT_FALSE(standard.on_simplex);
  for (double v : standard.estimate) EXPECT_NEAR(v, 1.0 / 3.0, 1e-12);

  EXPECT_THROW(
      Decode(DecoderKind::kStandard, Mechanism::kKrr, uniform, 15, 3, PrivacyBudget(0.0)),
      std::domain_error);

  const std::vector<int64_t> bits{40, 30, 20};
  const auto normalized =
      Decode(DecoderKind::kNormalized, Mechanism::kRappor, bits, 100, 3, PrivacyBudget(2.0));
  double sum = 0.0;
  for (double v : normalized.estimate) {
    EXPECT_GE(v, 0.0);
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

// With n = 1e6 reports at a comfortable privacy level, every decoder's l1
// error against the truth is small.
TEST(DecoderConsistencyTest, AllDecodersConvergeAtLargeN) {
  const int k = 8;
  const PrivacyBudget budget(std::log(8.0));
  const int64_t n = 1000000;
  RngStream rng(7, 0);
  std::vector<double> geometric(k);
  double w = 1.0, sum = 0.0;
  for (int i = 0; i < k; ++i) {
    geometric[i] = w;
    sum += w;
    w *= 0.5;
  }
  for (double& x : geometric) x /= sum;
  const ProbVector p(geometric);

  // k-RR sufficient statistics drawn from the exact output distribution.
  const ProbVector m = KrrOutputDistribution(p, budget);
  std::vector<int64_t> krr_counts(k);
  SampleMultinomial(n, m.span(), rng, krr_counts);
  for (auto kind : {DecoderKind::kStandard, DecoderKind::kNormalized,
                    DecoderKind::kProjected, DecoderKind::kMaximumLikelihood}) {
    const auto result = Decode(kind, Mechanism::kKrr, krr_counts, n, k, budget);
    EXPECT_LT(L1Distance(result.estimate, p.span()), 0.02)
        << "krr decoder " << static_cast<int>(kind);
  }

  // Bitwise mechanism statistics from the exact per-bit marginals.
  const auto marginal = RapporBitMarginal(p, budget);
  std::vector<int64_t> bit_counts(k);
  for (int j = 0; j < k; ++j) bit_counts[j] = SampleBinomial(n, marginal[j], rng);
  for (auto kind : {DecoderKind::kStandard, DecoderKind::kNormalized,
                    DecoderKind::kProjected, DecoderKind::kMaximumLikelihood}) {
    const auto result = Decode(kind, Mechanism::kRappor, bit_counts, n, k, budget);
    EXPECT_LT(L1Distance(result.estimate, p.span()), 0.02)
        << "rappor decoder " << static_cast<int>(kind);
  }
}

}  // namespace
}  // namespace ldpest
