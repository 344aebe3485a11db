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

#include "ldpest/risk.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ldpest {

namespace {

void RequirePositiveEpsilon(const PrivacyBudget& budget, const char* what) {
  if (budget.epsilon() <= 0.0) {
    throw std::domain_error(std::string(what) + ": undefined at epsilon = 0");
  }
}

void RequirePositiveN(int64_t n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be >= 1");
}

}  // namespace

RiskReport KrrRisk(const ProbVector& p, int64_t n, const PrivacyBudget& budget) {
  RequirePositiveEpsilon(budget, "KrrRisk");
  RequirePositiveN(n, "KrrRisk");
  const double k = p.size();
  const double nd = static_cast<double>(n);
  const double em1 = budget.exp_epsilon() - 1.0;

  const double l2 = (1.0 - p.SumOfSquares()) / nd +
                    ((k - 1.0) / nd) * (k + 2.0 * em1) / (em1 * em1);

  double l1 = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    l1 += std::sqrt(2.0 * (em1 * p[i] + 1.0) * (em1 * (1.0 - p[i]) + k - 1.0) /
                    (std::numbers::pi * nd * em1 * em1));
  }
  return RiskReport{l2, l1, Mechanism::kKrr, p.size(), n, budget.epsilon()};
}

RiskReport RapporRisk(const ProbVector& p, int64_t n, const PrivacyBudget& budget) {
  RequirePositiveEpsilon(budget, "RapporRisk");
  RequirePositiveN(n, "RapporRisk");
  const double k = p.size();
  const double nd = static_cast<double>(n);
  const double hm1 = budget.exp_half_epsilon() - 1.0;

  const double l2 = (1.0 - p.SumOfSquares()) / nd +
                    k * budget.exp_half_epsilon() / (nd * hm1 * hm1);

  double l1 = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    l1 += std::sqrt(2.0 * (hm1 * p[i] + 1.0) * (hm1 * (1.0 - p[i]) + 1.0) /
                    (std::numbers::pi * nd * hm1 * hm1));
  }
  return RiskReport{l2, l1, Mechanism::kRappor, p.size(), n, budget.epsilon()};
}

RiskReport WorstCaseRisks(int k, int64_t n, const PrivacyBudget& budget,
                          Mechanism mechanism) {
  if (k < 2) throw std::invalid_argument("WorstCaseRisks: k must be >= 2");
  switch (mechanism) {
    case Mechanism::kKrr:
      return KrrRisk(ProbVector::Uniform(k), n, budget);
    case Mechanism::kRappor:
      return RapporRisk(ProbVector::Uniform(k), n, budget);
    default:
      throw std::invalid_argument(
          "WorstCaseRisks: closed forms exist for the k-ary mechanisms only");
  }
}

double CrossoverF(int k, const PrivacyBudget& budget) {
  if (k < 2) throw std::invalid_argument("CrossoverF: k must be >= 2");
  RequirePositiveEpsilon(budget, "CrossoverF");
  const double e = budget.exp_epsilon();
  const double h = budget.exp_half_epsilon();
  const double ratio = (e - 1.0) / (h - 1.0);
  return (static_cast<double>(k) / (k - 1.0)) * ratio * ratio * h /
         (2.0 * e + k - 2.0);
}

NonprivateRisks ComputeNonprivateRisks(const ProbVector& p, int64_t n) {
  RequirePositiveN(n, "ComputeNonprivateRisks");
  const double k = p.size();
  const double nd = static_cast<double>(n);
  const double sqrt_n = std::sqrt(nd);

  double l1 = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    l1 += std::sqrt(2.0 * p[i] * (1.0 - p[i]) / (std::numbers::pi * nd));
  }
  return NonprivateRisks{
      (1.0 - p.SumOfSquares()) / nd,
      l1,
      (1.0 - 1.0 / k) / ((sqrt_n + 1.0) * (sqrt_n + 1.0)),
      std::sqrt(2.0 * (k - 1.0) / (std::numbers::pi * nd)),
  };
}

ProbVector MinimaxEstimatorL2(std::span<const int64_t> counts) {
  const int k = static_cast<int>(counts.size());
  if (k < 2) throw std::invalid_argument("MinimaxEstimatorL2: need k >= 2");
  int64_t n = 0;
  for (int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("MinimaxEstimatorL2: negative count");
    n += c;
  }
  RequirePositiveN(n, "MinimaxEstimatorL2");
  const double nd = static_cast<double>(n);
  const double sqrt_n = std::sqrt(nd);
  std::vector<double> p(k);
  for (int i = 0; i < k; ++i) {
    p[i] = (sqrt_n / k + static_cast<double>(counts[i])) / (sqrt_n + nd);
  }
  return ProbVector(std::move(p));
}

MinimaxRateBounds ComputeMinimaxRateBounds(int k, int64_t n,
                                           const PrivacyBudget& budget) {
  if (k < 2) throw std::invalid_argument("ComputeMinimaxRateBounds: k must be >= 2");
  RequirePositiveN(n, "ComputeMinimaxRateBounds");
  const double ne2 = static_cast<double>(n) * budget.epsilon() * budget.epsilon();
  const double kd = k;
  MinimaxRateBounds b{};
  if (ne2 <= 0.0) {
    b.l2_lower = b.l2_upper = b.l1_lower = b.l1_upper = 1.0;
  } else {
    b.l2_lower = std::min({1.0, 1.0 / std::sqrt(ne2), kd / ne2});
    b.l2_upper = std::min(1.0, kd / ne2);
    b.l1_lower = std::min(1.0, kd / std::sqrt(ne2));
    b.l1_upper = b.l1_lower;
  }
  b.extrapolated = budget.epsilon() > 1.0;
  return b;
}

double UniformEstimateL1(const ProbVector& p) {
  const double u = 1.0 / p.size();
  double l1 = 0.0;
  for (int i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - u);
  return l1;
}

}  // namespace ldpest
