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

#ifndef LDPEST_RISK_H_
#define LDPEST_RISK_H_

#include <cstdint>
#include <span>

#include "ldpest/mechanisms.h"
#include "ldpest/privacy_budget.h"
#include "ldpest/prob_vector.h"

namespace ldpest {

// Closed-form expected losses of a mechanism's standard (empirical) decoder
// against the true distribution. l1_asymptotic is a large-n approximation;
// the experiment harness compares it only at n >= 1e4.
struct RiskReport {
  double l2_squared;
  double l1_asymptotic;
  Mechanism mechanism;
  int k;
  int64_t n;
  double epsilon;
};

// E l2^2 = (1 - sum p_i^2)/n + ((k-1)/n) (k + 2(e^eps - 1)) / (e^eps - 1)^2,
// E l1 ~ sum_i sqrt(2((e^eps-1)p_i + 1)((e^eps-1)(1-p_i) + k - 1) /
//                   (pi n (e^eps - 1)^2)).
// Throws std::domain_error at eps = 0.
RiskReport KrrRisk(const ProbVector& p, int64_t n, const PrivacyBudget& budget);

// E l2^2 = (1 - sum p_i^2)/n + k e^{eps/2} / (n (e^{eps/2} - 1)^2),
// E l1 ~ sum_i sqrt(2((e^{eps/2}-1)p_i + 1)((e^{eps/2}-1)(1-p_i) + 1) /
//                   (pi n (e^{eps/2} - 1)^2)).
RiskReport RapporRisk(const ProbVector& p, int64_t n, const PrivacyBudget& budget);

// The uniform distribution maximizes both risks, so the risks evaluated at
// p_U are worst-case bounds in closed form.
RiskReport WorstCaseRisks(int k, int64_t n, const PrivacyBudget& budget,
                          Mechanism mechanism);

// f(eps, k) = (k/(k-1)) ((e^eps - 1)/(e^{eps/2} - 1))^2 e^{eps/2} / (2e^eps + k - 2).
// The k-RR empirical estimator beats the bitwise mechanism's in expected
// l2^2 exactly when f >= 1; f is increasing in eps.
double CrossoverF(int k, const PrivacyBudget& budget);

struct NonprivateRisks {
  double empirical_l2;             // (1 - sum p_i^2) / n
  double empirical_l1_asymptotic;  // sum_i sqrt(2 p_i (1-p_i) / (pi n))
  double minimax_l2;               // (1 - 1/k) / (sqrt(n) + 1)^2
  double minimax_l1_asymptotic;    // sqrt(2(k-1) / (pi n)), remainder dropped
};

NonprivateRisks ComputeNonprivateRisks(const ProbVector& p, int64_t n);

// The add-sqrt(n)/k smoothing estimator p_hat_i = (sqrt(n)/k + T_i)/(sqrt(n) + n),
// minimax-optimal for l2^2 in the non-private problem.
ProbVector MinimaxEstimatorL2(std::span<const int64_t> counts);

// Minimax rate envelopes for the private problem with the (unspecified)
// universal constants set to 1 — rates only, meaningful for comparisons of
// scaling, not absolute values. extrapolated flags eps outside [0, 1], the
// regime the bounds are stated for.
struct MinimaxRateBounds {
  double l2_lower;  // min{1, 1/sqrt(n eps^2), k/(n eps^2)}
  double l2_upper;  // min{1, k/(n eps^2)}
  double l1_lower;  // min{1, k/sqrt(n eps^2)}
  double l1_upper;  // min{1, k/sqrt(n eps^2)}
  bool extrapolated;
};

MinimaxRateBounds ComputeMinimaxRateBounds(int k, int64_t n,
                                           const PrivacyBudget& budget);

// l1 distance between p and the uniform distribution on k symbols; the
// "report the uniform distribution" baseline.
double UniformEstimateL1(const ProbVector& p);

}  // namespace ldpest

#endif  // LDPEST_RISK_H_
