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

#ifndef LDPEST_DECODERS_H_
#define LDPEST_DECODERS_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ldpest/mechanisms.h"
#include "ldpest/privacy_budget.h"
#include "ldpest/prob_vector.h"

namespace ldpest {

// Standard is the raw linear unbiasing and may leave the simplex; the other
// kinds always return a point on the simplex.
enum class DecoderKind { kStandard, kNormalized, kProjected, kMaximumLikelihood };

// Raised when an iterative decoder hits its iteration cap before reaching
// the requested tolerance. Carries the last iterate and gap estimate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& message, std::vector<double> last_iterate,
                   double gap)
      : std::runtime_error(message),
        last_iterate(std::move(last_iterate)),
        gap(gap) {}

  std::vector<double> last_iterate;
  double gap;
};

// Inverts the k-RR output map: p_hat = ((e^eps + k - 1) m_hat - 1) / (e^eps - 1).
// Entries sum to 1 but may be negative. Throws std::domain_error at eps = 0
// (the inversion is singular).
SignedVector DecodeKrrEmpirical(std::span<const double> m_hat,
                                const PrivacyBudget& budget);

// Per-coordinate unbiasing of bit frequencies:
// p_hat_j = ((e^{eps/2} + 1) / (e^{eps/2} - 1)) T_j/n - 1 / (e^{eps/2} - 1).
// No sum-to-one guarantee. Throws std::domain_error at eps = 0.
SignedVector DecodeRapporEmpirical(std::span<const int64_t> bit_counts, int64_t n,
                                   const PrivacyBudget& budget);

// Zeroes negative entries and renormalizes. Throws std::domain_error when no
// entry is positive.
ProbVector NormalizeTruncate(const SignedVector& v);

// Euclidean projection onto the probability simplex: sort descending, find
// the pivot rho = max{ j : u_j - (sum_{r<=j} u_r - 1)/j > 0 }, subtract
// theta = (sum_{r<=rho} u_r - 1)/rho and clip at zero. Total on finite
// inputs; ties in the sort are broken by original index for internal
// determinism (the projection itself is unique).
ProbVector ProjectSimplex(std::span<const double> v);
inline ProbVector ProjectSimplex(const SignedVector& v) {
  return ProjectSimplex(v.span());
}

// Exact maximum-likelihood estimate under k-RR via water-filling:
// p_hat_i = [T_i / lambda - 1/(e^eps - 1)]+ with the active set found by a
// single sort-and-scan pass (O(k log k)). Equals the empirical estimate
// whenever that estimate is nonnegative.
ProbVector DecodeKrrMl(std::span<const int64_t> counts, const PrivacyBudget& budget);

struct RapporMlOptions {
  double tol = 1e-8;         // absolute log-likelihood gap at termination
  int max_iterations = 10000;
  bool record_trace = false;
};

struct RapporMlResult {
  ProbVector estimate;
  double objective;
  double gap;  // linearization bound on the remaining objective gap
  int iterations;
  std::vector<double> objective_trace;  // nondecreasing; filled when requested
};

// Maximizes the bitwise-mechanism log-likelihood
//   sum_j (n - T_j) log((1-delta) - (1-2delta) p_j) + T_j log((1-2delta) p_j + delta)
// over the simplex by projected gradient ascent with backtracking line
// search, started from the projected empirical estimate. The returned point
// is within options.tol of the maximum in objective value. Throws
// ConvergenceError when the iteration cap is reached first.
RapporMlResult DecodeRapporMl(std::span<const int64_t> bit_counts, int64_t n,
                              const PrivacyBudget& budget,
                              const RapporMlOptions& options = {});

// Log-likelihoods used by the ML decoders, exposed for oracle checks.
double KrrLogLikelihood(std::span<const int64_t> counts, std::span<const double> p,
                        const PrivacyBudget& budget);
double RapporLogLikelihood(std::span<const int64_t> bit_counts, int64_t n,
                           std::span<const double> p, const PrivacyBudget& budget);

struct DecodeResult {
  std::vector<double> estimate;
  bool on_simplex;  // false only for DecoderKind::kStandard
};

// Dispatch over (decoder, mechanism). sufficient_stats holds output counts
// for k-RR and per-bit counts for the bitwise mechanism; Normalized and
// Projected apply their constraint to the Standard output.
DecodeResult Decode(DecoderKind kind, Mechanism mechanism,
                    std::span<const int64_t> sufficient_stats, int64_t n, int k,
                    const PrivacyBudget& budget,
                    const RapporMlOptions& ml_options = {});

}  // namespace ldpest

#endif  // LDPEST_DECODERS_H_
