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
#include <numeric>

namespace ldpest {

namespace {

constexpr double kLogClamp = 1e-12;

void RequirePositiveEpsilon(const PrivacyBudget& budget, const char* what) {
  if (budget.epsilon() <= 0.0) {
    throw std::domain_error(std::string(what) +
                            ": inversion is singular at epsilon = 0");
  }
}

}  // namespace

SignedVector DecodeKrrEmpirical(std::span<const double> m_hat,
                                const PrivacyBudget& budget) {
  RequirePositiveEpsilon(budget, "DecodeKrrEmpirical");
  const double k = static_cast<double>(m_hat.size());
  const double scale = (budget.exp_epsilon() + k - 1.0) / (budget.exp_epsilon() - 1.0);
  const double shift = 1.0 / (budget.exp_epsilon() - 1.0);
  std::vector<double> p(m_hat.size());
  for (size_t i = 0; i < m_hat.size(); ++i) {
    p[i] = scale * m_hat[i] - shift;
  }
  return SignedVector(std::move(p));
}

SignedVector DecodeRapporEmpirical(std::span<const int64_t> bit_counts, int64_t n,
                                   const PrivacyBudget& budget) {
  RequirePositiveEpsilon(budget, "DecodeRapporEmpirical");
  if (n < 1) throw std::invalid_argument("DecodeRapporEmpirical: n must be >= 1");
  const double e_half = budget.exp_half_epsilon();
  const double scale = (e_half + 1.0) / (e_half - 1.0);
  const double shift = 1.0 / (e_half - 1.0);
  std::vector<double> p(bit_counts.size());
  for (size_t j = 0; j < bit_counts.size(); ++j) {
    if (bit_counts[j] < 0 || bit_counts[j] > n) {
      throw std::invalid_argument("DecodeRapporEmpirical: bit count out of [0, n]");
    }
    p[j] = scale * (static_cast<double>(bit_counts[j]) / static_cast<double>(n)) - shift;
  }
  return SignedVector(std::move(p));
}

ProbVector NormalizeTruncate(const SignedVector& v) {
  std::vector<double> p(v.size());
  double sum = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    p[i] = std::max(v[i], 0.0);
    sum += p[i];
  }
  if (sum <= 0.0) {
    throw std::domain_error("NormalizeTruncate: no positive entry to renormalize");
  }
  for (double& x : p) x /= sum;
  return ProbVector(std::move(p));
}

ProbVector ProjectSimplex(std::span<const double> v) {
  const int k = static_cast<int>(v.size());
  if (k < 2) throw std::invalid_argument("ProjectSimplex: need k >= 2");
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return v[a] > v[b]; });
  double prefix = 0.0;
  double theta = 0.0;
  for (int j = 0; j < k; ++j) {
    prefix += v[order[j]];
    const double candidate = (prefix - 1.0) / (j + 1.0);
    if (v[order[j]] - candidate > 0.0) {
      theta = candidate;
    }
  }
  std::vector<double> p(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    p[i] = std::max(v[i] - theta, 0.0);
    sum += p[i];
  }
  for (double& x : p) x /= sum;  // absorb rounding; sum is 1 up to fp error
  return ProbVector(std::move(p));
}

ProbVector DecodeKrrMl(std::span<const int64_t> counts, const PrivacyBudget& budget) {
  RequirePositiveEpsilon(budget, "DecodeKrrMl");
  const int k = static_cast<int>(counts.size());
  if (k < 2) throw std::invalid_argument("DecodeKrrMl: need k >= 2");
  int64_t n = 0;
  for (int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("DecodeKrrMl: negative count");
    n += c;
  }
  if (n < 1) throw std::invalid_argument("DecodeKrrMl: n must be >= 1");

  // Water-filling: with c = 1/(e^eps - 1), the active set is the largest
  // prefix of the descending counts where T_(rho) / lambda_rho > c, and
  // lambda_rho = (sum of the prefix) / (1 + rho * c).
  const double c = 1.0 / (budget.exp_epsilon() - 1.0);
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return counts[a] > counts[b]; });

  double prefix = 0.0;
  double lambda = 0.0;
  int active = 0;
  for (int j = 0; j < k; ++j) {
    prefix += static_cast<double>(counts[order[j]]);
    const double candidate = prefix / (1.0 + (j + 1.0) * c);
    if (static_cast<double>(counts[order[j]]) > c * candidate) {
      lambda = candidate;
      active = j + 1;
    }
  }

  std::vector<double> p(k, 0.0);
  double sum = 0.0;
  for (int j = 0; j < active; ++j) {
    const int i = order[j];
    p[i] = std::max(static_cast<double>(counts[i]) / lambda - c, 0.0);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return ProbVector(std::move(p));
}

double KrrLogLikelihood(std::span<const int64_t> counts, std::span<const double> p,
                        const PrivacyBudget& budget) {
  if (counts.size() != p.size()) {
    throw std::invalid_argument("KrrLogLikelihood: dimension mismatch");
  }
  const double k = static_cast<double>(counts.size());
  const double log_denom = std::log(budget.exp_epsilon() + k - 1.0);
  double ll = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    ll += static_cast<double>(counts[i]) *
          (std::log((budget.exp_epsilon() - 1.0) * std::max(p[i], 0.0) + 1.0) -
           log_denom);
  }
  return ll;
}

double RapporLogLikelihood(std::span<const int64_t> bit_counts, int64_t n,
                           std::span<const double> p, const PrivacyBudget& budget) {
  if (bit_counts.size() != p.size()) {
    throw std::invalid_argument("RapporLogLikelihood: dimension mismatch");
  }
  const double delta = RapporFlipParams(budget).flip_prob;
  const double slope = 1.0 - 2.0 * delta;
  double ll = 0.0;
  for (size_t j = 0; j < p.size(); ++j) {
    const double pj = std::clamp(p[j], kLogClamp, 1.0 - kLogClamp);
    const double t = static_cast<double>(bit_counts[j]);
    ll += (static_cast<double>(n) - t) * std::log((1.0 - delta) - slope * pj) +
          t * std::log(slope * pj + delta);
  }
  return ll;
}

RapporMlResult DecodeRapporMl(std::span<const int64_t> bit_counts, int64_t n,
                              const PrivacyBudget& budget,
                              const RapporMlOptions& options) {
  RequirePositiveEpsilon(budget, "DecodeRapporMl");
  if (options.tol <= 0.0) throw std::invalid_argument("DecodeRapporMl: tol must be > 0");
  const int k = static_cast<int>(bit_counts.size());
  const double nd = static_cast<double>(n);
  const double delta = RapporFlipParams(budget).flip_prob;
  const double slope = 1.0 - 2.0 * delta;

  // The solver works on the 1/n-scaled log-likelihood so objective values
  // stay O(1) and comparisons are meaningful near the optimum; gaps are
  // reported back in absolute log-likelihood units.
  auto objective = [&](std::span<const double> p) {
    return RapporLogLikelihood(bit_counts, n, p, budget) / nd;
  };
  auto gradient = [&](std::span<const double> p, std::span<double> g) {
    for (int j = 0; j < k; ++j) {
      const double pj = std::clamp(p[j], kLogClamp, 1.0 - kLogClamp);
      const double t = static_cast<double>(bit_counts[j]) / nd;
      g[j] = -(1.0 - t) * slope / ((1.0 - delta) - slope * pj) +
             t * slope / (slope * pj + delta);
    }
  };
  // Linearization certificate over the simplex: for a concave objective,
  // L* <= L(p) + max_i g_i - <g, p>.
  auto frank_wolfe_gap = [&](std::span<const double> p, std::span<const double> g) {
    double max_g = g[0], gp = 0.0;
    for (int j = 0; j < k; ++j) {
      max_g = std::max(max_g, g[j]);
      gp += g[j] * p[j];
    }
    return max_g - gp;
  };

  std::vector<double> p =
      ProjectSimplex(DecodeRapporEmpirical(bit_counts, n, budget)).entries();
  double obj = objective(p);
  // The objective is separable, so the gradient's Lipschitz constant is the
  // largest per-coordinate curvature; both log denominators stay >= delta,
  // giving slope^2/delta^2. Steps at or below its inverse are ascent steps
  // without needing an objective comparison, which matters near the optimum
  // where true improvements sink below double resolution.
  const double safe_step = (delta * delta) / (slope * slope);
  double step = safe_step;
  std::vector<double> grad(k), shifted(k);
  RapporMlResult result{ProbVector::Uniform(k), obj, 0.0, 0, {}};
  if (options.record_trace) result.objective_trace.push_back(obj * nd);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    gradient(p, grad);
    const double gap = frank_wolfe_gap(p, grad) * nd;
    if (gap <= options.tol) {
      result.estimate = ProbVector(p);
      result.objective = obj * nd;
      result.gap = gap;
      result.iterations = iter - 1;
      return result;
    }

    // Backtrack from twice the last accepted step down to the safe step. A
    // large step must buy a strict improvement clearly above double
    // resolution; anything subtler is left to the safe step, whose ascent is
    // guaranteed by the curvature bound rather than a noisy comparison.
    step = std::min(step * 2.0, 1e6 * safe_step);
    bool moved = false;
    while (step > safe_step) {
      for (int j = 0; j < k; ++j) shifted[j] = p[j] + step * grad[j];
      const ProbVector projected = ProjectSimplex(shifted);
      double progress = 0.0;
      for (int j = 0; j < k; ++j) progress += grad[j] * (projected[j] - p[j]);
      const double cand_obj = objective(projected.span());
      if (cand_obj >= obj + 1e-4 * progress &&
          cand_obj > obj + 1e-12 * (1.0 + std::abs(obj))) {
        p = projected.entries();
        obj = cand_obj;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      step = safe_step;
      for (int j = 0; j < k; ++j) shifted[j] = p[j] + step * grad[j];
      const ProbVector projected = ProjectSimplex(shifted);
      double dist2 = 0.0;
      for (int j = 0; j < k; ++j) {
        const double d = projected[j] - p[j];
        dist2 += d * d;
      }
      p = projected.entries();
      obj = objective(p);
      if (options.record_trace) result.objective_trace.push_back(obj * nd);
      if (dist2 < 1e-30) break;  // stationary at floating-point resolution
      continue;
    }
    if (options.record_trace) result.objective_trace.push_back(obj * nd);
  }

  gradient(p, grad);
  const double gap = frank_wolfe_gap(p, grad) * nd;
  if (gap <= options.tol) {
    result.estimate = ProbVector(p);
    result.objective = obj * nd;
    result.gap = gap;
    result.iterations = options.max_iterations;
    return result;
  }
  throw ConvergenceError("DecodeRapporMl: iteration cap reached before tolerance",
                         p, gap);
}

DecodeResult Decode(DecoderKind kind, Mechanism mechanism,
                    std::span<const int64_t> sufficient_stats, int64_t n, int k,
                    const PrivacyBudget& budget, const RapporMlOptions& ml_options) {
  if (mechanism != Mechanism::kKrr && mechanism != Mechanism::kRappor) {
    throw std::invalid_argument("Decode: dispatch covers the k-ary mechanisms only");
  }
  if (static_cast<int>(sufficient_stats.size()) != k) {
    throw std::invalid_argument("Decode: sufficient statistics have wrong size");
  }
  if (n < 1) throw std::invalid_argument("Decode: n must be >= 1");

  if (kind == DecoderKind::kMaximumLikelihood) {
    if (mechanism == Mechanism::kKrr) {
      return DecodeResult{DecodeKrrMl(sufficient_stats, budget).entries(), true};
    }
    return DecodeResult{
        DecodeRapporMl(sufficient_stats, n, budget, ml_options).estimate.entries(),
        true};
  }

  SignedVector standard = [&] {
    if (mechanism == Mechanism::kKrr) {
      std::vector<double> m_hat(k);
      for (int i = 0; i < k; ++i) {
        m_hat[i] = static_cast<double>(sufficient_stats[i]) / static_cast<double>(n);
      }
      return DecodeKrrEmpirical(m_hat, budget);
    }
    return DecodeRapporEmpirical(sufficient_stats, n, budget);
  }();

  switch (kind) {
    case DecoderKind::kStandard:
      return DecodeResult{standard.entries(), false};
    case DecoderKind::kNormalized:
      return DecodeResult{NormalizeTruncate(standard).entries(), true};
    case DecoderKind::kProjected:
      return DecodeResult{ProjectSimplex(standard).entries(), true};
    default:
      throw std::invalid_argument("Decode: unknown decoder kind");
  }
}

}  // namespace ldpest
