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

#include "ldpest/sampling.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldpest {

namespace {

void CheckDistribution(std::span<const double> dist) {
  if (dist.empty()) {
    throw std::invalid_argument("SampleCategorical: empty distribution");
  }
  double sum = 0.0;
  for (double v : dist) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("SampleCategorical: negative or non-finite mass");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw std::invalid_argument("SampleCategorical: masses do not sum to 1");
  }
}

std::vector<double> BuildCumulative(std::span<const double> dist) {
  CheckDistribution(dist);
  std::vector<double> cumulative(dist.size());
  double acc = 0.0;
  for (size_t i = 0; i < dist.size(); ++i) {
    acc += dist[i];
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;  // absorb rounding so every u in [0,1) lands
  return cumulative;
}

int SampleFromCumulative(const std::vector<double>& cumulative, RngStream& rng) {
  const double u = rng.NextDouble();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<int>(std::min<size_t>(it - cumulative.begin(),
                                           cumulative.size() - 1));
}

// Binomial by CDF inversion; valid when n*log1p(-p) stays far from the
// double underflow threshold, which the caller guarantees via the small
// n*p routing below.
int64_t BinomialInversion(int64_t n, double p, RngStream& rng) {
  const double q = 1.0 - p;
  const double s = p / q;
  double f = std::exp(static_cast<double>(n) * std::log1p(-p));
  double u = rng.NextDouble();
  int64_t k = 0;
  while (u > f && k < n) {
    u -= f;
    ++k;
    f *= s * static_cast<double>(n - k + 1) / static_cast<double>(k);
  }
  return k;
}

// Hormann's BTRS transformed rejection, exact for n*min(p,1-p) >= 10. The
// acceptance test compares against the log pmf ratio computed with lgamma.
int64_t BinomialBtrs(int64_t n, double p, RngStream& rng) {
  const double q = 1.0 - p;
  const double nd = static_cast<double>(n);
  const double spq = std::sqrt(nd * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double log_r = std::log(p / q);
  const double m = std::floor((nd + 1.0) * p);
  const double lpm = std::lgamma(m + 1.0) + std::lgamma(nd - m + 1.0);

  for (;;) {
    const double u = rng.NextDouble() - 0.5;
    const double v = rng.NextDouble();
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + c);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<int64_t>(kd);
    }
    if (kd < 0.0 || kd > nd) continue;
    const double log_accept = std::log(v * alpha / (a / (us * us) + b));
    const double log_pmf_ratio = lpm - std::lgamma(kd + 1.0) -
                                 std::lgamma(nd - kd + 1.0) + (kd - m) * log_r;
    if (log_accept <= log_pmf_ratio) {
      return static_cast<int64_t>(kd);
    }
  }
}

}  // namespace

int SampleCategorical(std::span<const double> dist, RngStream& rng) {
  return SampleFromCumulative(BuildCumulative(dist), rng);
}

CategoricalSampler::CategoricalSampler(std::span<const double> dist)
    : cumulative_(BuildCumulative(dist)) {}

int CategoricalSampler::Sample(RngStream& rng) const {
  return SampleFromCumulative(cumulative_, rng);
}

ProbVector EmpiricalFrequencies(std::span<const int> reports, int l) {
  if (reports.empty()) {
    throw std::invalid_argument("EmpiricalFrequencies: need at least one report");
  }
  if (l < 2) {
    throw std::invalid_argument("EmpiricalFrequencies: output size must be >= 2");
  }
  std::vector<double> freq(l, 0.0);
  const double inv_n = 1.0 / static_cast<double>(reports.size());
  for (int r : reports) {
    if (r < 0 || r >= l) {
      throw std::invalid_argument("EmpiricalFrequencies: report index out of range");
    }
    freq[r] += inv_n;
  }
  return ProbVector(std::move(freq));
}

int64_t SampleBinomial(int64_t n, double p, RngStream& rng) {
  if (n < 0) throw std::invalid_argument("SampleBinomial: n must be >= 0");
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw std::invalid_argument("SampleBinomial: p must lie in [0, 1]");
  }
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  // Work with p <= 0.5 and mirror the result.
  const bool mirrored = p > 0.5;
  const double ps = mirrored ? 1.0 - p : p;
  const double np = static_cast<double>(n) * ps;
  const int64_t draw =
      np < 10.0 ? BinomialInversion(n, ps, rng) : BinomialBtrs(n, ps, rng);
  return mirrored ? n - draw : draw;
}

void SampleMultinomial(int64_t n, std::span<const double> p, RngStream& rng,
                       std::span<int64_t> out) {
  if (p.size() != out.size() || p.empty()) {
    throw std::invalid_argument("SampleMultinomial: dimension mismatch");
  }
  int64_t remaining = n;
  double mass_left = 1.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    if (remaining == 0 || mass_left <= 0.0) {
      out[i] = 0;
      continue;
    }
    const double cond = std::clamp(p[i] / mass_left, 0.0, 1.0);
    const int64_t c = SampleBinomial(remaining, cond, rng);
    out[i] = c;
    remaining -= c;
    mass_left -= p[i];
  }
  out[p.size() - 1] = remaining;
}

std::vector<double> SampleDirichletUniform(int k, RngStream& rng) {
  if (k < 2) throw std::invalid_argument("SampleDirichletUniform: k must be >= 2");
  std::vector<double> v(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    // Exp(1) via inverse transform; -log of a strictly positive uniform.
    double u;
    do {
      u = rng.NextDouble();
    } while (u <= 0.0);
    v[i] = -std::log(u);
    sum += v[i];
  }
  for (double& x : v) x /= sum;
  return v;
}

}  // namespace ldpest
