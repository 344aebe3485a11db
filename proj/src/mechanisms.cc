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
#include <stdexcept>

namespace ldpest {

FlipParams RapporFlipParams(const PrivacyBudget& budget) {
  const double e_half = budget.exp_half_epsilon();
  return FlipParams{e_half / (1.0 + e_half), 1.0 / (1.0 + e_half)};
}

FlipParams RapporPerBitFlipParams(const PrivacyBudget& budget, int num_hashes) {
  if (num_hashes < 1) {
    throw std::invalid_argument("RapporPerBitFlipParams: num_hashes must be >= 1");
  }
  const double e_bit = std::exp(budget.epsilon() / (2.0 * num_hashes));
  return FlipParams{e_bit / (1.0 + e_bit), 1.0 / (1.0 + e_bit)};
}

Channel BuildKrrChannel(int k, const PrivacyBudget& budget) {
  if (k < 2) {
    throw std::invalid_argument("BuildKrrChannel: k must be >= 2");
  }
  const double denom = budget.exp_epsilon() + k - 1.0;
  const double diag = budget.exp_epsilon() / denom;
  const double off = 1.0 / denom;
  std::vector<std::vector<double>> rows(k, std::vector<double>(k, off));
  for (int x = 0; x < k; ++x) rows[x][x] = diag;
  return Channel(std::move(rows));
}

int EncodeKrr(int x, int k, const PrivacyBudget& budget, RngStream& rng) {
  if (k < 2) throw std::invalid_argument("EncodeKrr: k must be >= 2");
  if (x < 0 || x >= k) throw std::invalid_argument("EncodeKrr: symbol out of range");
  const double truth_prob = budget.exp_epsilon() / (budget.exp_epsilon() + k - 1.0);
  if (rng.NextBernoulli(truth_prob)) return x;
  const auto lie = static_cast<int>(rng.NextBelow(static_cast<uint64_t>(k - 1)));
  return lie < x ? lie : lie + 1;
}

BitReport::BitReport(int k) : k_(k), words_((k + 63) / 64, 0) {
  if (k < 1) throw std::invalid_argument("BitReport: k must be >= 1");
}

void BitReport::AccumulateInto(std::span<int64_t> bit_counts) const {
  if (static_cast<int>(bit_counts.size()) != k_) {
    throw std::invalid_argument("BitReport::AccumulateInto: size mismatch");
  }
  for (int j = 0; j < k_; ++j) {
    bit_counts[j] += bit(j) ? 1 : 0;
  }
}

BitReport EncodeRappor(int x, int k, const PrivacyBudget& budget, RngStream& rng) {
  if (k < 2) throw std::invalid_argument("EncodeRappor: k must be >= 2");
  if (x < 0 || x >= k) throw std::invalid_argument("EncodeRappor: symbol out of range");
  const FlipParams fp = RapporFlipParams(budget);
  BitReport report(k);
  for (int j = 0; j < k; ++j) {
    const bool one_hot = (j == x);
    const bool flipped = rng.NextBernoulli(fp.flip_prob);
    if (one_hot != flipped) report.SetBit(j);
  }
  return report;
}

std::vector<double> RapporBitMarginal(const ProbVector& p, const PrivacyBudget& budget) {
  const double e_half = budget.exp_half_epsilon();
  const double slope = (e_half - 1.0) / (e_half + 1.0);
  const double intercept = 1.0 / (e_half + 1.0);
  std::vector<double> marginal(p.size());
  for (int j = 0; j < p.size(); ++j) {
    marginal[j] = slope * p[j] + intercept;
  }
  return marginal;
}

ProbVector KrrOutputDistribution(const ProbVector& p, const PrivacyBudget& budget) {
  const double denom = budget.exp_epsilon() + p.size() - 1.0;
  const double slope = (budget.exp_epsilon() - 1.0) / denom;
  const double intercept = 1.0 / denom;
  std::vector<double> m(p.size());
  for (int i = 0; i < p.size(); ++i) {
    m[i] = slope * p[i] + intercept;
  }
  return ProbVector(std::move(m));
}

Channel EnumerateRapporChannel(int k, const PrivacyBudget& budget) {
  if (k < 2 || k > 20) {
    throw std::invalid_argument("EnumerateRapporChannel: k must be in [2, 20]");
  }
  const FlipParams fp = RapporFlipParams(budget);
  const int64_t num_outputs = int64_t{1} << k;
  std::vector<std::vector<double>> rows(k);
  for (int x = 0; x < k; ++x) {
    rows[x].resize(num_outputs);
    for (int64_t y = 0; y < num_outputs; ++y) {
      double prob = 1.0;
      for (int j = 0; j < k; ++j) {
        const bool bit = (y >> j) & 1;
        const bool one_hot = (j == x);
        prob *= (bit == one_hot) ? fp.keep_prob : fp.flip_prob;
      }
      rows[x][y] = prob;
    }
  }
  return Channel(std::move(rows));
}

}  // namespace ldpest
