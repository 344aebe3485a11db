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

#ifndef LDPEST_MECHANISMS_H_
#define LDPEST_MECHANISMS_H_

#include <cstdint>
#include <vector>

#include "ldpest/channel.h"
#include "ldpest/privacy_budget.h"
#include "ldpest/prob_vector.h"
#include "ldpest/rng.h"

namespace ldpest {

enum class Mechanism { kKrr, kRappor, kOrr, kOrappor };

// Per-bit keep/flip probabilities for bitwise randomization:
// keep = e^{eps/2} / (1 + e^{eps/2}), flip = 1 - keep. Two one-hot inputs
// differ in at most two bits, each contributing a factor e^{eps/2}, so the
// whole report is eps-DP.
struct FlipParams {
  double keep_prob;
  double flip_prob;
};

FlipParams RapporFlipParams(const PrivacyBudget& budget);

// Same split with the per-bit budget eps/(2h); used when a symbol occupies
// up to h bits of a Bloom code.
FlipParams RapporPerBitFlipParams(const PrivacyBudget& budget, int num_hashes);

// The k-ary randomized response channel: diagonal e^eps / (e^eps + k - 1),
// off-diagonal 1 / (e^eps + k - 1). For k = 2 this is exactly the classic
// two-question randomized response matrix.
Channel BuildKrrChannel(int k, const PrivacyBudget& budget);

// One randomized-response report: returns x with probability
// e^eps / (e^eps + k - 1), otherwise a uniform draw over the other k - 1
// symbols.
int EncodeKrr(int x, int k, const PrivacyBudget& budget, RngStream& rng);

// A length-k privatized bit vector, stored packed. Any bit pattern is a
// legal report.
class BitReport {
 public:
  explicit BitReport(int k);

  int size() const { return k_; }
  bool bit(int j) const { return (words_[j >> 6] >> (j & 63)) & 1; }
  void SetBit(int j) { words_[j >> 6] |= uint64_t{1} << (j & 63); }
  void FlipBit(int j) { words_[j >> 6] ^= uint64_t{1} << (j & 63); }

  // Adds this report's bits into per-coordinate counters, so aggregation
  // never materializes an n x k bit matrix.
  void AccumulateInto(std::span<int64_t> bit_counts) const;

  bool operator==(const BitReport& other) const = default;

 private:
  int k_;
  std::vector<uint64_t> words_;
};

// Basic one-time bitwise randomization: one-hot encode x, then flip each of
// the k bits independently with probability 1 / (1 + e^{eps/2}).
BitReport EncodeRappor(int x, int k, const PrivacyBudget& budget, RngStream& rng);

// P(Y^{(j)} = 1) = ((e^{eps/2} - 1) / (e^{eps/2} + 1)) p_j + 1 / (e^{eps/2} + 1).
std::vector<double> RapporBitMarginal(const ProbVector& p, const PrivacyBudget& budget);

// Output distribution of k-RR: m = ((e^eps - 1) p + 1) / (e^eps + k - 1).
ProbVector KrrOutputDistribution(const ProbVector& p, const PrivacyBudget& budget);

// Materializes the k x 2^k report channel of the bitwise mechanism for
// verification; output index y encodes the bit pattern. Guarded to k <= 20.
Channel EnumerateRapporChannel(int k, const PrivacyBudget& budget);

}  // namespace ldpest

#endif  // LDPEST_MECHANISMS_H_
