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

#ifndef LDPEST_CHANNEL_H_
#define LDPEST_CHANNEL_H_

#include <functional>
#include <span>
#include <vector>

#include "ldpest/privacy_budget.h"

namespace ldpest {

// A k x l row-stochastic matrix Q(y|x): rows are inputs, columns outputs.
// Immutable after construction.
class Channel {
 public:
  // Throws std::invalid_argument (naming the offending row) when a row has a
  // negative entry or does not sum to 1 within kProbTolerance.
  explicit Channel(std::vector<std::vector<double>> rows);

  int input_size() const { return static_cast<int>(rows_.size()); }
  int output_size() const { return static_cast<int>(rows_[0].size()); }
  double entry(int x, int y) const { return rows_[x][y]; }
  const std::vector<double>& row(int x) const { return rows_[x]; }

  // Output distribution p * Q for an input distribution p.
  std::vector<double> PushThrough(std::span<const double> p) const;

 private:
  std::vector<std::vector<double>> rows_;
};

struct DpVerification {
  double max_ratio = 1.0;  // +infinity when some output separates two inputs
  bool satisfied = false;
};

// Checks the local differential privacy bound Q(y|x) <= e^eps * Q(y|x') over
// all singleton outputs y and input pairs (x, x'); the bound for arbitrary
// output events follows by summation, so singletons suffice for discrete
// channels. A 0/0 likelihood ratio counts as 1 (the bound is vacuous on null
// events) and positive/0 as +infinity. satisfied is true when
// max_ratio <= e^eps * (1 + 1e-9).
DpVerification VerifyChannelDp(const Channel& q, const PrivacyBudget& budget);

// Streaming variant for channels too large to materialize (e.g. the 2^k
// report space of a bitwise mechanism). fill_column must write
// Q(y | x) for x = 0..num_inputs-1 into its output span.
DpVerification VerifyEnumeratedDp(
    int num_inputs, int64_t num_outputs,
    const std::function<void(int64_t y, std::span<double> column)>& fill_column,
    const PrivacyBudget& budget);

}  // namespace ldpest

#endif  // LDPEST_CHANNEL_H_
