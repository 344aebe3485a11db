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

#include "ldpest/channel.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ldpest/prob_vector.h"

namespace ldpest {

Channel::Channel(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  if (rows_.empty() || rows_[0].empty()) {
    throw std::invalid_argument("Channel: empty matrix");
  }
  const size_t l = rows_[0].size();
  for (size_t x = 0; x < rows_.size(); ++x) {
    if (rows_[x].size() != l) {
      throw std::invalid_argument("Channel: row " + std::to_string(x) +
                                  " has inconsistent length");
    }
    double sum = 0.0;
    for (double v : rows_[x]) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("Channel: row " + std::to_string(x) +
                                    " has a negative or non-finite entry");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
      throw std::invalid_argument("Channel: row " + std::to_string(x) + " sums to " +
                                  std::to_string(sum) + ", expected 1");
    }
  }
}

std::vector<double> Channel::PushThrough(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != input_size()) {
    throw std::invalid_argument("Channel::PushThrough: dimension mismatch");
  }
  std::vector<double> m(output_size(), 0.0);
  for (int x = 0; x < input_size(); ++x) {
    const double px = p[x];
    if (px == 0.0) continue;
    const auto& row = rows_[x];
    for (int y = 0; y < output_size(); ++y) {
      m[y] += px * row[y];
    }
  }
  return m;
}

namespace {

// Worst pairwise likelihood ratio within one output column.
double ColumnRatio(std::span<const double> column) {
  double max_pos = 0.0;
  double min_pos = std::numeric_limits<double>::infinity();
  bool has_zero = false;
  for (double v : column) {
    if (v > 0.0) {
      if (v > max_pos) max_pos = v;
      if (v < min_pos) min_pos = v;
    } else {
      has_zero = true;
    }
  }
  if (max_pos == 0.0) return 1.0;  // all-zero column: 0/0 counts as 1
  if (has_zero) return std::numeric_limits<double>::infinity();
  return max_pos / min_pos;
}

}  // namespace

DpVerification VerifyChannelDp(const Channel& q, const PrivacyBudget& budget) {
  std::vector<double> column(q.input_size());
  double max_ratio = 1.0;
  for (int y = 0; y < q.output_size(); ++y) {
    for (int x = 0; x < q.input_size(); ++x) column[x] = q.entry(x, y);
    max_ratio = std::max(max_ratio, ColumnRatio(column));
  }
  return DpVerification{max_ratio,
                        max_ratio <= budget.exp_epsilon() * (1.0 + 1e-9)};
}

DpVerification VerifyEnumeratedDp(
    int num_inputs, int64_t num_outputs,
    const std::function<void(int64_t y, std::span<double> column)>& fill_column,
    const PrivacyBudget& budget) {
  if (num_inputs < 1 || num_outputs < 1) {
    throw std::invalid_argument("VerifyEnumeratedDp: empty channel");
  }
  std::vector<double> column(num_inputs);
  double max_ratio = 1.0;
  for (int64_t y = 0; y < num_outputs; ++y) {
    fill_column(y, column);
    max_ratio = std::max(max_ratio, ColumnRatio(column));
  }
  return DpVerification{max_ratio,
                        max_ratio <= budget.exp_epsilon() * (1.0 + 1e-9)};
}

}  // namespace ldpest
