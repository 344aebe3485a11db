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

#include "ldpest/prob_vector.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ldpest {

ProbVector::ProbVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw std::invalid_argument("ProbVector: alphabet size must be >= 2");
  }
  double sum = 0.0;
  for (size_t i = 0; i < entries_.size(); ++i) {
    const double v = entries_[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("ProbVector: entry " + std::to_string(i) +
                                  " is negative or non-finite");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw std::invalid_argument("ProbVector: entries sum to " + std::to_string(sum) +
                                ", expected 1");
  }
}

ProbVector ProbVector::Uniform(int k) {
  return ProbVector(std::vector<double>(k, 1.0 / k));
}

ProbVector ProbVector::PointMass(int k, int index) {
  if (index < 0 || index >= k) {
    throw std::invalid_argument("ProbVector::PointMass: index out of range");
  }
  std::vector<double> v(k, 0.0);
  v[index] = 1.0;
  return ProbVector(std::move(v));
}

double ProbVector::SumOfSquares() const {
  double s = 0.0;
  for (double v : entries_) s += v * v;
  return s;
}

SignedVector::SignedVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw std::invalid_argument("SignedVector: empty");
  }
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i])) {
      throw std::invalid_argument("SignedVector: entry " + std::to_string(i) +
                                  " is non-finite");
    }
  }
}

double L1Distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("L1Distance: size mismatch");
  }
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double L2SquaredDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("L2SquaredDistance: size mismatch");
  }
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace ldpest
