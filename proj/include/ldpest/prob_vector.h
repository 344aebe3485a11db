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

#ifndef LDPEST_PROB_VECTOR_H_
#define LDPEST_PROB_VECTOR_H_

#include <span>
#include <vector>

namespace ldpest {

// Absolute tolerance used everywhere a vector must sum to 1 or a channel row
// must be stochastic. Alphabets stay small enough (k <= ~16384) that
// accumulated rounding is orders of magnitude below this.
inline constexpr double kProbTolerance = 1e-9;

// A point on the probability simplex: entries >= 0 summing to 1 (within
// kProbTolerance), with at least two coordinates. Immutable after
// construction and safe to share across threads.
class ProbVector {
 public:
  // Throws std::invalid_argument if the entries are not a distribution.
  explicit ProbVector(std::vector<double> entries);

  static ProbVector Uniform(int k);
  static ProbVector PointMass(int k, int index);

  int size() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[i]; }
  const std::vector<double>& entries() const { return entries_; }
  std::span<const double> span() const { return entries_; }

  double SumOfSquares() const;

 private:
  std::vector<double> entries_;
};

// A finite real vector; holds raw linear estimates before any constraint to
// the simplex (entries may be negative).
class SignedVector {
 public:
  // Throws std::invalid_argument on NaN or infinite entries.
  explicit SignedVector(std::vector<double> entries);

  int size() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[i]; }
  const std::vector<double>& entries() const { return entries_; }
  std::span<const double> span() const { return entries_; }

 private:
  std::vector<double> entries_;
};

double L1Distance(std::span<const double> a, std::span<const double> b);
double L2SquaredDistance(std::span<const double> a, std::span<const double> b);

}  // namespace ldpest

#endif  // LDPEST_PROB_VECTOR_H_
