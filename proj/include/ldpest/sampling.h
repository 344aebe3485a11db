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

#ifndef LDPEST_SAMPLING_H_
#define LDPEST_SAMPLING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ldpest/prob_vector.h"
#include "ldpest/rng.h"

namespace ldpest {

// Draws an index with probability dist[i] by inverse-CDF over cumulative
// sums. dist must be nonnegative and sum to 1 within kProbTolerance.
int SampleCategorical(std::span<const double> dist, RngStream& rng);

// Precomputed cumulative table for repeated categorical draws from the same
// distribution.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> dist);
  int Sample(RngStream& rng) const;

 private:
  std::vector<double> cumulative_;
};

// Counts of each symbol divided by n. Throws on an empty sequence or an
// index outside [0, l).
ProbVector EmpiricalFrequencies(std::span<const int> reports, int l);

// Exact Binomial(n, p) draw. Inversion for small n*p, Hormann's BTRS
// transformed-rejection otherwise. Implemented in-repo (rather than
// std::binomial_distribution) because draw sequences must be reproducible
// across standard libraries and platforms.
int64_t SampleBinomial(int64_t n, double p, RngStream& rng);

// Multinomial(n, p) by sequential conditional binomials; out has p.size()
// cells and receives counts summing to n.
void SampleMultinomial(int64_t n, std::span<const double> p, RngStream& rng,
                       std::span<int64_t> out);

// One draw from the symmetric Dirichlet(1) distribution (uniform over the
// simplex) of dimension k.
std::vector<double> SampleDirichletUniform(int k, RngStream& rng);

}  // namespace ldpest

#endif  // LDPEST_SAMPLING_H_
