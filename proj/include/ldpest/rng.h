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

#ifndef LDPEST_RNG_H_
#define LDPEST_RNG_H_

#include <cstdint>

namespace ldpest {

// Avalanche finalizer from SplitMix64 (Steele, Lea & Flood / Vigna).
// Pure 64-bit integer arithmetic, so output is identical on every platform.
uint64_t Mix64(uint64_t z);

// Derives a single 64-bit key from two values with full avalanche.
uint64_t CombineSeeds(uint64_t a, uint64_t b);

// Deterministic, splittable pseudo-random stream backed by SplitMix64.
//
// Every (seed, stream_id) pair names an independent stream whose draw
// sequence is reproducible across runs and platforms. Experiments derive
// one stream per (trial, cohort, client) so that parallel execution is
// bit-reproducible regardless of scheduling.
//
// A stream is owned by exactly one worker at a time; the class itself is
// not synchronized.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id);

  // Next 64 uniform bits.
  uint64_t NextUint64();

  // Uniform double in [0, 1) with 53 random bits.
  double NextDouble();

  // Uniform integer in [0, bound). bound must be > 0. Unbiased
  // (Lemire's multiply-shift with rejection).
  uint64_t NextBelow(uint64_t bound);

  // True with probability p (p clamped to [0, 1]).
  bool NextBernoulli(double p);

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

 private:
  uint64_t seed_;
  uint64_t stream_id_;
  uint64_t state_;
};

}  // namespace ldpest

#endif  // LDPEST_RNG_H_
