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

#ifndef LDPEST_OPEN_ALPHABET_H_
#define LDPEST_OPEN_ALPHABET_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldpest/channel.h"
#include "ldpest/mechanisms.h"
#include "ldpest/privacy_budget.h"
#include "ldpest/rng.h"

namespace ldpest {

enum class CohortMode { kKeyedHash, kPermutation };

// C cohorts sharing a hash configuration. In KeyedHash mode each
// (cohort, hash_index) pair names an independent keyed hash over arbitrary
// strings; in Permutation mode each pair names a pseudorandom bijection of a
// closed candidate set [0, S), applied before the modulo-k reduction. All
// maps are pure functions of (master_seed, cohort, hash_index, symbol).
class CohortScheme {
 public:
  static CohortScheme KeyedHash(int num_cohorts, int hash_range, int num_hashes,
                                uint64_t master_seed);
  static CohortScheme Permutation(int num_cohorts, int hash_range,
                                  int candidate_count, uint64_t master_seed);
  // One cohort whose permutation is the identity on [0, k); with k = S this
  // makes the open-alphabet pipeline coincide exactly with plain k-RR.
  static CohortScheme IdentityPermutation(int hash_range);

  CohortMode mode() const { return mode_; }
  int num_cohorts() const { return num_cohorts_; }
  int hash_range() const { return hash_range_; }
  int num_hashes() const { return num_hashes_; }
  int candidate_count() const { return candidate_count_; }  // -1 in KeyedHash mode
  uint64_t master_seed() const { return master_seed_; }

  std::span<const int32_t> permutation(int cohort, int hash_index) const;

 private:
  CohortScheme(CohortMode mode, int num_cohorts, int hash_range, int num_hashes,
               int candidate_count, uint64_t master_seed);

  CohortMode mode_;
  int num_cohorts_;
  int hash_range_;
  int num_hashes_;
  int candidate_count_;
  uint64_t master_seed_;
  std::vector<std::vector<int32_t>> permutations_;  // [cohort * h + hash_index]
};

// Uniform over [0, C), a pure function of (master_seed, client_id). Cohort
// membership is independent of the client's symbol, which is what makes the
// joint (report, cohort) channel private.
int AssignCohort(uint64_t client_id, const CohortScheme& scheme);

// hash^{(k)}_{c, hash_index}(symbol). The string overload requires KeyedHash
// mode; the index overload requires Permutation mode and throws when the
// index lies outside the candidate set.
int CohortHash(std::string_view symbol, int cohort, int hash_index,
               const CohortScheme& scheme);
int CohortHash(int symbol_index, int cohort, int hash_index,
               const CohortScheme& scheme);

// Sparse binary design linking candidates to their per-cohort report
// positions. Rows are indexed r = cohort * k + bucket; column s lists the
// rows where candidate s appears. With one hash per cohort every column has
// exactly C entries; with h Bloom hashes a column has between C and h*C
// (within-cohort hash collisions shrink it).
struct DesignMatrix {
  int num_cohorts = 0;
  int hash_range = 0;
  int num_hashes = 0;
  int num_candidates = 0;
  std::vector<std::vector<int32_t>> column_rows;
  std::vector<int> column_weights;

  int num_rows() const { return num_cohorts * hash_range; }
};

// Throws std::invalid_argument on duplicate candidates.
DesignMatrix BuildDesignMatrix(std::span<const std::string> candidates,
                               const CohortScheme& scheme);
// Closed-alphabet variant: candidates are the indices [0, candidate_count).
DesignMatrix BuildDesignMatrix(int candidate_count, const CohortScheme& scheme);

// Coordinate-list CSV: header then one "cohort,bucket,symbol_index" line per
// nonzero, in (symbol, row) order.
void WriteDesignMatrixCsv(const DesignMatrix& design, std::ostream& out);

struct OrrReport {
  int cohort;
  int bucket;
};

struct OrapporReport {
  int cohort;
  BitReport bits;
};

// Hash the symbol into the client's cohort bucket, then randomized-response
// it over [0, k). The joint (bucket, cohort) output is eps-DP.
OrrReport EncodeOrr(std::string_view symbol, uint64_t client_id,
                    const CohortScheme& scheme, const PrivacyBudget& budget,
                    RngStream& rng);
OrrReport EncodeOrr(int symbol_index, uint64_t client_id, const CohortScheme& scheme,
                    const PrivacyBudget& budget, RngStream& rng);

// Bloom-encode the symbol with the cohort's h hashes, then flip each bit
// independently with probability 1/(1 + e^{eps/(2h)}). Two Bloom codes differ
// in at most 2h bits, so the report is eps-DP.
OrapporReport EncodeOrappor(std::string_view symbol, uint64_t client_id,
                            const CohortScheme& scheme, const PrivacyBudget& budget,
                            RngStream& rng);
OrapporReport EncodeOrappor(int symbol_index, uint64_t client_id,
                            const CohortScheme& scheme, const PrivacyBudget& budget,
                            RngStream& rng);

struct OpenDecodeResult {
  std::vector<double> estimate;  // over candidates, on the simplex
  // Set when k*C < S or two candidates share all hash positions; the system
  // is then solved in the minimum-norm (ridge) sense.
  bool underconstrained = false;
};

// Least-squares decoding of hashed randomized response: form the empirical
// joint output frequencies m_hat over the k*C cells, linearly unbias them to
// t = (C (e^eps + k - 1) m_hat - 1) / (e^eps - 1), solve H p = t by normal
// equations with a 1e-10 ridge, and project onto the simplex.
// report_counts[c * k + y] counts reports (y, c); n is the total.
OpenDecodeResult DecodeOrr(std::span<const int64_t> report_counts, int64_t n,
                           const DesignMatrix& design, const PrivacyBudget& budget);

// Bloom-filter analogue: per (cohort, bit) the observed bit frequency within
// the cohort is unbiased with the per-bit parameter eps/h, and cohorts enter
// the least-squares system weighted by their sizes. A cohort with zero
// reports contributes zero weight.
OpenDecodeResult DecodeOrappor(std::span<const int64_t> bit_counts,
                               std::span<const int64_t> cohort_sizes,
                               const DesignMatrix& design,
                               const PrivacyBudget& budget);

struct DistinguishabilityStats {
  double prob_distinguishable;       // ((k^C - 1)/k^C)^(S-1), computed in log space
  double expected_recoverable_mass;  // same value
  bool constrained;                  // k*C >= S
};

DistinguishabilityStats ComputeDistinguishability(int candidate_count, int hash_range,
                                                  int num_cohorts);

// Exact report channels for verification of small configurations. Rows are
// candidates; O-RR columns are (cohort, bucket) pairs, the Bloom variant's
// columns are (cohort, bit pattern) pairs (hash_range <= 16).
Channel EnumerateOrrChannel(const DesignMatrix& design, const PrivacyBudget& budget);
Channel EnumerateOrapporChannel(const DesignMatrix& design,
                                const PrivacyBudget& budget);

// Newline-delimited UTF-8 candidate list; blank lines and trailing '\r' are
// dropped. Throws std::runtime_error when the file cannot be read.
std::vector<std::string> ReadCandidateFile(const std::string& path);

}  // namespace ldpest

#endif  // LDPEST_OPEN_ALPHABET_H_
