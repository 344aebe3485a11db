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

#include "ldpest/open_alphabet.h"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "ldpest/decoders.h"
#include "ldpest/hashing.h"

namespace ldpest {

namespace {

// Domain separators so cohort assignment, keyed hashing, and permutation
// construction never share a stream.
constexpr uint64_t kCohortSalt = 0x636F686F72740000ULL;
constexpr uint64_t kHashSalt = 0x686173680000ULL;
constexpr uint64_t kPermSalt = 0x7065726D0000ULL;

constexpr double kRidge = 1e-10;

void CheckSchemeArgs(int num_cohorts, int hash_range, int num_hashes) {
  if (num_cohorts < 1) throw std::invalid_argument("CohortScheme: need C >= 1");
  if (hash_range < 2) throw std::invalid_argument("CohortScheme: need k >= 2");
  if (num_hashes < 1) throw std::invalid_argument("CohortScheme: need h >= 1");
}

}  // namespace

CohortScheme::CohortScheme(CohortMode mode, int num_cohorts, int hash_range,
                           int num_hashes, int candidate_count, uint64_t master_seed)
    : mode_(mode),
      num_cohorts_(num_cohorts),
      hash_range_(hash_range),
      num_hashes_(num_hashes),
      candidate_count_(candidate_count),
      master_seed_(master_seed) {}

CohortScheme CohortScheme::KeyedHash(int num_cohorts, int hash_range, int num_hashes,
                                     uint64_t master_seed) {
  CheckSchemeArgs(num_cohorts, hash_range, num_hashes);
  return CohortScheme(CohortMode::kKeyedHash, num_cohorts, hash_range, num_hashes,
                      -1, master_seed);
}

CohortScheme CohortScheme::Permutation(int num_cohorts, int hash_range,
                                       int candidate_count, uint64_t master_seed) {
  CheckSchemeArgs(num_cohorts, hash_range, 1);
  if (candidate_count < 1) {
    throw std::invalid_argument("CohortScheme: need a non-empty candidate set");
  }
  CohortScheme scheme(CohortMode::kPermutation, num_cohorts, hash_range, 1,
                      candidate_count, master_seed);
  scheme.permutations_.resize(num_cohorts);
  for (int c = 0; c < num_cohorts; ++c) {
    auto& perm = scheme.permutations_[c];
    perm.resize(candidate_count);
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates driven by a per-cohort stream.
    RngStream rng(CombineSeeds(master_seed, kPermSalt), static_cast<uint64_t>(c));
    for (int i = candidate_count - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.NextBelow(static_cast<uint64_t>(i + 1)));
      std::swap(perm[i], perm[j]);
    }
  }
  return scheme;
}

CohortScheme CohortScheme::IdentityPermutation(int hash_range) {
  if (hash_range < 2) throw std::invalid_argument("CohortScheme: need k >= 2");
  CohortScheme scheme(CohortMode::kPermutation, 1, hash_range, 1, hash_range, 0);
  scheme.permutations_.resize(1);
  scheme.permutations_[0].resize(hash_range);
  std::iota(scheme.permutations_[0].begin(), scheme.permutations_[0].end(), 0);
  return scheme;
}

std::span<const int32_t> CohortScheme::permutation(int cohort, int hash_index) const {
  if (mode_ != CohortMode::kPermutation) {
    throw std::invalid_argument("CohortScheme: no permutations in KeyedHash mode");
  }
  if (cohort < 0 || cohort >= num_cohorts_ || hash_index != 0) {
    throw std::invalid_argument("CohortScheme: cohort or hash index out of range");
  }
  return permutations_[cohort];
}

int AssignCohort(uint64_t client_id, const CohortScheme& scheme) {
  if (scheme.num_cohorts() == 1) return 0;
  RngStream stream(CombineSeeds(scheme.master_seed(), kCohortSalt), client_id);
  return static_cast<int>(stream.NextBelow(static_cast<uint64_t>(scheme.num_cohorts())));
}

int CohortHash(std::string_view symbol, int cohort, int hash_index,
               const CohortScheme& scheme) {
  if (scheme.mode() != CohortMode::kKeyedHash) {
    throw std::invalid_argument("CohortHash: string symbols require KeyedHash mode");
  }
  if (cohort < 0 || cohort >= scheme.num_cohorts() || hash_index < 0 ||
      hash_index >= scheme.num_hashes()) {
    throw std::invalid_argument("CohortHash: cohort or hash index out of range");
  }
  const uint64_t key =
      CombineSeeds(CombineSeeds(scheme.master_seed(), kHashSalt),
                   CombineSeeds(static_cast<uint64_t>(cohort),
                                static_cast<uint64_t>(hash_index)));
  return static_cast<int>(Xxh64(symbol, key) %
                          static_cast<uint64_t>(scheme.hash_range()));
}

int CohortHash(int symbol_index, int cohort, int hash_index,
               const CohortScheme& scheme) {
  if (scheme.mode() != CohortMode::kPermutation) {
    throw std::invalid_argument("CohortHash: index symbols require Permutation mode");
  }
  if (symbol_index < 0 || symbol_index >= scheme.candidate_count()) {
    throw std::invalid_argument("CohortHash: symbol outside the candidate set");
  }
  const auto perm = scheme.permutation(cohort, hash_index);
  return perm[symbol_index] % scheme.hash_range();
}

namespace {

DesignMatrix BuildDesign(int num_candidates, const CohortScheme& scheme,
                         const std::function<int(int s, int c, int hi)>& bucket_of) {
  DesignMatrix design;
  design.num_cohorts = scheme.num_cohorts();
  design.hash_range = scheme.hash_range();
  design.num_hashes = scheme.num_hashes();
  design.num_candidates = num_candidates;
  design.column_rows.resize(num_candidates);
  design.column_weights.resize(num_candidates);
  for (int s = 0; s < num_candidates; ++s) {
    auto& rows = design.column_rows[s];
    for (int c = 0; c < scheme.num_cohorts(); ++c) {
      for (int hi = 0; hi < scheme.num_hashes(); ++hi) {
        rows.push_back(c * scheme.hash_range() + bucket_of(s, c, hi));
      }
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    design.column_weights[s] = static_cast<int>(rows.size());
  }
  return design;
}

}  // namespace

DesignMatrix BuildDesignMatrix(std::span<const std::string> candidates,
                               const CohortScheme& scheme) {
  if (candidates.empty()) {
    throw std::invalid_argument("BuildDesignMatrix: empty candidate set");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& s : candidates) {
    if (!seen.insert(s).second) {
      throw std::invalid_argument("BuildDesignMatrix: duplicate candidate '" + s + "'");
    }
  }
  return BuildDesign(static_cast<int>(candidates.size()), scheme,
                     [&](int s, int c, int hi) {
                       return CohortHash(std::string_view(candidates[s]), c, hi, scheme);
                     });
}

DesignMatrix BuildDesignMatrix(int candidate_count, const CohortScheme& scheme) {
  if (candidate_count < 1) {
    throw std::invalid_argument("BuildDesignMatrix: empty candidate set");
  }
  return BuildDesign(candidate_count, scheme, [&](int s, int c, int hi) {
    return CohortHash(s, c, hi, scheme);
  });
}

void WriteDesignMatrixCsv(const DesignMatrix& design, std::ostream& out) {
  out << "cohort,bucket,symbol_index\n";
  for (int s = 0; s < design.num_candidates; ++s) {
    for (int32_t r : design.column_rows[s]) {
      out << (r / design.hash_range) << ',' << (r % design.hash_range) << ',' << s
          << '\n';
    }
  }
}

OrrReport EncodeOrr(std::string_view symbol, uint64_t client_id,
                    const CohortScheme& scheme, const PrivacyBudget& budget,
                    RngStream& rng) {
  if (scheme.num_hashes() != 1) {
    throw std::invalid_argument("EncodeOrr: requires a single-hash scheme");
  }
  const int cohort = AssignCohort(client_id, scheme);
  const int bucket = CohortHash(symbol, cohort, 0, scheme);
  return OrrReport{cohort, EncodeKrr(bucket, scheme.hash_range(), budget, rng)};
}

OrrReport EncodeOrr(int symbol_index, uint64_t client_id, const CohortScheme& scheme,
                    const PrivacyBudget& budget, RngStream& rng) {
  if (scheme.num_hashes() != 1) {
    throw std::invalid_argument("EncodeOrr: requires a single-hash scheme");
  }
  const int cohort = AssignCohort(client_id, scheme);
  const int bucket = CohortHash(symbol_index, cohort, 0, scheme);
  return OrrReport{cohort, EncodeKrr(bucket, scheme.hash_range(), budget, rng)};
}

namespace {

template <typename BucketFn>
OrapporReport EncodeOrapporImpl(uint64_t client_id, const CohortScheme& scheme,
                                const PrivacyBudget& budget, RngStream& rng,
                                const BucketFn& bucket_of) {
  const int cohort = AssignCohort(client_id, scheme);
  const int k = scheme.hash_range();
  BitReport bits(k);
  for (int hi = 0; hi < scheme.num_hashes(); ++hi) {
    bits.SetBit(bucket_of(cohort, hi));
  }
  const FlipParams fp = RapporPerBitFlipParams(budget, scheme.num_hashes());
  for (int j = 0; j < k; ++j) {
    if (rng.NextBernoulli(fp.flip_prob)) bits.FlipBit(j);
  }
  return OrapporReport{cohort, std::move(bits)};
}

}  // namespace

OrapporReport EncodeOrappor(std::string_view symbol, uint64_t client_id,
                            const CohortScheme& scheme, const PrivacyBudget& budget,
                            RngStream& rng) {
  return EncodeOrapporImpl(client_id, scheme, budget, rng, [&](int c, int hi) {
    return CohortHash(symbol, c, hi, scheme);
  });
}

OrapporReport EncodeOrappor(int symbol_index, uint64_t client_id,
                            const CohortScheme& scheme, const PrivacyBudget& budget,
                            RngStream& rng) {
  return EncodeOrapporImpl(client_id, scheme, budget, rng, [&](int c, int hi) {
    return CohortHash(symbol_index, c, hi, scheme);
  });
}

namespace {

// Shared least-squares core: minimize sum_r w_r (H p - t)_r^2 with a small
// ridge, then project onto the simplex.
OpenDecodeResult SolveAndProject(const DesignMatrix& design,
                                 std::span<const double> t,
                                 std::span<const double> row_weights) {
  const int s_count = design.num_candidates;
  const int rows = design.num_rows();

  // Row-major view of the sparse design.
  std::vector<std::vector<int32_t>> row_columns(rows);
  for (int s = 0; s < s_count; ++s) {
    for (int32_t r : design.column_rows[s]) row_columns[r].push_back(s);
  }

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(s_count, s_count);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s_count);
  for (int r = 0; r < rows; ++r) {
    const double w = row_weights.empty() ? 1.0 : row_weights[r];
    if (w == 0.0) continue;
    const auto& cols = row_columns[r];
    for (size_t a = 0; a < cols.size(); ++a) {
      rhs[cols[a]] += w * t[r];
      gram(cols[a], cols[a]) += w;
      for (size_t b = a + 1; b < cols.size(); ++b) {
        gram(cols[a], cols[b]) += w;
        gram(cols[b], cols[a]) += w;
      }
    }
  }
  gram.diagonal().array() += kRidge;

  const Eigen::VectorXd solution = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs);

  OpenDecodeResult result;
  result.underconstrained =
      static_cast<int64_t>(design.hash_range) * design.num_cohorts < s_count;
  if (!result.underconstrained) {
    // Candidates with identical hash positions are mutually indistinguishable
    // and also leave the system rank-deficient.
    std::unordered_set<uint64_t> signatures;
    for (int s = 0; s < s_count; ++s) {
      uint64_t sig = 0x51d5c4c1;
      for (int32_t r : design.column_rows[s]) {
        sig = CombineSeeds(sig, static_cast<uint64_t>(r));
      }
      if (!signatures.insert(sig).second) {
        result.underconstrained = true;
        break;
      }
    }
  }

  std::vector<double> raw(solution.data(), solution.data() + s_count);
  result.estimate = ProjectSimplex(raw).entries();
  return result;
}

}  // namespace

OpenDecodeResult DecodeOrr(std::span<const int64_t> report_counts, int64_t n,
                           const DesignMatrix& design, const PrivacyBudget& budget) {
  if (budget.epsilon() <= 0.0) {
    throw std::domain_error("DecodeOrr: inversion is singular at epsilon = 0");
  }
  if (n < 1) throw std::invalid_argument("DecodeOrr: n must be >= 1");
  if (static_cast<int>(report_counts.size()) != design.num_rows()) {
    throw std::invalid_argument("DecodeOrr: report counts have wrong size");
  }
  const double c_count = design.num_cohorts;
  const double scale = c_count * (budget.exp_epsilon() + design.hash_range - 1.0);
  const double em1 = budget.exp_epsilon() - 1.0;
  std::vector<double> t(report_counts.size());
  for (size_t r = 0; r < report_counts.size(); ++r) {
    const double m_hat = static_cast<double>(report_counts[r]) / static_cast<double>(n);
    t[r] = (scale * m_hat - 1.0) / em1;
  }
  return SolveAndProject(design, t, {});
}

OpenDecodeResult DecodeOrappor(std::span<const int64_t> bit_counts,
                               std::span<const int64_t> cohort_sizes,
                               const DesignMatrix& design,
                               const PrivacyBudget& budget) {
  if (budget.epsilon() <= 0.0) {
    throw std::domain_error("DecodeOrappor: inversion is singular at epsilon = 0");
  }
  if (static_cast<int>(bit_counts.size()) != design.num_rows()) {
    throw std::invalid_argument("DecodeOrappor: bit counts have wrong size");
  }
  if (static_cast<int>(cohort_sizes.size()) != design.num_cohorts) {
    throw std::invalid_argument("DecodeOrappor: cohort sizes have wrong size");
  }
  int64_t total = 0;
  for (int64_t sz : cohort_sizes) {
    if (sz < 0) throw std::invalid_argument("DecodeOrappor: negative cohort size");
    total += sz;
  }
  if (total < 1) throw std::invalid_argument("DecodeOrappor: no reports");

  // Per-bit unbiasing with the eps/h budget actually spent on each bit.
  const double e_bit = std::exp(budget.epsilon() / (2.0 * design.num_hashes));
  const int k = design.hash_range;
  std::vector<double> t(bit_counts.size(), 0.0);
  std::vector<double> weights(bit_counts.size(), 0.0);
  for (int c = 0; c < design.num_cohorts; ++c) {
    const int64_t n_c = cohort_sizes[c];
    if (n_c == 0) continue;
    const double w = static_cast<double>(n_c) / static_cast<double>(total);
    for (int j = 0; j < k; ++j) {
      const int r = c * k + j;
      const double freq =
          static_cast<double>(bit_counts[r]) / static_cast<double>(n_c);
      t[r] = ((e_bit + 1.0) * freq - 1.0) / (e_bit - 1.0);
      weights[r] = w;
    }
  }
  return SolveAndProject(design, t, weights);
}

DistinguishabilityStats ComputeDistinguishability(int candidate_count, int hash_range,
                                                  int num_cohorts) {
  if (candidate_count < 1 || hash_range < 1 || num_cohorts < 1) {
    throw std::invalid_argument("ComputeDistinguishability: arguments must be >= 1");
  }
  // ((k^C - 1)/k^C)^(S-1) = exp((S-1) * log1p(-k^-C)), overflow-safe.
  const double log_collision =
      -static_cast<double>(num_cohorts) * std::log(static_cast<double>(hash_range));
  const double prob =
      candidate_count == 1
          ? 1.0
          : std::exp(static_cast<double>(candidate_count - 1) *
                     std::log1p(-std::exp(log_collision)));
  const bool constrained = static_cast<int64_t>(hash_range) * num_cohorts >=
                           static_cast<int64_t>(candidate_count);
  return DistinguishabilityStats{prob, prob, constrained};
}

Channel EnumerateOrrChannel(const DesignMatrix& design, const PrivacyBudget& budget) {
  if (design.num_hashes != 1) {
    throw std::invalid_argument("EnumerateOrrChannel: requires a single-hash design");
  }
  const int k = design.hash_range;
  const double denom = design.num_cohorts * (budget.exp_epsilon() + k - 1.0);
  const double hit = budget.exp_epsilon() / denom;
  const double miss = 1.0 / denom;
  std::vector<std::vector<double>> rows(design.num_candidates);
  for (int s = 0; s < design.num_candidates; ++s) {
    rows[s].assign(design.num_rows(), miss);
    for (int32_t r : design.column_rows[s]) rows[s][r] = hit;
  }
  return Channel(std::move(rows));
}

Channel EnumerateOrapporChannel(const DesignMatrix& design,
                                const PrivacyBudget& budget) {
  const int k = design.hash_range;
  if (k > 16) {
    throw std::invalid_argument("EnumerateOrapporChannel: hash range too large");
  }
  const double e_bit = std::exp(budget.epsilon() / (2.0 * design.num_hashes));
  const double keep = e_bit / (1.0 + e_bit);
  const double flip = 1.0 / (1.0 + e_bit);
  const int64_t patterns = int64_t{1} << k;
  const double inv_c = 1.0 / design.num_cohorts;

  std::vector<std::vector<double>> rows(design.num_candidates);
  for (int s = 0; s < design.num_candidates; ++s) {
    // Bloom code of candidate s in each cohort, as a bit mask.
    std::vector<uint32_t> code(design.num_cohorts, 0);
    for (int32_t r : design.column_rows[s]) {
      code[r / k] |= uint32_t{1} << (r % k);
    }
    rows[s].resize(static_cast<size_t>(design.num_cohorts) * patterns);
    for (int c = 0; c < design.num_cohorts; ++c) {
      for (int64_t y = 0; y < patterns; ++y) {
        const int differing =
            __builtin_popcount(static_cast<uint32_t>(y) ^ code[c]);
        rows[s][c * patterns + y] = inv_c * std::pow(flip, differing) *
                                    std::pow(keep, k - differing);
      }
    }
  }
  return Channel(std::move(rows));
}

std::vector<std::string> ReadCandidateFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("ReadCandidateFile: cannot open '" + path + "'");
  }
  std::vector<std::string> candidates;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) candidates.push_back(line);
  }
  return candidates;
}

}  // namespace ldpest
