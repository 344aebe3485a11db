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

#ifndef LDPEST_SIMKIT_H_
#define LDPEST_SIMKIT_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldpest/decoders.h"
#include "ldpest/mechanisms.h"
#include "ldpest/prob_vector.h"
#include "ldpest/open_alphabet.h"
#include "ldpest/rng.h"

#include "json.hpp"

namespace ldpest {

enum class DistributionKind {
  kGeometric,
  kZipf,
  kBinomial,
  kDirichletDraw,
  kUniform,
  kPointMass,
  kCustom,
};

struct DistributionSpec {
  DistributionKind kind = DistributionKind::kUniform;
  std::vector<double> params;
  int support_size = 0;
};

// Ground-truth generators.
//  - Geometric: p_i proportional to (1-q)^(i-1) q over i = 1..k with
//    q = 5/k by default (untruncated mean k/5; k < 5 makes q >= 1 and is an
//    error) or q = params[0] in (0, 1] when given.
//  - Zipf: p_i proportional to i^(-s), s = params[0] >= 0.
//  - Binomial: counts of Binomial(k-1, q), q = params[0].
//  - DirichletDraw: one draw from the symmetric Dirichlet(1); consumes rng.
//  - Uniform / PointMass(params[0]) / Custom(params are the masses).
ProbVector MakeDistribution(const DistributionSpec& spec, RngStream& rng);

// Compact CSV-safe label, e.g. "geometric" or "zipf:2".
std::string DistributionLabel(const DistributionSpec& spec);

enum class Loss { kL1, kL2Squared };

struct ExperimentConfig {
  Mechanism mechanism = Mechanism::kKrr;
  DecoderKind decoder = DecoderKind::kProjected;
  DistributionSpec distribution;
  int64_t n = 0;
  double epsilon = 0.0;
  int k = 0;                // report alphabet / hash range
  int num_cohorts = 1;      // open-alphabet mechanisms only
  int num_hashes = 1;       // Bloom hashes; the bitwise open mechanism only
  CohortMode cohort_mode = CohortMode::kKeyedHash;
  int trials = 0;
  uint64_t seed = 0;
  Loss loss = Loss::kL1;
  // Losses are measured against the per-trial sample histogram by default;
  // this switches the reference to the true distribution, which is what the
  // closed-form risk formulas are stated against.
  bool loss_vs_truth = false;
  int threads = 0;  // 0 = hardware concurrency
  std::vector<std::string> candidates;  // open alphabet; empty = synthetic names

  // Structural validation, including per-mechanism parameter applicability.
  // Throws std::invalid_argument.
  void Validate() const;
};

struct TrialResult {
  int trial_index;
  double loss;
};

struct AggregateResult {
  double mean = 0.0;
  double median = 0.0;
  double ci_low = 0.0;   //  5th percentile over trials
  double ci_high = 0.0;  // 95th percentile over trials
  int trials = 0;
};

// Raised when a trial fails; carries the trial index and any completed
// results so callers can inspect partial progress.
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(const std::string& message, int failed_trial,
                  std::vector<TrialResult> completed)
      : std::runtime_error(message),
        failed_trial(failed_trial),
        completed(std::move(completed)) {}

  int failed_trial;
  std::vector<TrialResult> completed;
};

// One end-to-end evaluation: draw the ground-truth sample, privatize it,
// decode, and measure the loss against the sample histogram (or the true
// distribution under loss_vs_truth). Reports are generated through their
// exact sufficient-statistic distributions, so a trial never materializes n
// individual reports. Deterministic per (config.seed, trial_index).
TrialResult RunTrial(const ExperimentConfig& config, int trial_index);

// Runs config.trials independent trials, in parallel, and aggregates.
// Results are identical for every thread count.
AggregateResult RunExperiment(const ExperimentConfig& config);

// Order-statistic aggregation with linear interpolation (90% interval from
// the 5th/95th percentiles). Exposed for tests.
AggregateResult Aggregate(std::span<const double> losses);

struct SweepGrid {
  std::vector<int> k;
  std::vector<int> num_cohorts;
  std::vector<int> num_hashes;
  std::vector<double> epsilon;
};

struct SweepEntry {
  ExperimentConfig config;
  AggregateResult result;
  bool skipped = false;
  std::string skip_reason;
};

// Evaluates every applicable grid point (epsilon-major order). Infeasible
// points are recorded as skipped, not fatal. Grid axes that do not apply to
// the mechanism (h for anything but the Bloom variant, C for the k-ary
// mechanisms) must be absent or {1}.
std::vector<SweepEntry> GridSweep(const ExperimentConfig& base, const SweepGrid& grid);

struct SweepBest {
  double epsilon;
  int k;
  int num_cohorts;
  int num_hashes;
  double median;
  size_t entry_index;
};

// Per-epsilon minimizer of the median loss; ties broken by smaller k, then
// smaller C, then smaller h.
std::vector<SweepBest> BestByEpsilon(std::span<const SweepEntry> entries);

// Shortest-width fixed formatting used in every CSV cell so identical runs
// produce byte-identical files.
std::string FormatDouble(double value);

// results.csv schema:
// mechanism,decoder,k,C,h,epsilon,n,distribution,trials,mean,median,ci_low,ci_high,seed
void WriteResultsCsv(std::ostream& out, std::span<const SweepEntry> entries);
void WriteResultsCsv(std::ostream& out, const ExperimentConfig& config,
                     const AggregateResult& result);

std::string MechanismName(Mechanism mechanism);
Mechanism ParseMechanism(const std::string& name);
std::string DecoderName(DecoderKind kind);
DecoderKind ParseDecoder(const std::string& name);
std::string LossName(Loss loss);
Loss ParseLoss(const std::string& name);
DistributionKind ParseDistributionKind(const std::string& name);

// JSON bindings for the experiment/sweep config documents (schema in the
// README). Throws std::invalid_argument on malformed documents.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc);
SweepGrid ParseSweepGrid(const nlohmann::json& doc);
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);

}  // namespace ldpest

#endif  // LDPEST_SIMKIT_H_
