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

#include "ldpest/simkit.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "ldpest/sampling.h"

namespace ldpest {

ProbVector MakeDistribution(const DistributionSpec& spec, RngStream& rng) {
  const int k = spec.support_size;
  if (k < 2) throw std::invalid_argument("MakeDistribution: support must be >= 2");
  for (double v : spec.params) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("MakeDistribution: negative or non-finite parameter");
    }
  }
  switch (spec.kind) {
    case DistributionKind::kGeometric: {
      double q;
      if (spec.params.empty()) {
        if (k < 5) {
          throw std::invalid_argument(
              "MakeDistribution: geometric with k < 5 is degenerate (q = 5/k >= 1)");
        }
        q = 5.0 / k;
      } else {
        q = spec.params[0];
        if (q <= 0.0 || q > 1.0) {
          throw std::invalid_argument("MakeDistribution: geometric q must be in (0, 1]");
        }
      }
      std::vector<double> p(k);
      double w = q, sum = 0.0;
      for (int i = 0; i < k; ++i) {
        p[i] = w;
        sum += w;
        w *= 1.0 - q;
      }
      for (double& v : p) v /= sum;
      return ProbVector(std::move(p));
    }
    case DistributionKind::kZipf: {
      if (spec.params.empty()) {
        throw std::invalid_argument("MakeDistribution: zipf needs an exponent");
      }
      const double s = spec.params[0];
      std::vector<double> p(k);
      double sum = 0.0;
      for (int i = 0; i < k; ++i) {
        p[i] = std::pow(static_cast<double>(i + 1), -s);
        sum += p[i];
      }
      for (double& v : p) v /= sum;
      return ProbVector(std::move(p));
    }
    case DistributionKind::kBinomial: {
      if (spec.params.empty() || spec.params[0] > 1.0) {
        throw std::invalid_argument("MakeDistribution: binomial needs q in [0, 1]");
      }
      const double q = spec.params[0];
      const int trials_param = k - 1;
      std::vector<double> p(k);
      double sum = 0.0;
      for (int i = 0; i < k; ++i) {
        double log_mass = std::lgamma(trials_param + 1.0) - std::lgamma(i + 1.0) -
                          std::lgamma(trials_param - i + 1.0);
        if (i > 0) log_mass += i * std::log(q);
        if (trials_param - i > 0) log_mass += (trials_param - i) * std::log1p(-q);
        // q in {0,1} puts all mass on an endpoint.
        if ((i > 0 && q == 0.0) || (i < trials_param && q == 1.0)) {
          p[i] = 0.0;
        } else {
          p[i] = std::exp(log_mass);
        }
        sum += p[i];
      }
      for (double& v : p) v /= sum;
      return ProbVector(std::move(p));
    }
    case DistributionKind::kDirichletDraw:
      return ProbVector(SampleDirichletUniform(k, rng));
    case DistributionKind::kUniform:
      return ProbVector::Uniform(k);
    case DistributionKind::kPointMass: {
      const int index = spec.params.empty() ? 0 : static_cast<int>(spec.params[0]);
      return ProbVector::PointMass(k, index);
    }
    case DistributionKind::kCustom:
      if (static_cast<int>(spec.params.size()) != k) {
        throw std::invalid_argument("MakeDistribution: custom masses must match support");
      }
      return ProbVector(spec.params);
  }
  throw std::invalid_argument("MakeDistribution: unknown kind");
}

namespace {

const char* DistributionKindName(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kGeometric: return "geometric";
    case DistributionKind::kZipf: return "zipf";
    case DistributionKind::kBinomial: return "binomial";
    case DistributionKind::kDirichletDraw: return "dirichlet";
    case DistributionKind::kUniform: return "uniform";
    case DistributionKind::kPointMass: return "point_mass";
    case DistributionKind::kCustom: return "custom";
  }
  return "?";
}

}  // namespace

std::string DistributionLabel(const DistributionSpec& spec) {
  std::string label = DistributionKindName(spec.kind);
  for (size_t i = 0; i < spec.params.size(); ++i) {
    label += (i == 0 ? ':' : '|');
    label += FormatDouble(spec.params[i]);
  }
  return label;
}

void ExperimentConfig::Validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (k < 2) throw std::invalid_argument("config: k must be >= 2");
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("config: epsilon must be finite and >= 0");
  }
  const bool open =
      mechanism == Mechanism::kOrr || mechanism == Mechanism::kOrappor;
  if (!open) {
    if (num_cohorts != 1) {
      throw std::invalid_argument("config: cohorts apply to the hashed mechanisms only");
    }
    if (num_hashes != 1) {
      throw std::invalid_argument("config: h applies to the Bloom mechanism only");
    }
    if (distribution.support_size != k) {
      throw std::invalid_argument("config: k-ary mechanisms need support_size == k");
    }
  } else {
    if (num_cohorts < 1) throw std::invalid_argument("config: C must be >= 1");
    if (num_hashes < 1) throw std::invalid_argument("config: h must be >= 1");
    if (mechanism == Mechanism::kOrr && num_hashes != 1) {
      throw std::invalid_argument("config: h applies to the Bloom mechanism only");
    }
    if (mechanism == Mechanism::kOrappor && num_hashes > k) {
      throw std::invalid_argument("config: h must be <= k");
    }
    if (decoder != DecoderKind::kProjected) {
      throw std::invalid_argument(
          "config: the hashed mechanisms decode by projected least squares");
    }
    if (distribution.support_size < 2) {
      throw std::invalid_argument("config: support_size must be >= 2");
    }
    if (!candidates.empty() &&
        static_cast<int>(candidates.size()) != distribution.support_size) {
      throw std::invalid_argument("config: candidate list must match support_size");
    }
    if (cohort_mode == CohortMode::kKeyedHash && !candidates.empty()) {
      // fine: open alphabet with an explicit candidate list
    }
  }
  if (distribution.kind != DistributionKind::kDirichletDraw) {
    RngStream probe(0, 0);
    MakeDistribution(distribution, probe);  // surfaces parameter errors early
  }
}

namespace {

struct TrialStats {
  std::vector<int64_t> true_counts;
  std::vector<int64_t> report_counts;  // k-RR / hashed RR
  std::vector<int64_t> bit_counts;     // bitwise mechanisms
  std::vector<int64_t> cohort_sizes;
};

// Randomized response splits into "tell the truth with probability
// alpha = (e^eps - 1)/(e^eps + k - 1), otherwise report uniformly over all k
// symbols"; the report histogram is then a sum of per-symbol binomial truth
// counts and one pooled uniform multinomial. This reproduces the exact joint
// law of (sample histogram, report histogram) without touching n records.
void SampleKrrStats(const ProbVector& p, int64_t n, int k,
                    const PrivacyBudget& budget, RngStream& rng, TrialStats& stats) {
  stats.true_counts.assign(k, 0);
  stats.report_counts.assign(k, 0);
  SampleMultinomial(n, p.span(), rng, stats.true_counts);
  const double alpha = (budget.exp_epsilon() - 1.0) / (budget.exp_epsilon() + k - 1.0);
  int64_t liars = 0;
  for (int j = 0; j < k; ++j) {
    const int64_t truthful = SampleBinomial(stats.true_counts[j], alpha, rng);
    stats.report_counts[j] += truthful;
    liars += stats.true_counts[j] - truthful;
  }
  std::vector<int64_t> lies(k);
  std::vector<double> uniform(k, 1.0 / k);
  SampleMultinomial(liars, uniform, rng, lies);
  for (int j = 0; j < k; ++j) stats.report_counts[j] += lies[j];
}

// T_j is a sum of independent per-client coin flips, so given the sample
// histogram it is Binomial(N_j, keep) + Binomial(n - N_j, flip).
void SampleRapporStats(const ProbVector& p, int64_t n, int k,
                       const PrivacyBudget& budget, RngStream& rng,
                       TrialStats& stats) {
  stats.true_counts.assign(k, 0);
  stats.bit_counts.assign(k, 0);
  SampleMultinomial(n, p.span(), rng, stats.true_counts);
  const FlipParams fp = RapporFlipParams(budget);
  for (int j = 0; j < k; ++j) {
    stats.bit_counts[j] = SampleBinomial(stats.true_counts[j], fp.keep_prob, rng) +
                          SampleBinomial(n - stats.true_counts[j], fp.flip_prob, rng);
  }
}

// Cohort split of the per-symbol counts, shared by both hashed mechanisms.
// members[c][s] = number of clients in cohort c holding symbol s.
std::vector<std::vector<int64_t>> SplitIntoCohorts(std::span<const int64_t> true_counts,
                                                    int num_cohorts, RngStream& rng,
                                                    std::vector<int64_t>& cohort_sizes) {
  const int s_count = static_cast<int>(true_counts.size());
  std::vector<std::vector<int64_t>> members(num_cohorts,
                                            std::vector<int64_t>(s_count, 0));
  cohort_sizes.assign(num_cohorts, 0);
  std::vector<double> uniform(num_cohorts, 1.0 / num_cohorts);
  std::vector<int64_t> split(num_cohorts);
  for (int s = 0; s < s_count; ++s) {
    SampleMultinomial(true_counts[s], uniform, rng, split);
    for (int c = 0; c < num_cohorts; ++c) {
      members[c][s] = split[c];
      cohort_sizes[c] += split[c];
    }
  }
  return members;
}

void SampleOrrStats(const ProbVector& p, int64_t n, const DesignMatrix& design,
                    const PrivacyBudget& budget, RngStream& rng, TrialStats& stats) {
  const int s_count = design.num_candidates;
  const int k = design.hash_range;
  const int c_count = design.num_cohorts;
  stats.true_counts.assign(s_count, 0);
  stats.report_counts.assign(design.num_rows(), 0);
  SampleMultinomial(n, p.span(), rng, stats.true_counts);
  const auto members =
      SplitIntoCohorts(stats.true_counts, c_count, rng, stats.cohort_sizes);

  const double alpha = (budget.exp_epsilon() - 1.0) / (budget.exp_epsilon() + k - 1.0);
  std::vector<int64_t> liars(c_count, 0);
  for (int c = 0; c < c_count; ++c) {
    for (int s = 0; s < s_count; ++s) {
      if (members[c][s] == 0) continue;
      const int64_t truthful = SampleBinomial(members[c][s], alpha, rng);
      liars[c] += members[c][s] - truthful;
      // With one hash per cohort, column s has exactly one row per cohort
      // block, in cohort order.
      if (truthful > 0) stats.report_counts[design.column_rows[s][c]] += truthful;
    }
  }
  std::vector<double> uniform(k, 1.0 / k);
  std::vector<int64_t> lies(k);
  for (int c = 0; c < c_count; ++c) {
    SampleMultinomial(liars[c], uniform, rng, lies);
    for (int j = 0; j < k; ++j) stats.report_counts[c * k + j] += lies[j];
  }
}

void SampleOrapporStats(const ProbVector& p, int64_t n, const DesignMatrix& design,
                        const PrivacyBudget& budget, RngStream& rng,
                        TrialStats& stats) {
  const int s_count = design.num_candidates;
  const int k = design.hash_range;
  const int c_count = design.num_cohorts;
  stats.true_counts.assign(s_count, 0);
  stats.bit_counts.assign(design.num_rows(), 0);
  SampleMultinomial(n, p.span(), rng, stats.true_counts);
  const auto members =
      SplitIntoCohorts(stats.true_counts, c_count, rng, stats.cohort_sizes);

  // ones[r] = clients in cohort r/k whose Bloom code sets bit r%k.
  std::vector<int64_t> ones(design.num_rows(), 0);
  for (int s = 0; s < s_count; ++s) {
    for (int32_t r : design.column_rows[s]) {
      ones[r] += members[r / k][s];
    }
  }
  const FlipParams fp = RapporPerBitFlipParams(budget, design.num_hashes);
  for (int c = 0; c < c_count; ++c) {
    for (int j = 0; j < k; ++j) {
      const int r = c * k + j;
      stats.bit_counts[r] =
          SampleBinomial(ones[r], fp.keep_prob, rng) +
          SampleBinomial(stats.cohort_sizes[c] - ones[r], fp.flip_prob, rng);
    }
  }
}

double ComputeLoss(Loss loss, std::span<const double> estimate,
                   std::span<const double> reference) {
  return loss == Loss::kL1 ? L1Distance(estimate, reference)
                           : L2SquaredDistance(estimate, reference);
}

}  // namespace

TrialResult RunTrial(const ExperimentConfig& config, int trial_index) {
  try {
    RngStream rng(config.seed, static_cast<uint64_t>(trial_index));
    const PrivacyBudget budget(config.epsilon);
    const ProbVector p = MakeDistribution(config.distribution, rng);

    TrialStats stats;
    std::vector<double> estimate;
    if (config.mechanism == Mechanism::kKrr || config.mechanism == Mechanism::kRappor) {
      if (config.mechanism == Mechanism::kKrr) {
        SampleKrrStats(p, config.n, config.k, budget, rng, stats);
        estimate = Decode(config.decoder, Mechanism::kKrr, stats.report_counts,
                          config.n, config.k, budget)
                       .estimate;
      } else {
        SampleRapporStats(p, config.n, config.k, budget, rng, stats);
        estimate = Decode(config.decoder, Mechanism::kRappor, stats.bit_counts,
                          config.n, config.k, budget)
                       .estimate;
      }
    } else {
      // Each trial draws its own hash configuration, so the aggregate spread
      // reflects hash luck as well as sampling noise.
      const uint64_t scheme_seed = rng.NextUint64();
      const int s_count = config.distribution.support_size;
      const CohortScheme scheme =
          config.cohort_mode == CohortMode::kPermutation
              ? CohortScheme::Permutation(config.num_cohorts, config.k, s_count,
                                          scheme_seed)
              : CohortScheme::KeyedHash(config.num_cohorts, config.k,
                                        config.num_hashes, scheme_seed);
      DesignMatrix design;
      if (config.cohort_mode == CohortMode::kPermutation) {
        design = BuildDesignMatrix(s_count, scheme);
      } else if (!config.candidates.empty()) {
        design = BuildDesignMatrix(config.candidates, scheme);
      } else {
        std::vector<std::string> names(s_count);
        for (int s = 0; s < s_count; ++s) names[s] = "sym" + std::to_string(s);
        design = BuildDesignMatrix(names, scheme);
      }
      if (config.mechanism == Mechanism::kOrr) {
        SampleOrrStats(p, config.n, design, budget, rng, stats);
        estimate = DecodeOrr(stats.report_counts, config.n, design, budget).estimate;
      } else {
        SampleOrapporStats(p, config.n, design, budget, rng, stats);
        estimate =
            DecodeOrappor(stats.bit_counts, stats.cohort_sizes, design, budget)
                .estimate;
      }
    }

    std::vector<double> reference;
    if (config.loss_vs_truth) {
      reference = p.entries();
    } else {
      reference.resize(stats.true_counts.size());
      for (size_t i = 0; i < reference.size(); ++i) {
        reference[i] =
            static_cast<double>(stats.true_counts[i]) / static_cast<double>(config.n);
      }
    }
    return TrialResult{trial_index, ComputeLoss(config.loss, estimate, reference)};
  } catch (const std::exception& e) {
    throw ExperimentError(std::string("trial ") + std::to_string(trial_index) +
                              " (seed " + std::to_string(config.seed) +
                              "): " + e.what(),
                          trial_index, {});
  }
}

AggregateResult Aggregate(std::span<const double> losses) {
  if (losses.empty()) throw std::invalid_argument("Aggregate: no losses");
  std::vector<double> sorted(losses.begin(), losses.end());
  std::sort(sorted.begin(), sorted.end());
  auto percentile = [&](double q) {
    const double h = (sorted.size() - 1) * q;
    const auto lo = static_cast<size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };
  double sum = 0.0;
  for (double v : sorted) sum += v;
  return AggregateResult{sum / sorted.size(), percentile(0.5), percentile(0.05),
                         percentile(0.95), static_cast<int>(sorted.size())};
}

AggregateResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  std::vector<double> losses(config.trials);
  std::vector<char> done(config.trials, 0);
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  int workers = config.threads > 0 ? config.threads : std::max(hw, 1);
  workers = std::min(workers, config.trials);

  std::atomic<int> next{0};
  std::mutex error_mutex;
  int failed_trial = -1;
  std::string error_message;

  auto work = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= config.trials) return;
      try {
        losses[t] = RunTrial(config, t).loss;
        done[t] = 1;
      } catch (const ExperimentError& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (failed_trial < 0 || e.failed_trial < failed_trial) {
          failed_trial = e.failed_trial;
          error_message = e.what();
        }
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  if (failed_trial >= 0) {
    std::vector<TrialResult> completed;
    for (int t = 0; t < config.trials; ++t) {
      if (done[t]) completed.push_back(TrialResult{t, losses[t]});
    }
    throw ExperimentError(error_message, failed_trial, std::move(completed));
  }
  return Aggregate(losses);
}

std::vector<SweepEntry> GridSweep(const ExperimentConfig& base, const SweepGrid& grid) {
  const bool open =
      base.mechanism == Mechanism::kOrr || base.mechanism == Mechanism::kOrappor;
  const std::vector<double> epsilons =
      grid.epsilon.empty() ? std::vector<double>{base.epsilon} : grid.epsilon;
  const std::vector<int> ks = grid.k.empty() ? std::vector<int>{base.k} : grid.k;
  const std::vector<int> cohorts = grid.num_cohorts.empty()
                                       ? std::vector<int>{base.num_cohorts}
                                       : grid.num_cohorts;
  const std::vector<int> hashes = grid.num_hashes.empty()
                                      ? std::vector<int>{base.num_hashes}
                                      : grid.num_hashes;
  if (epsilons.empty() || ks.empty() || cohorts.empty() || hashes.empty()) {
    throw std::invalid_argument("GridSweep: empty grid");
  }
  if (!open && (cohorts.size() > 1 || cohorts[0] != 1)) {
    throw std::invalid_argument("GridSweep: C grid applies to hashed mechanisms only");
  }
  if (base.mechanism != Mechanism::kOrappor &&
      (hashes.size() > 1 || hashes[0] != 1)) {
    throw std::invalid_argument("GridSweep: h grid applies to the Bloom mechanism only");
  }

  std::vector<SweepEntry> entries;
  for (double eps : epsilons) {
    for (int k : ks) {
      for (int c : cohorts) {
        for (int h : hashes) {
          SweepEntry entry;
          entry.config = base;
          entry.config.epsilon = eps;
          entry.config.k = k;
          entry.config.num_cohorts = c;
          entry.config.num_hashes = h;
          if (!open) {
            entry.config.distribution.support_size = k;
          }
          try {
            entry.result = RunExperiment(entry.config);
          } catch (const std::invalid_argument& e) {
            entry.skipped = true;
            entry.skip_reason = e.what();
          }
          entries.push_back(std::move(entry));
        }
      }
    }
  }
  return entries;
}

std::vector<SweepBest> BestByEpsilon(std::span<const SweepEntry> entries) {
  std::vector<SweepBest> best;
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& entry = entries[i];
    if (entry.skipped) continue;
    auto it = std::find_if(best.begin(), best.end(), [&](const SweepBest& b) {
      return b.epsilon == entry.config.epsilon;
    });
    const SweepBest candidate{entry.config.epsilon,       entry.config.k,
                              entry.config.num_cohorts,   entry.config.num_hashes,
                              entry.result.median,        i};
    if (it == best.end()) {
      best.push_back(candidate);
      continue;
    }
    const auto tie_key = [](const SweepBest& b) {
      return std::tuple<double, int, int, int>(b.median, b.k, b.num_cohorts,
                                               b.num_hashes);
    };
    if (tie_key(candidate) < tie_key(*it)) *it = candidate;
  }
  return best;
}

std::string FormatDouble(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

void WriteCsvRow(std::ostream& out, const ExperimentConfig& config,
                 const AggregateResult& result) {
  const bool open =
      config.mechanism == Mechanism::kOrr || config.mechanism == Mechanism::kOrappor;
  out << MechanismName(config.mechanism) << ',' << DecoderName(config.decoder) << ','
      << config.k << ',' << (open ? std::to_string(config.num_cohorts) : "") << ','
      << (config.mechanism == Mechanism::kOrappor ? std::to_string(config.num_hashes)
                                                  : "")
      << ',' << FormatDouble(config.epsilon) << ',' << config.n << ','
      << DistributionLabel(config.distribution) << ',' << result.trials << ','
      << FormatDouble(result.mean) << ',' << FormatDouble(result.median) << ','
      << FormatDouble(result.ci_low) << ',' << FormatDouble(result.ci_high) << ','
      << config.seed << '\n';
}

constexpr char kCsvHeader[] =
    "mechanism,decoder,k,C,h,epsilon,n,distribution,trials,mean,median,ci_low,"
    "ci_high,seed\n";

}  // namespace

void WriteResultsCsv(std::ostream& out, std::span<const SweepEntry> entries) {
  out << kCsvHeader;
  for (const auto& entry : entries) {
    if (!entry.skipped) WriteCsvRow(out, entry.config, entry.result);
  }
}

void WriteResultsCsv(std::ostream& out, const ExperimentConfig& config,
                     const AggregateResult& result) {
  out << kCsvHeader;
  WriteCsvRow(out, config, result);
}

std::string MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kKrr: return "krr";
    case Mechanism::kRappor: return "rappor";
    case Mechanism::kOrr: return "orr";
    case Mechanism::kOrappor: return "orappor";
  }
  return "?";
}

Mechanism ParseMechanism(const std::string& name) {
  if (name == "krr") return Mechanism::kKrr;
  if (name == "rappor") return Mechanism::kRappor;
  if (name == "orr") return Mechanism::kOrr;
  if (name == "orappor") return Mechanism::kOrappor;
  throw std::invalid_argument("unknown mechanism '" + name + "'");
}

std::string DecoderName(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::kStandard: return "standard";
    case DecoderKind::kNormalized: return "normalized";
    case DecoderKind::kProjected: return "projected";
    case DecoderKind::kMaximumLikelihood: return "ml";
  }
  return "?";
}

DecoderKind ParseDecoder(const std::string& name) {
  if (name == "standard") return DecoderKind::kStandard;
  if (name == "normalized") return DecoderKind::kNormalized;
  if (name == "projected") return DecoderKind::kProjected;
  if (name == "ml") return DecoderKind::kMaximumLikelihood;
  throw std::invalid_argument("unknown decoder '" + name + "'");
}

std::string LossName(Loss loss) {
  return loss == Loss::kL1 ? "l1" : "l2sq";
}

Loss ParseLoss(const std::string& name) {
  if (name == "l1") return Loss::kL1;
  if (name == "l2sq") return Loss::kL2Squared;
  throw std::invalid_argument("unknown loss '" + name + "'");
}

DistributionKind ParseDistributionKind(const std::string& name) {
  if (name == "geometric") return DistributionKind::kGeometric;
  if (name == "zipf") return DistributionKind::kZipf;
  if (name == "binomial") return DistributionKind::kBinomial;
  if (name == "dirichlet") return DistributionKind::kDirichletDraw;
  if (name == "uniform") return DistributionKind::kUniform;
  if (name == "point_mass") return DistributionKind::kPointMass;
  if (name == "custom") return DistributionKind::kCustom;
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

namespace {

double EpsilonFromJson(const nlohmann::json& value) {
  if (value.is_string()) return ParseEpsilon(value.get<std::string>());
  if (value.is_number()) return value.get<double>();
  throw std::invalid_argument("config: epsilon must be a number or 'lnK' string");
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig config;
  try {
    config.mechanism = ParseMechanism(doc.at("mechanism").get<std::string>());
    if (doc.contains("decoder")) {
      config.decoder = ParseDecoder(doc.at("decoder").get<std::string>());
    }
    config.n = doc.at("n").get<int64_t>();
    config.epsilon = EpsilonFromJson(doc.at("epsilon"));
    config.k = doc.at("k").get<int>();
    config.trials = doc.at("trials").get<int>();
    if (doc.contains("seed")) config.seed = doc.at("seed").get<uint64_t>();
    if (doc.contains("C")) config.num_cohorts = doc.at("C").get<int>();
    if (doc.contains("h")) config.num_hashes = doc.at("h").get<int>();
    if (doc.contains("cohort_mode")) {
      const auto mode = doc.at("cohort_mode").get<std::string>();
      if (mode == "hash") {
        config.cohort_mode = CohortMode::kKeyedHash;
      } else if (mode == "permutation") {
        config.cohort_mode = CohortMode::kPermutation;
      } else {
        throw std::invalid_argument("config: cohort_mode must be hash or permutation");
      }
    }
    if (doc.contains("loss")) config.loss = ParseLoss(doc.at("loss").get<std::string>());
    if (doc.contains("loss_vs_truth")) {
      config.loss_vs_truth = doc.at("loss_vs_truth").get<bool>();
    }
    if (doc.contains("threads")) config.threads = doc.at("threads").get<int>();

    const auto& dist = doc.at("distribution");
    config.distribution.kind =
        ParseDistributionKind(dist.at("kind").get<std::string>());
    if (dist.contains("params")) {
      config.distribution.params = dist.at("params").get<std::vector<double>>();
    }
    if (dist.contains("support")) {
      config.distribution.support_size = dist.at("support").get<int>();
    } else {
      config.distribution.support_size = config.k;
    }
    if (doc.contains("candidates_file")) {
      config.candidates =
          ReadCandidateFile(doc.at("candidates_file").get<std::string>());
      config.distribution.support_size = static_cast<int>(config.candidates.size());
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return config;
}

SweepGrid ParseSweepGrid(const nlohmann::json& doc) {
  SweepGrid grid;
  if (!doc.contains("grid")) return grid;
  const auto& g = doc.at("grid");
  try {
    if (g.contains("k")) grid.k = g.at("k").get<std::vector<int>>();
    if (g.contains("C")) grid.num_cohorts = g.at("C").get<std::vector<int>>();
    if (g.contains("h")) grid.num_hashes = g.at("h").get<std::vector<int>>();
    if (g.contains("epsilon")) {
      for (const auto& e : g.at("epsilon")) grid.epsilon.push_back(EpsilonFromJson(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: grid: ") + e.what());
  }
  return grid;
}

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["mechanism"] = MechanismName(config.mechanism);
  doc["decoder"] = DecoderName(config.decoder);
  doc["n"] = config.n;
  doc["epsilon"] = config.epsilon;
  doc["k"] = config.k;
  doc["C"] = config.num_cohorts;
  doc["h"] = config.num_hashes;
  doc["cohort_mode"] =
      config.cohort_mode == CohortMode::kPermutation ? "permutation" : "hash";
  doc["trials"] = config.trials;
  doc["seed"] = config.seed;
  doc["loss"] = LossName(config.loss);
  doc["loss_vs_truth"] = config.loss_vs_truth;
  doc["distribution"] = {
      {"kind", DistributionKindName(config.distribution.kind)},
      {"params", config.distribution.params},
      {"support", config.distribution.support_size},
  };
  return doc;
}

}  // namespace ldpest
