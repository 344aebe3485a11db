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

// Command-line surface: channel inspection, privacy verification, closed-form
// risks, Monte Carlo experiments, grid sweeps, and sweep reporting.
//
// Exit codes: 0 success, 2 invalid flags, 3 enumeration bound exceeded,
// 4 config schema error, 5 runtime trial failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldpest/channel.h"
#include "ldpest/decoders.h"
#include "ldpest/mechanisms.h"
#include "ldpest/open_alphabet.h"
#include "ldpest/privacy_budget.h"
#include "ldpest/risk.h"
#include "ldpest/simkit.h"

namespace {

constexpr char kVersion[] = "ldpest 0.1.0";
constexpr int kExitFlags = 2;
constexpr int kExitEnumeration = 3;
constexpr int kExitConfig = 4;
constexpr int kExitRuntime = 5;

struct CliError {
  int code;
  std::string message;
};

double EpsilonFlag(const std::string& text) {
  try {
    const double eps = ldpest::ParseEpsilon(text);
    if (eps < 0.0) throw CliError{kExitFlags, "epsilon must be >= 0"};
    return eps;
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitFlags, e.what()};
  }
}

ldpest::DistributionSpec ParseDistFlag(const std::string& text, int support) {
  ldpest::DistributionSpec spec;
  spec.support_size = support;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  try {
    spec.kind = ldpest::ParseDistributionKind(kind);
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitFlags, e.what()};
  }
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, '|')) {
      try {
        spec.params.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw CliError{kExitFlags, "cannot parse distribution parameter '" + item + "'"};
      }
    }
  }
  return spec;
}

void PrintChannelCsv(const ldpest::Channel& q) {
  for (int x = 0; x < q.input_size(); ++x) {
    for (int y = 0; y < q.output_size(); ++y) {
      if (y) std::cout << ',';
      std::cout << ldpest::FormatDouble(q.entry(x, y));
    }
    std::cout << '\n';
  }
}

int CmdChannel(const std::string& mech, int k, const std::string& epsilon_text) {
  const double epsilon = EpsilonFlag(epsilon_text);
  if (k < 2) throw CliError{kExitFlags, "k must be >= 2"};
  const ldpest::PrivacyBudget budget(epsilon);
  if (mech == "krr") {
    PrintChannelCsv(ldpest::BuildKrrChannel(k, budget));
  } else if (mech == "rappor") {
    if (k > 12) {
      throw CliError{kExitEnumeration,
                     "enumeration too large: rappor channel needs k <= 12"};
    }
    PrintChannelCsv(ldpest::EnumerateRapporChannel(k, budget));
  } else {
    throw CliError{kExitFlags, "channel supports --mech krr or rappor"};
  }
  return 0;
}

int CmdPrivacyCheck(const std::string& mech, int k, const std::string& epsilon_text,
                    int candidate_count, int num_cohorts, int num_hashes,
                    uint64_t scheme_seed, const std::string& mode) {
  const double epsilon = EpsilonFlag(epsilon_text);
  if (k < 2) throw CliError{kExitFlags, "k must be >= 2"};
  const ldpest::PrivacyBudget budget(epsilon);

  ldpest::DpVerification verdict;
  if (mech == "krr") {
    verdict = ldpest::VerifyChannelDp(ldpest::BuildKrrChannel(k, budget), budget);
  } else if (mech == "rappor") {
    if (k > 20) {
      throw CliError{kExitEnumeration, "enumeration too large: rappor needs k <= 20"};
    }
    const ldpest::FlipParams fp = ldpest::RapporFlipParams(budget);
    const int64_t outputs = int64_t{1} << k;
    verdict = ldpest::VerifyEnumeratedDp(
        k, outputs,
        [&](int64_t y, std::span<double> column) {
          for (int x = 0; x < k; ++x) {
            double prob = 1.0;
            for (int j = 0; j < k; ++j) {
              const bool bit = (y >> j) & 1;
              prob *= (bit == (j == x)) ? fp.keep_prob : fp.flip_prob;
            }
            column[x] = prob;
          }
        },
        budget);
  } else if (mech == "orr" || mech == "orappor") {
    if (candidate_count < 2) throw CliError{kExitFlags, "--S must be >= 2"};
    if (num_cohorts < 1) throw CliError{kExitFlags, "--C must be >= 1"};
    const bool permutation = mode == "permutation";
    if (!permutation && mode != "hash") {
      throw CliError{kExitFlags, "--mode must be hash or permutation"};
    }
    try {
      const auto scheme =
          permutation
              ? ldpest::CohortScheme::Permutation(num_cohorts, k, candidate_count,
                                                  scheme_seed)
              : ldpest::CohortScheme::KeyedHash(num_cohorts, k,
                                                mech == "orappor" ? num_hashes : 1,
                                                scheme_seed);
      std::vector<std::string> names;
      ldpest::DesignMatrix design;
      if (permutation) {
        design = ldpest::BuildDesignMatrix(candidate_count, scheme);
      } else {
        for (int s = 0; s < candidate_count; ++s) names.push_back("sym" + std::to_string(s));
        design = ldpest::BuildDesignMatrix(names, scheme);
      }
      if (mech == "orr") {
        const int64_t cells = static_cast<int64_t>(candidate_count) * k * num_cohorts;
        if (cells > 1'000'000) {
          throw CliError{kExitEnumeration, "enumeration too large: need S*k*C <= 1e6"};
        }
        verdict = ldpest::VerifyChannelDp(ldpest::EnumerateOrrChannel(design, budget),
                                          budget);
      } else {
        if (k > 16) {
          throw CliError{kExitEnumeration, "enumeration too large: orappor needs k <= 16"};
        }
        const int64_t cells =
            static_cast<int64_t>(candidate_count) * num_cohorts * (int64_t{1} << k);
        if (cells > 1'000'000) {
          throw CliError{kExitEnumeration, "enumeration too large: need S*C*2^k <= 1e6"};
        }
        verdict = ldpest::VerifyChannelDp(
            ldpest::EnumerateOrapporChannel(design, budget), budget);
      }
    } catch (const std::invalid_argument& e) {
      throw CliError{kExitFlags, e.what()};
    }
  } else {
    throw CliError{kExitFlags, "unknown mechanism '" + mech + "'"};
  }

  std::cout << "max_ratio=" << ldpest::FormatDouble(verdict.max_ratio)
            << " e^epsilon=" << ldpest::FormatDouble(budget.exp_epsilon()) << ' '
            << (verdict.satisfied ? "PASS" : "FAIL") << '\n';
  return 0;
}

int CmdRisk(const std::string& mech, int k, const std::string& epsilon_text, int64_t n,
            const std::string& dist_text, int mc_trials, uint64_t seed, int threads) {
  if (k < 2) throw CliError{kExitFlags, "k must be >= 2"};
  if (n < 1) throw CliError{kExitFlags, "n must be >= 1"};
  const ldpest::DistributionSpec spec = ParseDistFlag(dist_text, k);
  ldpest::RngStream rng(seed, 0);
  ldpest::ProbVector p = [&] {
    try {
      return ldpest::MakeDistribution(spec, rng);
    } catch (const std::invalid_argument& e) {
      throw CliError{kExitFlags, e.what()};
    }
  }();

  if (mech == "nonprivate") {
    const auto risks = ldpest::ComputeNonprivateRisks(p, n);
    std::cout << "empirical_l2=" << ldpest::FormatDouble(risks.empirical_l2)
              << " empirical_l1_asymptotic="
              << ldpest::FormatDouble(risks.empirical_l1_asymptotic)
              << " minimax_l2=" << ldpest::FormatDouble(risks.minimax_l2)
              << " minimax_l1_asymptotic="
              << ldpest::FormatDouble(risks.minimax_l1_asymptotic) << '\n';
    return 0;
  }

  const double epsilon = EpsilonFlag(epsilon_text);
  if (epsilon <= 0.0) throw CliError{kExitFlags, "risk formulas need epsilon > 0"};
  const ldpest::PrivacyBudget budget(epsilon);
  ldpest::RiskReport report;
  if (mech == "krr") {
    report = ldpest::KrrRisk(p, n, budget);
  } else if (mech == "rappor") {
    report = ldpest::RapporRisk(p, n, budget);
  } else {
    throw CliError{kExitFlags, "risk supports --mech krr, rappor, or nonprivate"};
  }
  std::cout << "l2_squared=" << ldpest::FormatDouble(report.l2_squared)
            << " l1_asymptotic=" << ldpest::FormatDouble(report.l1_asymptotic) << '\n';

  if (mc_trials > 0) {
    ldpest::ExperimentConfig config;
    config.mechanism = mech == "krr" ? ldpest::Mechanism::kKrr : ldpest::Mechanism::kRappor;
    config.decoder = ldpest::DecoderKind::kStandard;
    config.distribution = spec;
    config.n = n;
    config.epsilon = epsilon;
    config.k = k;
    config.trials = mc_trials;
    config.seed = seed;
    config.loss_vs_truth = true;
    config.threads = threads;
    for (const auto loss : {ldpest::Loss::kL2Squared, ldpest::Loss::kL1}) {
      config.loss = loss;
      try {
        const auto agg = ldpest::RunExperiment(config);
        const double closed =
            loss == ldpest::Loss::kL2Squared ? report.l2_squared : report.l1_asymptotic;
        std::cout << "mc_" << ldpest::LossName(loss) << "_mean="
                  << ldpest::FormatDouble(agg.mean)
                  << " rel_err=" << ldpest::FormatDouble(agg.mean / closed - 1.0)
                  << " trials=" << mc_trials << '\n';
      } catch (const ldpest::ExperimentError& e) {
        throw CliError{kExitRuntime, e.what()};
      }
    }
  }
  return 0;
}

nlohmann::json LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitConfig, "cannot open config file '" + path + "'"};
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CliError{kExitConfig, std::string("config parse error: ") + e.what()};
  }
}

uint64_t ResolveSeed(const nlohmann::json& doc, std::optional<uint64_t> seed_flag) {
  if (seed_flag) return *seed_flag;
  if (doc.contains("seed")) return doc.at("seed").get<uint64_t>();
  // No seed anywhere: pick one, print it, and persist it in the sidecar so
  // the run stays reproducible.
  std::random_device rd;
  const uint64_t seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed not specified; using " << seed << '\n';
  return seed;
}

void WriteSidecar(const std::filesystem::path& path, const ldpest::ExperimentConfig& config,
                  const nlohmann::json& extra) {
  nlohmann::json doc;
  doc["version"] = kVersion;
  doc["config"] = ldpest::ExperimentConfigToJson(config);
  for (const auto& [key, value] : extra.items()) doc[key] = value;
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
}

int CmdSimulate(const std::string& config_path, const std::string& out_dir,
                const std::string& name, std::optional<uint64_t> seed_flag,
                int threads) {
  const nlohmann::json doc = LoadConfigFile(config_path);
  ldpest::ExperimentConfig config;
  try {
    config = ldpest::ParseExperimentConfig(doc);
    config.seed = ResolveSeed(doc, seed_flag);
    if (threads > 0) config.threads = threads;
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitConfig, e.what()};
  }

  ldpest::AggregateResult result;
  try {
    result = ldpest::RunExperiment(config);
  } catch (const ldpest::ExperimentError& e) {
    throw CliError{kExitRuntime, e.what()};
  }

  std::filesystem::create_directories(out_dir);
  const auto csv_path = std::filesystem::path(out_dir) / (name + ".csv");
  {
    std::ofstream csv(csv_path);
    ldpest::WriteResultsCsv(csv, config, result);
  }
  WriteSidecar(std::filesystem::path(out_dir) / (name + ".json"), config, {});
  std::cout << "wrote " << csv_path.string() << '\n';
  return 0;
}

int CmdSweep(const std::string& config_path, const std::string& out_dir,
             const std::string& name, std::optional<uint64_t> seed_flag, int threads) {
  const nlohmann::json doc = LoadConfigFile(config_path);
  ldpest::ExperimentConfig base;
  ldpest::SweepGrid grid;
  try {
    base = ldpest::ParseExperimentConfig(doc);
    base.seed = ResolveSeed(doc, seed_flag);
    if (threads > 0) base.threads = threads;
    grid = ldpest::ParseSweepGrid(doc);
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitConfig, e.what()};
  }

  std::vector<ldpest::SweepEntry> entries;
  try {
    entries = ldpest::GridSweep(base, grid);
  } catch (const ldpest::ExperimentError& e) {
    throw CliError{kExitRuntime, e.what()};
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitConfig, e.what()};
  }

  std::filesystem::create_directories(out_dir);
  const auto csv_path = std::filesystem::path(out_dir) / (name + ".csv");
  {
    std::ofstream csv(csv_path);
    ldpest::WriteResultsCsv(csv, entries);
  }
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& entry : entries) {
    if (entry.skipped) {
      skipped.push_back({{"k", entry.config.k},
                         {"C", entry.config.num_cohorts},
                         {"h", entry.config.num_hashes},
                         {"epsilon", entry.config.epsilon},
                         {"reason", entry.skip_reason}});
    }
  }
  WriteSidecar(std::filesystem::path(out_dir) / (name + ".json"), base,
               {{"skipped", skipped}});
  std::cout << "wrote " << csv_path.string() << " (" << entries.size() << " grid points, "
            << skipped.size() << " skipped)\n";
  return 0;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

int CmdReport(const std::vector<std::string>& inputs, const std::string& output) {
  struct Row {
    std::vector<std::string> fields;
    double median;
    int k, c, h;
  };
  // (mechanism, epsilon-string) -> best row, insertion ordered.
  std::vector<std::pair<std::string, Row>> best;

  for (const auto& input : inputs) {
    std::ifstream in(input);
    if (!in) throw CliError{kExitFlags, "cannot open '" + input + "'"};
    std::string line;
    if (!std::getline(in, line)) throw CliError{kExitFlags, "empty CSV '" + input + "'"};
    const auto header = SplitCsvLine(line);
    if (header.size() < 14 || header[0] != "mechanism") {
      throw CliError{kExitFlags, "unrecognized CSV header in '" + input + "'"};
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto fields = SplitCsvLine(line);
      if (fields.size() != header.size()) {
        throw CliError{kExitFlags, "malformed CSV row in '" + input + "'"};
      }
      Row row;
      try {
        row.median = std::stod(fields[10]);
        row.k = std::stoi(fields[2]);
        row.c = fields[3].empty() ? 1 : std::stoi(fields[3]);
        row.h = fields[4].empty() ? 1 : std::stoi(fields[4]);
      } catch (const std::exception&) {
        throw CliError{kExitFlags, "malformed CSV row in '" + input + "'"};
      }
      row.fields = std::move(fields);
      const std::string key = row.fields[0] + "|" + row.fields[5];
      auto it = std::find_if(best.begin(), best.end(),
                             [&](const auto& kv) { return kv.first == key; });
      if (it == best.end()) {
        best.emplace_back(key, std::move(row));
      } else {
        const auto tie = [](const Row& r) {
          return std::tuple<double, int, int, int>(r.median, r.k, r.c, r.h);
        };
        if (tie(row) < tie(it->second)) it->second = std::move(row);
      }
    }
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw CliError{kExitFlags, "cannot write '" + output + "'"};
    out = &file;
  }
  *out << "mechanism,epsilon,best_k,best_C,best_h,decoder,n,distribution,trials,"
          "median,ci_low,ci_high\n";
  for (const auto& [key, row] : best) {
    const auto& f = row.fields;
    *out << f[0] << ',' << f[5] << ',' << f[2] << ',' << (f[3].empty() ? "1" : f[3])
         << ',' << (f[4].empty() ? "1" : f[4]) << ',' << f[1] << ',' << f[6] << ','
         << f[7] << ',' << f[8] << ',' << f[10] << ',' << f[11] << ',' << f[12] << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - locally differentially private discrete distribution estimation"};
  app.require_subcommand(1);

  // channel
  std::string ch_mech = "krr", ch_eps = "1";
  int ch_k = 2;
  auto* channel = app.add_subcommand("channel", "print a mechanism's channel matrix as CSV");
  channel->add_option("--mech", ch_mech, "krr | rappor");
  channel->add_option("--k", ch_k, "alphabet size")->required();
  channel->add_option("--epsilon", ch_eps, "privacy level (decimal or lnK)")->required();

  // privacy-check
  std::string pc_mech = "krr", pc_eps = "1", pc_mode = "hash";
  int pc_k = 2, pc_s = 2, pc_c = 1, pc_h = 1;
  uint64_t pc_seed = 0;
  auto* privacy = app.add_subcommand("privacy-check",
                                     "enumerate a report channel and verify the privacy bound");
  privacy->add_option("--mech", pc_mech, "krr | rappor | orr | orappor");
  privacy->add_option("--k", pc_k, "report alphabet / hash range")->required();
  privacy->add_option("--epsilon", pc_eps, "privacy level")->required();
  privacy->add_option("--S", pc_s, "candidate count (hashed mechanisms)");
  privacy->add_option("--C", pc_c, "cohorts (hashed mechanisms)");
  privacy->add_option("--h", pc_h, "Bloom hashes (orappor)");
  privacy->add_option("--scheme-seed", pc_seed, "hash scheme seed");
  privacy->add_option("--mode", pc_mode, "hash | permutation");

  // risk
  std::string rk_mech = "krr", rk_eps = "1", rk_dist = "uniform";
  int rk_k = 2, rk_mc = 0, rk_threads = 0;
  int64_t rk_n = 1;
  uint64_t rk_seed = 0;
  auto* risk = app.add_subcommand("risk", "closed-form risks, optionally checked by Monte Carlo");
  risk->add_option("--mech", rk_mech, "krr | rappor | nonprivate");
  risk->add_option("--k", rk_k)->required();
  risk->add_option("--epsilon", rk_eps);
  risk->add_option("--n", rk_n)->required();
  risk->add_option("--dist", rk_dist, "kind[:p1|p2...], e.g. geometric or zipf:1");
  risk->add_option("--mc-trials", rk_mc, "run a Monte Carlo check with this many trials");
  risk->add_option("--seed", rk_seed);
  risk->add_option("--threads", rk_threads);

  // simulate / sweep
  std::string sim_config, sim_out = "results", sim_name = "result";
  std::optional<uint64_t> sim_seed;
  int sim_threads = 0;
  auto* simulate = app.add_subcommand("simulate", "run one experiment from a JSON config");
  simulate->add_option("--config", sim_config)->required();
  simulate->add_option("--out", sim_out, "output directory");
  simulate->add_option("--name", sim_name, "output file stem");
  simulate->add_option("--seed", sim_seed, "override the config seed");
  simulate->add_option("--threads", sim_threads, "worker cap (results identical for any value)");

  std::string sw_config, sw_out = "results", sw_name = "sweep";
  std::optional<uint64_t> sw_seed;
  int sw_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid from a JSON config");
  sweep->add_option("--config", sw_config)->required();
  sweep->add_option("--out", sw_out);
  sweep->add_option("--name", sw_name);
  sweep->add_option("--seed", sw_seed);
  sweep->add_option("--threads", sw_threads);

  // report
  std::vector<std::string> rp_inputs;
  std::string rp_output;
  auto* report = app.add_subcommand("report", "per-epsilon best-parameter table from sweep CSVs");
  report->add_option("--input", rp_inputs, "sweep CSV file(s)")->required();
  report->add_option("--output", rp_output, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << '\n';
    return kExitFlags;
  }

  try {
    if (channel->parsed()) return CmdChannel(ch_mech, ch_k, ch_eps);
    if (privacy->parsed()) {
      return CmdPrivacyCheck(pc_mech, pc_k, pc_eps, pc_s, pc_c, pc_h, pc_seed, pc_mode);
    }
    if (risk->parsed()) {
      return CmdRisk(rk_mech, rk_k, rk_eps, rk_n, rk_dist, rk_mc, rk_seed, rk_threads);
    }
    if (simulate->parsed()) {
      return CmdSimulate(sim_config, sim_out, sim_name, sim_seed, sim_threads);
    }
    if (sweep->parsed()) return CmdSweep(sw_config, sw_out, sw_name, sw_seed, sw_threads);
    if (report->parsed()) return CmdReport(rp_inputs, rp_output);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFlags;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
