// Copyright 2026 The Privstats Authors
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

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "privstats/csv.hpp"
#include "privstats/group_crypto.hpp"
#include "privstats/harness.hpp"

namespace {

using privstats::CsvBuilder;
using privstats::ExperimentConfig;

struct CommonArgs {
  std::map<std::string, std::string> overrides;  // config key -> value
  std::string config_path;
  std::string out_path;
};

// Every simulation flag funnels through the same key=value schema the config
// file uses, so CLI flags and config files cannot drift apart. CLI values
// override file values.
void add_kv(CLI::App* cmd, CommonArgs& args, const std::string& flag,
            const std::string& key, const std::string& desc) {
  cmd->add_option_function<std::string>(
      flag, [&args, key](const std::string& v) { args.overrides[key] = v; },
      desc);
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "key=value config file applied before CLI flags");
  cmd->add_option("--out", args.out_path, "write the per-trial CSV here");
  add_kv(cmd, args, "--seed", "seed", "experiment seed");
  add_kv(cmd, args, "--trials", "trials", "number of trials");
  add_kv(cmd, args, "--epsilon", "epsilon", "sketch accuracy parameter");
  add_kv(cmd, args, "--delta", "delta", "sketch failure probability");
  add_kv(cmd, args, "--crypto", "crypto",
         "run the cryptographic layers (default true)");
  cmd->add_flag_callback(
      "--no-crypto", [&args] { args.overrides["crypto"] = "false"; },
      "bypass the cryptographic layers (aggregates are identical)");
  add_kv(cmd, args, "--dropout-rate", "dropout_rate",
         "per-user offline probability");
  cmd->add_flag_callback(
      "--force-recovery", [&args] { args.overrides["force_recovery"] = "true"; },
      "use the fault-recovery path even with everyone online");
  add_kv(cmd, args, "--group-size", "group_size", "users per blinding group");
}

ExperimentConfig build_config(const CommonArgs& args,
                              const std::string& scenario) {
  ExperimentConfig config;
  privstats::apply_option(config, "scenario", scenario);
  if (!args.config_path.empty()) {
    privstats::load_config_file(config, args.config_path);
    privstats::apply_option(config, "scenario", scenario);
  }
  for (const auto& [key, value] : args.overrides) {
    privstats::apply_option(config, key, value);
  }
  return config;
}

int run_sim(const CommonArgs& args, const std::string& scenario) {
  const ExperimentConfig config = build_config(args, scenario);
  const privstats::ErrorReport report = privstats::run_scenario(config);
  if (!args.out_path.empty()) {
    privstats::write_file(args.out_path, report.csv);
  } else {
    std::fputs(report.csv.c_str(), stdout);
  }
  std::fprintf(stderr, "trials=%u average_error=%s mae=%s\n", config.trials,
               CsvBuilder::num(report.average_error).c_str(),
               CsvBuilder::num(report.mae).c_str());
  if (config.scenario == privstats::Scenario::kMedian) {
    std::fprintf(stderr, "relative_median_error=%s\n",
                 CsvBuilder::num(report.relative_median_error).c_str());
  }
  return 0;
}

std::string hex(const uint8_t* data, size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 15]);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private statistics pipelines over succinct sketches"};
  app.require_subcommand(1);

  CommonArgs rec_args, loc_args, med_args;

  CLI::App* rec = app.add_subcommand(
      "recommender-sim", "co-view aggregation and ItemKNN recommendation");
  add_common(rec, rec_args);
  add_kv(rec, rec_args, "--users", "users", "number of users");
  add_kv(rec, rec_args, "--programs", "programs", "catalog size");
  add_kv(rec, rec_args, "--views-per-user", "views_per_user",
         "zipfian draws per user");
  add_kv(rec, rec_args, "--zipf-exponent", "zipf_exponent",
         "popularity skew exponent");
  add_kv(rec, rec_args, "--top-k", "top_k", "neighbors per item");
  add_kv(rec, rec_args, "--eval-items", "eval_items",
         "pair keys scored for the error metric");

  CLI::App* loc = app.add_subcommand(
      "location-sim", "grid occupancy aggregation and EWMA prediction");
  add_common(loc, loc_args);
  add_kv(loc, loc_args, "--entities", "entities", "number of entities");
  add_kv(loc, loc_args, "--grid-p", "grid_p", "grid side length");
  add_kv(loc, loc_args, "--slots", "slots", "number of time slots");
  add_kv(loc, loc_args, "--top-cells", "top_cells",
         "cells scored for the error metric");
  add_kv(loc, loc_args, "--alpha", "ewma_alpha", "EWMA smoothing coefficient");

  CLI::App* med = app.add_subcommand(
      "median-sim", "encrypted range counts and bisection median");
  add_common(med, med_args);
  add_kv(med, med_args, "--reporters", "reporters", "number of reporters");
  add_kv(med, med_args, "--values-per-reporter", "values_per_reporter",
         "values contributed by each reporter");
  add_kv(med, med_args, "--domain", "domain", "value range as lo:hi");
  add_kv(med, med_args, "--dp-epsilon", "dp_epsilon",
         "differential privacy budget, 0 disables noise");
  add_kv(med, med_args, "--authorities", "authorities",
         "decryption authorities");
  add_kv(med, med_args, "--plaintext-cap", "plaintext_cap",
         "per-contributor cap in the dlog table bound");

  CLI::App* bytes = app.add_subcommand(
      "bench-bytes", "per-party byte accounting for one round");
  double bb_epsilon = 0.01, bb_delta = 0.01;
  uint64_t bb_total = 245000;
  uint64_t bb_group = 100;
  std::string bb_out;
  bytes->add_option("--epsilon", bb_epsilon, "sketch accuracy parameter");
  bytes->add_option("--delta", bb_delta, "sketch failure probability");
  bytes->add_option("--total-items", bb_total,
                    "expected stream size (sets the sketch depth)");
  bytes->add_option("--group-size", bb_group, "users per blinding group");
  bytes->add_option("--out", bb_out, "write the table here");

  CLI::App* keygen_cmd =
      app.add_subcommand("keygen", "deterministic key pair from a seed");
  uint64_t kg_seed = 0;
  std::string kg_out;
  keygen_cmd->add_option("--seed", kg_seed, "key derivation seed")->required();
  keygen_cmd->add_option("--out", kg_out, "write the key pair here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rec->parsed()) return run_sim(rec_args, "recommender");
    if (loc->parsed()) return run_sim(loc_args, "location");
    if (med->parsed()) return run_sim(med_args, "median");
    if (bytes->parsed()) {
      const auto params = privstats::derive_params(
          bb_epsilon, bb_delta, privstats::DepthRule::count_items(bb_total));
      const auto acct = privstats::bench_bytes(params, bb_group);
      CsvBuilder csv({"depth", "width", "sketch_cells",
                      "payload_bytes_per_user", "key_bytes_per_user",
                      "framed_submission_bytes"});
      csv.row({std::to_string(params.depth), std::to_string(params.width),
               std::to_string(acct.sketch_cells),
               std::to_string(acct.payload_bytes_per_user),
               std::to_string(acct.key_bytes_per_user),
               std::to_string(acct.framed_submission_bytes)});
      if (!bb_out.empty()) {
        privstats::write_file(bb_out, csv.text());
      } else {
        std::fputs(csv.text().c_str(), stdout);
      }
      return 0;
    }
    if (keygen_cmd->parsed()) {
      const privstats::KeyPair kp = privstats::keygen(kg_seed);
      CsvBuilder csv({"seed", "private_key", "public_key"});
      csv.row({std::to_string(kg_seed), hex(kp.private_key.data(), 32),
               hex(kp.public_key.data(), 32)});
      if (!kg_out.empty()) {
        privstats::write_file(kg_out, csv.text());
      } else {
        std::fputs(csv.text().c_str(), stdout);
      }
      return 0;
    }
  } catch (const privstats::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
