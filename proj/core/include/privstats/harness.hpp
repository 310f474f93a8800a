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

#ifndef PRIVSTATS_HARNESS_HPP_
#define PRIVSTATS_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "privstats/sketch.hpp"
#include "privstats/zerosum.hpp"

namespace privstats {

// Experiment orchestration: synthetic data in, full pipeline, CSV out.
// Every run is a deterministic function of its config (seed included), so
// identical configs produce byte-identical CSV.

enum class Scenario { kRecommender, kLocation, kMedian };

struct ExperimentConfig {
  Scenario scenario = Scenario::kMedian;
  uint64_t seed = 0;
  uint32_t trials = 1;
  double epsilon = 0.01;
  double delta = 0.01;

  // When false the cryptographic layers are bypassed and plaintext sketches
  // are merged directly. The aggregates are identical either way; the flag
  // exists so that claim can be asserted and so statistical sweeps run fast.
  bool crypto = true;
  double dropout_rate = 0;
  bool force_recovery = false;
  uint32_t group_size = 100;

  // Recommender scenario.
  uint32_t users = 100;
  uint32_t programs = 700;
  uint32_t views_per_user = 10;
  double zipf_exponent = 1.0;
  uint32_t top_k = 10;
  uint32_t eval_items = 50;

  // Location scenario.
  uint32_t entities = 64;
  uint32_t grid_p = 16;
  uint32_t slots = 12;
  uint32_t top_cells = 100;
  double ewma_alpha = 0.3;

  // Median scenario.
  uint32_t reporters = 60;
  uint32_t values_per_reporter = 20;
  int64_t domain_lo = 0;
  int64_t domain_hi = 1000;
  double dp_epsilon = 0;  // 0 disables the DP layer
  uint32_t authorities = 3;
  int64_t plaintext_cap = 16;  // c_max in the dlog bound d * n * c_max

  void validate() const;  // throws ParameterError
};

// Sets one field from its config-file key ("epsilon", "trials", ...).
// Throws ParameterError for unknown keys or unparseable values.
void apply_option(ExperimentConfig& config, const std::string& key,
                  const std::string& value);

// key=value lines; '#' starts a comment; blank lines ignored.
void load_config_file(ExperimentConfig& config, const std::string& path);

struct ErrorReport {
  std::vector<double> per_trial_error;  // primary metric, one per trial
  double average_error = 0;             // mean of per_trial_error
  double mae = 0;
  double relative_median_error = 0;  // median scenario only
  uint64_t payload_bytes_per_user = 0;
  uint64_t key_bytes_per_user = 0;
  std::string csv;  // per-trial rows, scenario-specific columns
};

ErrorReport run_scenario(const ExperimentConfig& config);
ErrorReport run_recommender(const ExperimentConfig& config);
ErrorReport run_location(const ExperimentConfig& config);
ErrorReport run_median(const ExperimentConfig& config);

struct ByteAccounting {
  uint64_t sketch_cells = 0;            // L = d * w
  uint64_t payload_bytes_per_user = 0;  // 4 bytes per cell
  uint64_t key_bytes_per_user = 0;      // 32 bytes per group member
  uint64_t framed_submission_bytes = 0;  // full wire message, informational
};

ByteAccounting bench_bytes(const SketchParams& params, size_t group_size);

// Blinding vectors for every roster member at once. Each unordered pair's
// mask stream is derived once and applied with opposite signs, so the output
// is bit-identical to per-member blinding_factors at half the hashing cost.
std::vector<std::vector<uint32_t>> all_blinding_factors(
    const std::vector<KeyPair>& keys, const Roster& roster, size_t length);

// One zero-sum round over a roster: blind, submit (only members with
// online[i] set), recover if anyone was offline or force_recovery is set.
// keys[i] belongs to roster.members[i].
SketchTable run_round(const std::vector<KeyPair>& keys, const Roster& roster,
                      const std::vector<SketchTable>& sketches,
                      const std::vector<bool>& online, bool force_recovery,
                      SketchKind kind, const SketchParams& params);

}  // namespace privstats

#endif  // PRIVSTATS_HARNESS_HPP_
