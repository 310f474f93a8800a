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

#include "privstats/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "privstats/ahe.hpp"
#include "privstats/analytics.hpp"
#include "privstats/csv.hpp"
#include "privstats/datagen.hpp"
#include "privstats/median.hpp"

namespace privstats {
namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(std::string("stage ") + name + ": " + e.what());
  }
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0;
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

uint64_t parse_u64(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw ParameterError("expected an integer, got '" + s + "'");
  }
  return v;
}

int64_t parse_i64(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw ParameterError("expected an integer, got '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ParameterError("expected a number, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ParameterError("expected a boolean, got '" + s + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (!(epsilon > 0 && epsilon < 1) || !(delta > 0 && delta < 1)) {
    throw ParameterError("epsilon and delta must be in (0, 1)");
  }
  if (!(dropout_rate >= 0 && dropout_rate < 1)) {
    throw ParameterError("dropout_rate must be in [0, 1)");
  }
  if (group_size < 2) throw ParameterError("group_size must be >= 2");
  switch (scenario) {
    case Scenario::kRecommender:
      if (users < 1 || programs < 2 || views_per_user < 1 || top_k < 1 ||
          eval_items < 1) {
        throw ParameterError("recommender sizes must be positive");
      }
      if (!(zipf_exponent > 0)) {
        throw ParameterError("zipf_exponent must be > 0");
      }
      break;
    case Scenario::kLocation:
      if (entities < 1 || grid_p < 2 || slots < 2 || top_cells < 1) {
        throw ParameterError("location sizes must be positive, slots >= 2");
      }
      if (!(ewma_alpha > 0 && ewma_alpha < 1)) {
        throw ParameterError("ewma_alpha must be in (0, 1)");
      }
      break;
    case Scenario::kMedian:
      if (reporters < 1 || values_per_reporter < 1 || authorities < 1 ||
          plaintext_cap < 1) {
        throw ParameterError("median sizes must be positive");
      }
      if (domain_hi <= domain_lo) {
        throw ParameterError("median domain requires hi > lo");
      }
      if (dp_epsilon < 0) throw ParameterError("dp_epsilon must be >= 0");
      break;
  }
}

void apply_option(ExperimentConfig& c, const std::string& key,
                  const std::string& value) {
  if (key == "scenario") {
    if (value == "recommender") {
      c.scenario = Scenario::kRecommender;
    } else if (value == "location") {
      c.scenario = Scenario::kLocation;
    } else if (value == "median") {
      c.scenario = Scenario::kMedian;
    } else {
      throw ParameterError("unknown scenario '" + value + "'");
    }
  } else if (key == "seed") {
    c.seed = parse_u64(value);
  } else if (key == "trials") {
    c.trials = uint32_t(parse_u64(value));
  } else if (key == "epsilon") {
    c.epsilon = parse_double(value);
  } else if (key == "delta") {
    c.delta = parse_double(value);
  } else if (key == "crypto") {
    c.crypto = parse_bool(value);
  } else if (key == "dropout_rate") {
    c.dropout_rate = parse_double(value);
  } else if (key == "force_recovery") {
    c.force_recovery = parse_bool(value);
  } else if (key == "group_size") {
    c.group_size = uint32_t(parse_u64(value));
  } else if (key == "users") {
    c.users = uint32_t(parse_u64(value));
  } else if (key == "programs") {
    c.programs = uint32_t(parse_u64(value));
  } else if (key == "views_per_user") {
    c.views_per_user = uint32_t(parse_u64(value));
  } else if (key == "zipf_exponent") {
    c.zipf_exponent = parse_double(value);
  } else if (key == "top_k") {
    c.top_k = uint32_t(parse_u64(value));
  } else if (key == "eval_items") {
    c.eval_items = uint32_t(parse_u64(value));
  } else if (key == "entities") {
    c.entities = uint32_t(parse_u64(value));
  } else if (key == "grid_p") {
    c.grid_p = uint32_t(parse_u64(value));
  } else if (key == "slots") {
    c.slots = uint32_t(parse_u64(value));
  } else if (key == "top_cells") {
    c.top_cells = uint32_t(parse_u64(value));
  } else if (key == "ewma_alpha") {
    c.ewma_alpha = parse_double(value);
  } else if (key == "reporters") {
    c.reporters = uint32_t(parse_u64(value));
  } else if (key == "values_per_reporter") {
    c.values_per_reporter = uint32_t(parse_u64(value));
  } else if (key == "domain") {
    const size_t colon = value.find(':');
    if (colon == std::string::npos) {
      throw ParameterError("domain must look like lo:hi");
    }
    c.domain_lo = parse_i64(value.substr(0, colon));
    c.domain_hi = parse_i64(value.substr(colon + 1));
  } else if (key == "domain_lo") {
    c.domain_lo = parse_i64(value);
  } else if (key == "domain_hi") {
    c.domain_hi = parse_i64(value);
  } else if (key == "dp_epsilon") {
    c.dp_epsilon = parse_double(value);
  } else if (key == "authorities") {
    c.authorities = uint32_t(parse_u64(value));
  } else if (key == "plaintext_cap") {
    c.plaintext_cap = parse_i64(value);
  } else {
    throw ParameterError("unknown config key '" + key + "'");
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' ||
                             line.back() == '\t')) {
      line.pop_back();
    }
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const size_t eq = line.find('=', start);
    if (eq == std::string::npos) {
      throw ParameterError(path + ":" + std::to_string(lineno) +
                           ": expected key=value");
    }
    std::string key = line.substr(start, eq - start);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) {
      key.pop_back();
    }
    size_t vstart = line.find_first_not_of(" \t", eq + 1);
    apply_option(config, key,
                 vstart == std::string::npos ? "" : line.substr(vstart));
  }
}

ByteAccounting bench_bytes(const SketchParams& params, size_t group_size) {
  ByteAccounting out;
  out.sketch_cells = uint64_t(params.depth) * params.width;
  out.payload_bytes_per_user = 4 * out.sketch_cells;
  out.key_bytes_per_user = 32 * uint64_t(group_size);
  BlindedSketch sample;
  sample.group_id = "g.0";
  sample.user_id = "u.0";
  sample.entries.assign(out.sketch_cells, 0);
  out.framed_submission_bytes = sample.serialize().size();
  return out;
}

std::vector<std::vector<uint32_t>> all_blinding_factors(
    const std::vector<KeyPair>& keys, const Roster& roster, size_t length) {
  const size_t n = roster.members.size();
  if (keys.size() != n) {
    throw UsageError("one key pair per roster member required");
  }
  std::vector<std::vector<uint32_t>> factors(
      n, std::vector<uint32_t>(length, 0));
  for (size_t i = 0; i < n; ++i) {
    if (keys[i].public_key != roster.members[i].public_key) {
      throw ProtocolError("key pair does not match the roster entry");
    }
    std::vector<uint32_t> masks(length);
    for (size_t j = i + 1; j < n; ++j) {
      const SharedPoint shared =
          shared_point(keys[i], roster.members[j].public_key);
      mask_stream(shared, roster.round, uint32_t(length), masks.data());
      // pos(i) < pos(j): i adds the mask, j subtracts it.
      for (size_t l = 0; l < length; ++l) {
        factors[i][l] += masks[l];
        factors[j][l] -= masks[l];
      }
    }
  }
  return factors;
}

SketchTable run_round(const std::vector<KeyPair>& keys, const Roster& roster,
                      const std::vector<SketchTable>& sketches,
                      const std::vector<bool>& online, bool force_recovery,
                      SketchKind kind, const SketchParams& params) {
  const size_t n = roster.members.size();
  if (sketches.size() != n || online.size() != n) {
    throw UsageError("sketches and online flags must match the roster");
  }
  const auto factors = all_blinding_factors(keys, roster, sketches[0].size());

  std::vector<BlindedSketch> submissions;
  std::set<std::string> online_ids;
  for (size_t i = 0; i < n; ++i) {
    if (!online[i]) continue;
    submissions.push_back(encrypt_sketch(sketches[i], factors[i], roster,
                                         roster.members[i].id));
    online_ids.insert(roster.members[i].id);
  }
  if (online_ids.empty()) throw ProtocolError("no online members in round");

  if (online_ids.size() == n && !force_recovery) {
    return aggregate(roster, submissions, kind, params);
  }

  std::vector<RecoveryShare> shares;
  for (size_t i = 0; i < n; ++i) {
    if (!online[i]) continue;
    RecoveryShare s;
    s.user_id = roster.members[i].id;
    s.entries = blinding_factors(keys[i], s.user_id, roster,
                                 sketches[i].size(), online_ids);
    shares.push_back(std::move(s));
  }
  return recover(roster, submissions, shares, kind, params);
}

namespace {

// Zero-sum (or bypassed) aggregation of per-user sketches across rosters of
// at most group_size users. Offline users are excluded either way, so the
// crypto and bypass paths produce identical aggregates.
SketchTable aggregate_population(const ExperimentConfig& config,
                                 const std::vector<SketchTable>& sketches,
                                 const SketchParams& params, SketchKind kind,
                                 uint32_t round, Drbg& dropout_rng) {
  const size_t n = sketches.size();
  std::vector<bool> online(n, true);
  if (config.dropout_rate > 0) {
    for (size_t i = 0; i < n; ++i) {
      online[i] = dropout_rng.uniform() >= config.dropout_rate;
    }
  }

  if (!config.crypto) {
    SketchTable total(kind, params);
    bool any = false;
    for (size_t i = 0; i < n; ++i) {
      if (!online[i]) continue;
      total = any ? merge(total, sketches[i]) : sketches[i];
      any = true;
    }
    if (!any) throw ProtocolError("no online members in round");
    return total;
  }

  std::vector<RosterEntry> entries(n);
  std::vector<KeyPair> keys(n);
  for (size_t i = 0; i < n; ++i) {
    keys[i] = keygen(config.seed * 0x9e3779b97f4a7c15ULL + i);
    entries[i] = {"u." + std::to_string(i), keys[i].public_key};
  }
  const auto rosters =
      partition_groups(entries, config.group_size, round, "g");

  SketchTable total(kind, params);
  bool any = false;
  size_t start = 0;
  for (const auto& roster : rosters) {
    const size_t g = roster.members.size();
    std::vector<KeyPair> gkeys(keys.begin() + start, keys.begin() + start + g);
    std::vector<SketchTable> gsketches(sketches.begin() + start,
                                       sketches.begin() + start + g);
    std::vector<bool> gonline(online.begin() + start,
                              online.begin() + start + g);
    if (std::none_of(gonline.begin(), gonline.end(), [](bool b) { return b; })) {
      start += g;
      continue;  // whole group offline
    }
    SketchTable part = run_round(gkeys, roster, gsketches, gonline,
                                 config.force_recovery, kind, params);
    total = any ? merge(total, part) : std::move(part);
    any = true;
    start += g;
  }
  if (!any) throw ProtocolError("no online members in round");
  return total;
}

}  // namespace

ErrorReport run_recommender(const ExperimentConfig& config) {
  config.validate();
  ErrorReport report;
  CsvBuilder csv({"trial", "avg_top_error", "neighbor_overlap",
                  "payload_bytes_per_user", "key_bytes_per_user"});
  std::vector<double> overlaps;

  for (uint32_t trial = 0; trial < config.trials; ++trial) {
    const uint64_t trial_seed = config.seed + trial;

    // Per-user watch sets from a shared zipfian stream.
    const auto draws = stage("generate", [&] {
      return gen_zipf(config.programs,
                      size_t(config.users) * config.views_per_user,
                      config.zipf_exponent, trial_seed);
    });
    std::vector<std::vector<uint32_t>> watch(config.users);
    uint64_t total_updates = 0;
    for (uint32_t u = 0; u < config.users; ++u) {
      auto w = std::vector<uint32_t>(
          draws.begin() + size_t(u) * config.views_per_user,
          draws.begin() + size_t(u + 1) * config.views_per_user);
      std::sort(w.begin(), w.end());
      w.erase(std::unique(w.begin(), w.end()), w.end());
      total_updates += w.size() * (w.size() + 1) / 2;
      watch[u] = std::move(w);
    }

    const SketchParams params =
        derive_params(config.epsilon, config.delta,
                      DepthRule::count_items(total_updates), trial_seed);

    DenseCoViewCounts exact(config.programs);
    std::vector<SketchTable> sketches;
    sketches.reserve(config.users);
    stage("sketch", [&] {
      for (uint32_t u = 0; u < config.users; ++u) {
        exact.add_user(watch[u]);
        SketchTable s(SketchKind::kCountMin, params);
        for (size_t i = 0; i < watch[u].size(); ++i) {
          for (size_t j = i; j < watch[u].size(); ++j) {
            s.update(ItemKey::pair(watch[u][i], watch[u][j]), 1);
          }
        }
        sketches.push_back(std::move(s));
      }
      return 0;
    });

    Drbg dropout_rng(trial_seed, "privstats/dropout/v1");
    const SketchTable agg = stage("aggregate", [&] {
      return aggregate_population(config, sketches, params,
                                  SketchKind::kCountMin, trial, dropout_rng);
    });
    const SketchCoViewCounts est(agg, config.programs);

    // Average error over the most popular pair keys, normalized by the
    // total update mass.
    const double avg_top_error = stage("evaluate", [&] {
      struct PairCount {
        uint32_t a, b;
        double c;
      };
      std::vector<PairCount> pairs;
      for (uint32_t a = 0; a < config.programs; ++a) {
        for (uint32_t b = a; b < config.programs; ++b) {
          const double c = exact.count(a, b);
          if (c > 0) pairs.push_back({a, b, c});
        }
      }
      const size_t take = std::min<size_t>(config.eval_items, pairs.size());
      std::partial_sort(pairs.begin(), pairs.begin() + take, pairs.end(),
                        [](const PairCount& x, const PairCount& y) {
                          if (x.c != y.c) return x.c > y.c;
                          if (x.a != y.a) return x.a < y.a;
                          return x.b < y.b;
                        });
      double err = 0;
      for (size_t i = 0; i < take; ++i) {
        err += std::fabs(est.count(pairs[i].a, pairs[i].b) - pairs[i].c) /
               double(total_updates);
      }
      return take ? err / double(take) : 0.0;
    });

    // Neighbor-set agreement between the exact and sketch models for the 20
    // most watched programs.
    const double overlap = stage("model", [&] {
      std::vector<uint32_t> by_pop(config.programs);
      std::iota(by_pop.begin(), by_pop.end(), 0);
      std::sort(by_pop.begin(), by_pop.end(), [&](uint32_t x, uint32_t y) {
        if (exact.count(x, x) != exact.count(y, y)) {
          return exact.count(x, x) > exact.count(y, y);
        }
        return x < y;
      });
      const auto exact_model = build_model(exact, config.top_k);
      const auto est_model = build_model(est, config.top_k);
      const size_t heads = std::min<size_t>(20, config.programs);
      double acc = 0;
      for (size_t i = 0; i < heads; ++i) {
        std::set<uint32_t> a, b;
        for (const auto& nb : exact_model.neighbors[by_pop[i]]) {
          a.insert(nb.item);
        }
        for (const auto& nb : est_model.neighbors[by_pop[i]]) {
          b.insert(nb.item);
        }
        std::vector<uint32_t> both;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(both));
        std::vector<uint32_t> either;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                       std::back_inserter(either));
        acc += either.empty() ? 1.0
                              : double(both.size()) / double(either.size());
      }
      return heads ? acc / double(heads) : 1.0;
    });

    const auto bytes =
        bench_bytes(params, std::min<size_t>(config.users, config.group_size));
    report.payload_bytes_per_user = bytes.payload_bytes_per_user;
    report.key_bytes_per_user = bytes.key_bytes_per_user;
    report.per_trial_error.push_back(avg_top_error);
    overlaps.push_back(overlap);
    csv.row({std::to_string(trial), CsvBuilder::num(avg_top_error),
             CsvBuilder::num(overlap),
             std::to_string(bytes.payload_bytes_per_user),
             std::to_string(bytes.key_bytes_per_user)});
  }

  report.average_error = mean(report.per_trial_error);
  report.mae = report.average_error;
  report.csv = csv.text();
  return report;
}

ErrorReport run_location(const ExperimentConfig& config) {
  config.validate();
  ErrorReport report;
  CsvBuilder csv({"trial", "avg_slot_error", "ewma_mae_sketch",
                  "ewma_mae_exact"});
  for (uint32_t trial = 0; trial < config.trials; ++trial) {
    const uint64_t trial_seed = config.seed + trial;
    const auto logs = stage("generate", [&] {
      return gen_mobility(config.entities, config.grid_p, config.slots,
                          trial_seed);
    });
    const auto truth = grids_from_logs(logs, config.grid_p, config.slots);

    const SketchParams params =
        derive_params(config.epsilon, config.delta,
                      DepthRule::count_items(config.entities), trial_seed);

    Drbg dropout_rng(trial_seed, "privstats/dropout/v1");
    std::vector<HeatGrid> estimated;
    double slot_error_acc = 0;
    for (uint32_t s = 0; s < config.slots; ++s) {
      std::vector<SketchTable> sketches;
      sketches.reserve(config.entities);
      stage("sketch", [&] {
        for (const auto& log : logs) {
          SketchTable t(SketchKind::kCountMin, params);
          t.update(ItemKey::grid(log[s].row, log[s].col), 1);
          sketches.push_back(std::move(t));
        }
        return 0;
      });
      const SketchTable agg = stage("aggregate", [&] {
        return aggregate_population(config, sketches, params,
                                    SketchKind::kCountMin, s, dropout_rng);
      });
      HeatGrid grid(config.grid_p);
      for (uint32_t r = 0; r < config.grid_p; ++r) {
        for (uint32_t c = 0; c < config.grid_p; ++c) {
          const int64_t e = agg.estimate_cms(ItemKey::grid(r, c));
          grid.at(r, c) = e < 0 ? 0 : double(e);
        }
      }

      // Average error over the busiest cells, normalized by total mass.
      std::vector<size_t> order(truth[s].cells.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        if (truth[s].cells[x] != truth[s].cells[y]) {
          return truth[s].cells[x] > truth[s].cells[y];
        }
        return x < y;
      });
      const size_t take = std::min<size_t>(config.top_cells, order.size());
      double err = 0;
      for (size_t i = 0; i < take; ++i) {
        err += std::fabs(grid.cells[order[i]] - truth[s].cells[order[i]]) /
               double(config.entities);
      }
      slot_error_acc += err / double(take);
      estimated.push_back(std::move(grid));
    }

    const double avg_slot_error = slot_error_acc / double(config.slots);
    const double mae_sketch = stage("model", [&] {
      const std::vector<HeatGrid> past(estimated.begin(), estimated.end() - 1);
      return heatmap_mae(ewma_predict_grid(past, config.ewma_alpha),
                         truth.back(), config.top_cells);
    });
    const std::vector<HeatGrid> past_exact(truth.begin(), truth.end() - 1);
    const double mae_exact =
        heatmap_mae(ewma_predict_grid(past_exact, config.ewma_alpha),
                    truth.back(), config.top_cells);

    report.per_trial_error.push_back(avg_slot_error);
    csv.row({std::to_string(trial), CsvBuilder::num(avg_slot_error),
             CsvBuilder::num(mae_sketch), CsvBuilder::num(mae_exact)});
  }
  report.average_error = mean(report.per_trial_error);
  report.mae = report.average_error;
  report.csv = csv.text();
  return report;
}

ErrorReport run_median(const ExperimentConfig& config) {
  config.validate();
  ErrorReport report;
  CsvBuilder csv({"trial", "true_median", "estimate", "abs_err", "rel_err",
                  "iterations", "dp_epsilon"});

  const uint64_t n =
      uint64_t(config.reporters) * config.values_per_reporter;
  const MedianDomain base_domain{config.domain_lo, config.domain_hi, n};

  // Crypto context shared across trials; the dlog bound only depends on the
  // sketch depth, which is seed-independent.
  std::unique_ptr<ahe::Group> group;
  std::unique_ptr<ahe::DlogTable> table;
  if (config.crypto) {
    const SketchParams probe = derive_params(
        config.epsilon, config.delta, DepthRule::failure_only(), 0);
    group = std::make_unique<ahe::Group>();
    table = std::make_unique<ahe::DlogTable>(
        *group, config.plaintext_cap * int64_t(n) * probe.depth);
  }

  std::vector<double> abs_errs, rel_errs;
  for (uint32_t trial = 0; trial < config.trials; ++trial) {
    const uint64_t trial_seed = config.seed + trial;
    const auto values = stage("generate", [&] {
      const size_t n1 = size_t(std::llround(double(n) * 5.0 / 6.0));
      auto v = gen_mixture(trial_seed, n1, size_t(n) - n1);
      for (auto& x : v) {
        x = std::clamp(x, config.domain_lo, config.domain_hi - 1);
      }
      return v;
    });
    const int64_t truth = exact_median(values);

    const SketchParams params = derive_params(
        config.epsilon, config.delta, DepthRule::failure_only(), trial_seed);
    const DpConfig dp =
        config.dp_epsilon > 0
            ? DpConfig::with_epsilon(config.dp_epsilon, base_domain,
                                     params.depth)
            : DpConfig::disabled();

    std::vector<SketchTable> submissions;
    stage("sketch", [&] {
      for (uint32_t r = 0; r < config.reporters; ++r) {
        const std::vector<int64_t> chunk(
            values.begin() + size_t(r) * config.values_per_reporter,
            values.begin() + size_t(r + 1) * config.values_per_reporter);
        submissions.push_back(build_submission(chunk, base_domain, params));
      }
      return 0;
    });

    BisectionResult result;
    Drbg noise_rng(trial_seed, "privstats/dp-noise/v1");
    if (config.crypto) {
      result = stage("decrypt", [&] {
        Drbg crypto_rng(trial_seed, "privstats/ahe-rng/v1");
        std::vector<ahe::AuthorityKey> auths;
        std::vector<ahe::Point> pks;
        for (uint32_t i = 0; i < config.authorities; ++i) {
          auths.push_back(ahe::authority_keygen(*group, crypto_rng));
          pks.push_back(auths.back().public_key);
        }
        const ahe::Point pk = ahe::combine_public_keys(*group, pks);
        std::vector<ahe::EncryptedSketch> encrypted;
        for (const auto& s : submissions) {
          encrypted.push_back(ahe::encrypt_sketch(*group, pk, s, crypto_rng));
        }
        EncryptedRangeCounter counter(
            *group, ahe::aggregate_encrypted(*group, encrypted),
            std::move(auths), *table);
        return bisect_median(counter, base_domain, dp, &noise_rng);
      });
    } else {
      result = stage("aggregate", [&] {
        SketchTable agg = submissions[0];
        for (size_t i = 1; i < submissions.size(); ++i) {
          agg = merge(agg, submissions[i]);
        }
        SketchRangeCounter counter(std::move(agg));
        return bisect_median(counter, base_domain, dp, &noise_rng);
      });
    }

    const double abs_err = std::fabs(double(result.median - truth));
    const double rel_err = truth != 0 ? abs_err / std::fabs(double(truth))
                                      : abs_err;
    abs_errs.push_back(abs_err);
    rel_errs.push_back(rel_err);
    report.per_trial_error.push_back(rel_err);
    csv.row({std::to_string(trial), std::to_string(truth),
             std::to_string(result.median), CsvBuilder::num(abs_err),
             CsvBuilder::num(rel_err),
             std::to_string(result.transcript.size()),
             CsvBuilder::num(config.dp_epsilon)});
  }

  report.average_error = mean(rel_errs);
  report.mae = mean(abs_errs);
  {
    auto sorted = rel_errs;
    std::sort(sorted.begin(), sorted.end());
    report.relative_median_error = sorted[(sorted.size() - 1) / 2];
  }
  const SketchParams probe = derive_params(
      config.epsilon, config.delta, DepthRule::failure_only(), 0);
  report.payload_bytes_per_user = uint64_t(probe.depth) * probe.width * 4;
  report.csv = csv.text();
  return report;
}

ErrorReport run_scenario(const ExperimentConfig& config) {
  switch (config.scenario) {
    case Scenario::kRecommender:
      return run_recommender(config);
    case Scenario::kLocation:
      return run_location(config);
    case Scenario::kMedian:
      return run_median(config);
  }
  throw ParameterError("unknown scenario");
}

}  // namespace privstats
