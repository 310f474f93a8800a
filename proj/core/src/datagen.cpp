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

#include "privstats/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "privstats/common.hpp"

namespace privstats {

std::vector<uint32_t> gen_zipf(uint32_t num_items, size_t num_draws,
                               double exponent, uint64_t seed) {
  if (num_items == 0) throw ParameterError("zipf needs at least one item");
  if (!(exponent > 0)) throw ParameterError("zipf exponent must be > 0");
  std::vector<double> cdf(num_items);
  double acc = 0;
  for (uint32_t r = 0; r < num_items; ++r) {
    acc += std::pow(double(r + 1), -exponent);
    cdf[r] = acc;
  }
  Drbg rng(seed, "privstats/gen-zipf/v1");
  std::vector<uint32_t> draws(num_draws);
  for (auto& d : draws) {
    const double u = rng.uniform() * acc;
    d = uint32_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (d >= num_items) d = num_items - 1;
  }
  return draws;
}

double gen_normal(Drbg& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<int64_t> gen_mixture(uint64_t seed, size_t n_first,
                                 size_t n_second) {
  Drbg rng(seed, "privstats/gen-mixture/v1");
  std::vector<int64_t> out;
  out.reserve(n_first + n_second);
  const auto draw = [&](double mean, double variance) {
    const double v = mean + std::sqrt(variance) * gen_normal(rng);
    return std::clamp<int64_t>(std::llround(v), 0, 999);
  };
  for (size_t i = 0; i < n_first; ++i) out.push_back(draw(300, 25));
  for (size_t i = 0; i < n_second; ++i) out.push_back(draw(500, 200));
  return out;
}

std::vector<MobilityLog> gen_mobility(uint32_t num_entities, uint32_t p,
                                      uint32_t slots, uint64_t seed) {
  if (p < 2) throw ParameterError("mobility grid needs p >= 2");
  Drbg rng(seed, "privstats/gen-mobility/v1");
  std::vector<MobilityLog> logs(num_entities);
  for (auto& log : logs) {
    int64_t row = int64_t(rng.next_below(p));
    int64_t col = int64_t(rng.next_below(p));
    log.reserve(slots);
    for (uint32_t s = 0; s < slots; ++s) {
      // Daily envelope: between 1 and 5 walk steps depending on time of day.
      const double phase = 2.0 * M_PI * double(s % 24) / 24.0;
      const uint32_t steps = 1 + uint32_t(4.0 * 0.5 * (1.0 + std::sin(phase)));
      for (uint32_t k = 0; k < steps; ++k) {
        row += int64_t(rng.next_below(3)) - 1;
        col += int64_t(rng.next_below(3)) - 1;
        row = std::clamp<int64_t>(row, 0, p - 1);
        col = std::clamp<int64_t>(col, 0, p - 1);
      }
      log.push_back({s, uint32_t(row), uint32_t(col)});
    }
  }
  return logs;
}

std::vector<HeatGrid> grids_from_logs(const std::vector<MobilityLog>& logs,
                                      uint32_t p, uint32_t slots) {
  std::vector<HeatGrid> grids(slots, HeatGrid(p));
  for (const auto& log : logs) {
    for (const auto& pt : log) {
      if (pt.slot >= slots || pt.row >= p || pt.col >= p) {
        throw UsageError("mobility point outside the grid series");
      }
      grids[pt.slot].at(pt.row, pt.col) += 1;
    }
  }
  return grids;
}

}  // namespace privstats
