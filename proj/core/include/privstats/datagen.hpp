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

#ifndef PRIVSTATS_DATAGEN_HPP_
#define PRIVSTATS_DATAGEN_HPP_

#include <cstdint>
#include <vector>

#include "privstats/analytics.hpp"
#include "privstats/rng.hpp"

namespace privstats {

// Synthetic workloads for the three reference applications. All generators
// are deterministic functions of their seed.

// num_draws item indexes in [0, num_items), rank r drawn with probability
// proportional to (r + 1)^(-exponent).
std::vector<uint32_t> gen_zipf(uint32_t num_items, size_t num_draws,
                               double exponent, uint64_t seed);

// Two-component normal mixture, rounded to integers and clipped to [0, 1000).
// Defaults give the 1,200-value reference workload: 1,000 draws from
// N(300, var 25) and 200 draws from N(500, var 200).
std::vector<int64_t> gen_mixture(uint64_t seed, size_t n_first = 1000,
                                 size_t n_second = 200);

struct MobilityPoint {
  uint32_t slot = 0;
  uint32_t row = 0;
  uint32_t col = 0;
};

// One entity's logged positions, one per slot.
using MobilityLog = std::vector<MobilityPoint>;

// Random walks on a p x p grid, one position logged per entity per slot.
// Walk speed follows a 24-slot daily envelope.
std::vector<MobilityLog> gen_mobility(uint32_t num_entities, uint32_t p,
                                      uint32_t slots, uint64_t seed);

// Exact per-slot occupancy grids for a set of logs.
std::vector<HeatGrid> grids_from_logs(const std::vector<MobilityLog>& logs,
                                      uint32_t p, uint32_t slots);

// Standard normal via Box-Muller on the deterministic stream.
double gen_normal(Drbg& rng);

}  // namespace privstats

#endif  // PRIVSTATS_DATAGEN_HPP_
