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

#ifndef PRIVSTATS_RNG_HPP_
#define PRIVSTATS_RNG_HPP_

#include <array>
#include <cstdint>
#include <cstring>
#include <string_view>

namespace privstats {

// Deterministic byte stream: SHA-256 in counter mode over a seed-derived key.
// Every randomized operation in the library takes one of these so experiment
// runs are reproducible from a single seed.
class Drbg {
 public:
  explicit Drbg(uint64_t seed, std::string_view domain = "privstats/drbg/v1");

  void fill(uint8_t* out, size_t n);
  uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) without modulo bias; bound > 0.
  uint64_t next_below(uint64_t bound);

 private:
  void refill();

  std::array<uint8_t, 32> key_;
  std::array<uint8_t, 32> block_;
  uint64_t counter_ = 0;
  size_t avail_ = 0;
};

}  // namespace privstats

#endif  // PRIVSTATS_RNG_HPP_
