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

#include "privstats/rng.hpp"

#include <openssl/sha.h>

#include <vector>

#include "privstats/common.hpp"
#include "privstats/sha256_compact.hpp"

namespace privstats {

Drbg::Drbg(uint64_t seed, std::string_view domain) {
  std::vector<uint8_t> msg(domain.begin(), domain.end());
  append_be64(msg, seed);
  SHA256(msg.data(), msg.size(), key_.data());  // one-shot, not hot-path
}

void Drbg::refill() {
  uint8_t msg[40];
  std::memcpy(msg, key_.data(), 32);
  const uint64_t c = counter_++;
  for (int i = 0; i < 8; ++i) msg[32 + i] = uint8_t(c >> (56 - 8 * i));
  sha256_short(msg, sizeof msg, block_.data());
  avail_ = block_.size();
}

void Drbg::fill(uint8_t* out, size_t n) {
  while (n > 0) {
    if (avail_ == 0) refill();
    const size_t take = n < avail_ ? n : avail_;
    std::memcpy(out, block_.data() + (block_.size() - avail_), take);
    out += take;
    n -= take;
    avail_ -= take;
  }
}

uint64_t Drbg::next_u64() {
  uint8_t b[8];
  fill(b, sizeof b);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
  return v;
}

uint64_t Drbg::next_below(uint64_t bound) {
  // Rejection sampling over the largest multiple of bound below 2^64.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

}  // namespace privstats
