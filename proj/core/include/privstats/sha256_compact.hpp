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

#ifndef PRIVSTATS_SHA256_COMPACT_HPP_
#define PRIVSTATS_SHA256_COMPACT_HPP_

#include <cstddef>
#include <cstdint>

namespace privstats {

// SHA-256 for messages of at most 55 bytes (one padded block). Bit-identical
// to standard SHA-256; uses the SHA-NI instructions when the CPU has them.
// Mask derivation calls this tens of millions of times per round, which is
// why the general-purpose EVP interface is not used here.
void sha256_short(const uint8_t* msg, size_t len, uint8_t out[32]);

// Four independent messages of the same length in one pass. Output is
// identical to four sha256_short calls; interleaving the compressions hides
// the SHA instruction latency, which nearly doubles mask throughput.
void sha256_short_x4(const uint8_t* const msg[4], size_t len,
                     uint8_t out[4][32]);

}  // namespace privstats

#endif  // PRIVSTATS_SHA256_COMPACT_HPP_
