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

#ifndef PRIVSTATS_GROUP_CRYPTO_HPP_
#define PRIVSTATS_GROUP_CRYPTO_HPP_

#include <array>
#include <cstdint>

namespace privstats {

// Diffie-Hellman layer for the zero-sum blinding protocol, instantiated over
// X25519. Public keys and shared points are the canonical 32-byte encodings,
// so masks are bit-exact across implementations.

using PublicKey = std::array<uint8_t, 32>;
using SharedPoint = std::array<uint8_t, 32>;

struct KeyPair {
  std::array<uint8_t, 32> private_key{};
  PublicKey public_key{};
};

// Deterministic key generation: the private key bytes are derived from the
// seed with a fixed domain-separated hash. Production callers should pass
// seeds drawn from a CSPRNG.
KeyPair keygen(uint64_t seed);

// Builds a key pair from existing private key bytes.
KeyPair keygen_from_private(const std::array<uint8_t, 32>& private_key);

// their_public^x. Symmetric: shared(A, B.pub) == shared(B, A.pub).
// Throws DecodeError for an invalid group element.
SharedPoint shared_point(const KeyPair& mine, const PublicKey& their_public);

// Encoding of the group generator (the X25519 base point), so
// shared_point(me, generator) == me.public_key.
PublicKey generator_encoding();

// Low 32 bits of SHA-256(shared || be32(cell) || be32(round)).
uint32_t mask32(const SharedPoint& shared, uint32_t cell, uint32_t round);

// mask32 for every cell in [0, length), hashed four lanes at a time.
// Bit-identical to calling mask32 per cell, at roughly twice the throughput.
void mask_stream(const SharedPoint& shared, uint32_t round, uint32_t length,
                 uint32_t* out);

}  // namespace privstats

#endif  // PRIVSTATS_GROUP_CRYPTO_HPP_
