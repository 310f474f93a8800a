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

#include "privstats/sha256_compact.hpp"

#include <cassert>
#include <cstring>
#include <utility>

#if defined(PRIVSTATS_SHA_NI)
#include <immintrin.h>
#endif

namespace privstats {
namespace {

constexpr uint32_t kRoundConstants[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

#if defined(PRIVSTATS_SHA_NI)
// One-block SHA-256 compression over L independent lanes with the SHA
// extensions. The quartet schedule below is the standard SHA-NI flow with the
// per-quartet message expansion expressed once; interleaving the lanes inside
// each quartet hides the sha256rnds2 latency.
template <int L>
void transform_ni(uint32_t state[][8], const uint8_t data[][64]) {
  const __m128i MASK =
      _mm_set_epi64x(0x0c0d0e0f08090a0bULL, 0x0405060700010203ULL);

  __m128i s0[L], s1[L], m[4][L], save0[L], save1[L];

  for (int k = 0; k < L; ++k) {
    __m128i tmp =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(&state[k][0]));
    s1[k] = _mm_loadu_si128(reinterpret_cast<const __m128i*>(&state[k][4]));
    tmp = _mm_shuffle_epi32(tmp, 0xB1);
    s1[k] = _mm_shuffle_epi32(s1[k], 0x1B);
    s0[k] = _mm_alignr_epi8(tmp, s1[k], 8);
    s1[k] = _mm_blend_epi16(s1[k], tmp, 0xF0);
    save0[k] = s0[k];
    save1[k] = s1[k];
  }

  auto quartet = [&]<int Q>() {
    const __m128i kq = _mm_set_epi32(
        int(kRoundConstants[4 * Q + 3]), int(kRoundConstants[4 * Q + 2]),
        int(kRoundConstants[4 * Q + 1]), int(kRoundConstants[4 * Q + 0]));
    constexpr int cur = Q % 4, next = (Q + 1) % 4, prev = (Q + 3) % 4;
    for (int k = 0; k < L; ++k) {
      if constexpr (Q < 4) {
        m[cur][k] = _mm_shuffle_epi8(
            _mm_loadu_si128(
                reinterpret_cast<const __m128i*>(data[k] + 16 * Q)),
            MASK);
      }
      __m128i msg = _mm_add_epi32(m[cur][k], kq);
      s1[k] = _mm_sha256rnds2_epu32(s1[k], s0[k], msg);
      if constexpr (Q >= 3 && Q < 15) {
        const __m128i tmp = _mm_alignr_epi8(m[cur][k], m[prev][k], 4);
        m[next][k] = _mm_sha256msg2_epu32(_mm_add_epi32(m[next][k], tmp),
                                          m[cur][k]);
      }
      msg = _mm_shuffle_epi32(msg, 0x0E);
      s0[k] = _mm_sha256rnds2_epu32(s0[k], s1[k], msg);
      if constexpr (Q >= 1 && Q < 13) {
        m[prev][k] = _mm_sha256msg1_epu32(m[prev][k], m[cur][k]);
      }
    }
  };
  [&]<int... Qs>(std::integer_sequence<int, Qs...>) {
    (quartet.template operator()<Qs>(), ...);
  }(std::make_integer_sequence<int, 16>{});

  for (int k = 0; k < L; ++k) {
    s0[k] = _mm_add_epi32(s0[k], save0[k]);
    s1[k] = _mm_add_epi32(s1[k], save1[k]);
    const __m128i tmp = _mm_shuffle_epi32(s0[k], 0x1B);
    s1[k] = _mm_shuffle_epi32(s1[k], 0xB1);
    s0[k] = _mm_blend_epi16(tmp, s1[k], 0xF0);
    s1[k] = _mm_alignr_epi8(s1[k], tmp, 8);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(&state[k][0]), s0[k]);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(&state[k][4]), s1[k]);
  }
}

bool cpu_has_sha() {
  static const bool has = __builtin_cpu_supports("sha");
  return has;
}
#endif  // PRIVSTATS_SHA_NI

inline uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void transform_portable(uint32_t state[8], const uint8_t data[64]) {
  uint32_t w[64];
  for (int i = 0; i < 16; ++i) {
    w[i] = (uint32_t(data[4 * i]) << 24) | (uint32_t(data[4 * i + 1]) << 16) |
           (uint32_t(data[4 * i + 2]) << 8) | uint32_t(data[4 * i + 3]);
  }
  for (int i = 16; i < 64; ++i) {
    uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
    uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
    w[i] = w[i - 16] + s0 + w[i - 7] + s1;
  }
  uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
  uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
  for (int i = 0; i < 64; ++i) {
    uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
    uint32_t ch = (e & f) ^ (~e & g);
    uint32_t t1 = h + s1 + ch + kRoundConstants[i] + w[i];
    uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
    uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
    uint32_t t2 = s0 + maj;
    h = g; g = f; f = e; e = d + t1;
    d = c; c = b; b = a; a = t1 + t2;
  }
  state[0] += a; state[1] += b; state[2] += c; state[3] += d;
  state[4] += e; state[5] += f; state[6] += g; state[7] += h;
}

void pad_block(const uint8_t* msg, size_t len, uint8_t block[64]) {
  std::memset(block, 0, 64);
  std::memcpy(block, msg, len);
  block[len] = 0x80;
  const uint64_t bits = uint64_t(len) * 8;
  for (int i = 0; i < 8; ++i) {
    block[63 - i] = static_cast<uint8_t>(bits >> (8 * i));
  }
}

constexpr uint32_t kInitState[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372,
                                    0xa54ff53a, 0x510e527f, 0x9b05688c,
                                    0x1f83d9ab, 0x5be0cd19};

void digest_from_state(const uint32_t state[8], uint8_t out[32]) {
  for (int i = 0; i < 8; ++i) {
    out[4 * i + 0] = static_cast<uint8_t>(state[i] >> 24);
    out[4 * i + 1] = static_cast<uint8_t>(state[i] >> 16);
    out[4 * i + 2] = static_cast<uint8_t>(state[i] >> 8);
    out[4 * i + 3] = static_cast<uint8_t>(state[i]);
  }
}

}  // namespace

void sha256_short(const uint8_t* msg, size_t len, uint8_t out[32]) {
  assert(len <= 55);
  uint32_t state[1][8];
  std::memcpy(state[0], kInitState, sizeof kInitState);
  uint8_t block[1][64];
  pad_block(msg, len, block[0]);
#if defined(PRIVSTATS_SHA_NI)
  if (cpu_has_sha()) {
    transform_ni<1>(state, block);
  } else {
    transform_portable(state[0], block[0]);
  }
#else
  transform_portable(state[0], block[0]);
#endif
  digest_from_state(state[0], out);
}

void sha256_short_x4(const uint8_t* const msg[4], size_t len,
                     uint8_t out[4][32]) {
  assert(len <= 55);
  uint32_t state[4][8];
  uint8_t block[4][64];
  for (int k = 0; k < 4; ++k) {
    std::memcpy(state[k], kInitState, sizeof kInitState);
    pad_block(msg[k], len, block[k]);
  }
#if defined(PRIVSTATS_SHA_NI)
  if (cpu_has_sha()) {
    transform_ni<4>(state, block);
  } else {
    for (int k = 0; k < 4; ++k) transform_portable(state[k], block[k]);
  }
#else
  for (int k = 0; k < 4; ++k) transform_portable(state[k], block[k]);
#endif
  for (int k = 0; k < 4; ++k) digest_from_state(state[k], out[k]);
}

}  // namespace privstats
