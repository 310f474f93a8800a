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

#include "privstats/group_crypto.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <memory>

#include "privstats/common.hpp"
#include "privstats/sha256_compact.hpp"

namespace privstats {
namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
  void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using CtxPtr = std::unique_ptr<EVP_PKEY_CTX, CtxDeleter>;

PkeyPtr load_private(const std::array<uint8_t, 32>& priv) {
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr,
                                           priv.data(), priv.size()));
  if (!key) throw DecodeError("failed to load X25519 private key");
  return key;
}

}  // namespace

KeyPair keygen_from_private(const std::array<uint8_t, 32>& private_key) {
  KeyPair kp;
  kp.private_key = private_key;
  PkeyPtr key = load_private(private_key);
  size_t len = kp.public_key.size();
  if (EVP_PKEY_get_raw_public_key(key.get(), kp.public_key.data(), &len) != 1 ||
      len != kp.public_key.size()) {
    throw DecodeError("failed to derive X25519 public key");
  }
  return kp;
}

KeyPair keygen(uint64_t seed) {
  static constexpr char kDomain[] = "privstats/x25519-keygen/v1";
  std::vector<uint8_t> msg(kDomain, kDomain + sizeof(kDomain) - 1);
  append_be64(msg, seed);
  std::array<uint8_t, 32> priv;
  sha256_short(msg.data(), msg.size(), priv.data());
  return keygen_from_private(priv);
}

SharedPoint shared_point(const KeyPair& mine, const PublicKey& their_public) {
  PkeyPtr me = load_private(mine.private_key);
  PkeyPtr peer(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr,
                                           their_public.data(),
                                           their_public.size()));
  if (!peer) throw DecodeError("invalid X25519 public key");
  CtxPtr ctx(EVP_PKEY_CTX_new(me.get(), nullptr));
  SharedPoint out;
  size_t len = out.size();
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1 ||
      EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    throw DecodeError("X25519 shared secret derivation failed");
  }
  return out;
}

PublicKey generator_encoding() {
  PublicKey g{};
  g[0] = 9;  // X25519 base point u-coordinate
  return g;
}

uint32_t mask32(const SharedPoint& shared, uint32_t cell, uint32_t round) {
  uint8_t msg[40];
  std::memcpy(msg, shared.data(), 32);
  msg[32] = static_cast<uint8_t>(cell >> 24);
  msg[33] = static_cast<uint8_t>(cell >> 16);
  msg[34] = static_cast<uint8_t>(cell >> 8);
  msg[35] = static_cast<uint8_t>(cell);
  msg[36] = static_cast<uint8_t>(round >> 24);
  msg[37] = static_cast<uint8_t>(round >> 16);
  msg[38] = static_cast<uint8_t>(round >> 8);
  msg[39] = static_cast<uint8_t>(round);
  uint8_t digest[32];
  sha256_short(msg, sizeof msg, digest);
  // Low 32 bits of the digest read as a big-endian integer.
  return (uint32_t(digest[28]) << 24) | (uint32_t(digest[29]) << 16) |
         (uint32_t(digest[30]) << 8) | uint32_t(digest[31]);
}

void mask_stream(const SharedPoint& shared, uint32_t round, uint32_t length,
                 uint32_t* out) {
  uint8_t msgs[4][40];
  const uint8_t* msg_ptrs[4] = {msgs[0], msgs[1], msgs[2], msgs[3]};
  for (auto& msg : msgs) {
    std::memcpy(msg, shared.data(), 32);
    msg[36] = static_cast<uint8_t>(round >> 24);
    msg[37] = static_cast<uint8_t>(round >> 16);
    msg[38] = static_cast<uint8_t>(round >> 8);
    msg[39] = static_cast<uint8_t>(round);
  }
  uint32_t cell = 0;
  for (; cell + 4 <= length; cell += 4) {
    for (uint32_t k = 0; k < 4; ++k) {
      const uint32_t c = cell + k;
      msgs[k][32] = static_cast<uint8_t>(c >> 24);
      msgs[k][33] = static_cast<uint8_t>(c >> 16);
      msgs[k][34] = static_cast<uint8_t>(c >> 8);
      msgs[k][35] = static_cast<uint8_t>(c);
    }
    uint8_t digests[4][32];
    sha256_short_x4(msg_ptrs, sizeof msgs[0], digests);
    for (uint32_t k = 0; k < 4; ++k) {
      out[cell + k] = (uint32_t(digests[k][28]) << 24) |
                      (uint32_t(digests[k][29]) << 16) |
                      (uint32_t(digests[k][30]) << 8) |
                      uint32_t(digests[k][31]);
    }
  }
  for (; cell < length; ++cell) {
    out[cell] = mask32(shared, cell, round);
  }
}

}  // namespace privstats
