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

#include "privstats/ahe.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>
#include <openssl/sha.h>

#include <cstring>
#include <string>
#include <utility>

#include "privstats/common.hpp"

namespace privstats::ahe {
namespace {

BN_CTX* bn_ctx() {
  thread_local struct Holder {
    BN_CTX* ctx = BN_CTX_new();
    ~Holder() { BN_CTX_free(ctx); }
  } holder;
  return holder.ctx;
}

void check_point(const Point& p) {
  if (!p.valid()) throw UsageError("uninitialized group element");
}

[[noreturn]] void fail(const char* what) {
  throw ProtocolError(std::string("EC operation failed: ") + what);
}

}  // namespace

Point::Point(const Point& other) : group_(other.group_) {
  if (other.pt_) {
    pt_ = EC_POINT_dup(other.pt_, other.group_);
    if (!pt_) fail("point dup");
  }
}

Point::Point(Point&& other) noexcept : group_(other.group_), pt_(other.pt_) {
  other.pt_ = nullptr;
}

Point& Point::operator=(Point other) noexcept {
  std::swap(group_, other.group_);
  std::swap(pt_, other.pt_);
  return *this;
}

Point::~Point() { EC_POINT_free(pt_); }

Scalar::Scalar() : bn_(BN_new()) {
  if (!bn_) fail("bn alloc");
  BN_zero(bn_);
}

Scalar::Scalar(uint64_t v) : Scalar() {
  if (BN_set_word(bn_, v) != 1) fail("bn set");
}

Scalar::Scalar(const Scalar& other) : bn_(BN_dup(other.bn_)) {
  if (!bn_) fail("bn dup");
}

Scalar::Scalar(Scalar&& other) noexcept : bn_(other.bn_) {
  other.bn_ = nullptr;
}

Scalar& Scalar::operator=(Scalar other) noexcept {
  std::swap(bn_, other.bn_);
  return *this;
}

Scalar::~Scalar() { BN_free(bn_); }

Group::Group() {
  group_ = EC_GROUP_new_by_curve_name(NID_secp224r1);
  if (!group_) fail("curve init");
  order_ = BN_new();
  if (!order_ || EC_GROUP_get_order(group_, order_, bn_ctx()) != 1) {
    fail("group order");
  }

  // Second generator by try-and-increment hashing to the curve. Nobody
  // learns log_g1(g2) because x-coordinates come from a fixed hash chain.
  BIGNUM* p = BN_new();
  BIGNUM* x = BN_new();
  EC_POINT* pt = EC_POINT_new(group_);
  if (!p || !x || !pt ||
      EC_GROUP_get_curve(group_, p, nullptr, nullptr, bn_ctx()) != 1) {
    fail("curve params");
  }
  static constexpr char kDomain[] = "privstats/ahe-g2/v1";
  for (uint32_t ctr = 0;; ++ctr) {
    uint8_t msg[sizeof kDomain - 1 + 4];
    std::memcpy(msg, kDomain, sizeof kDomain - 1);
    for (int i = 0; i < 4; ++i) {
      msg[sizeof kDomain - 1 + i] = uint8_t(ctr >> (24 - 8 * i));
    }
    uint8_t digest[32];
    SHA256(msg, sizeof msg, digest);
    if (!BN_bin2bn(digest, 28, x)) fail("bn convert");
    if (BN_cmp(x, p) >= 0) continue;
    if (EC_POINT_set_compressed_coordinates(group_, pt, x, 0, bn_ctx()) == 1 &&
        EC_POINT_is_at_infinity(group_, pt) != 1) {
      break;
    }
  }
  g2_ = Point(group_, pt);
  BN_free(p);
  BN_free(x);
}

Group::~Group() {
  BN_free(order_);
  EC_GROUP_free(group_);
}

Point Group::identity() const {
  EC_POINT* pt = EC_POINT_new(group_);
  if (!pt || EC_POINT_set_to_infinity(group_, pt) != 1) fail("identity");
  return Point(group_, pt);
}

Point Group::generator() const {
  EC_POINT* pt = EC_POINT_dup(EC_GROUP_get0_generator(group_), group_);
  if (!pt) fail("generator");
  return Point(group_, pt);
}

Point Group::add(const Point& p, const Point& q) const {
  check_point(p);
  check_point(q);
  EC_POINT* r = EC_POINT_new(group_);
  if (!r || EC_POINT_add(group_, r, p.raw(), q.raw(), bn_ctx()) != 1) {
    fail("add");
  }
  return Point(group_, r);
}

Point Group::neg(const Point& p) const {
  check_point(p);
  EC_POINT* r = EC_POINT_dup(p.raw(), group_);
  if (!r || EC_POINT_invert(group_, r, bn_ctx()) != 1) fail("invert");
  return Point(group_, r);
}

Point Group::sub(const Point& p, const Point& q) const {
  return add(p, neg(q));
}

Point Group::mul(const Point& p, const Scalar& k) const {
  check_point(p);
  EC_POINT* r = EC_POINT_new(group_);
  if (!r ||
      EC_POINT_mul(group_, r, nullptr, p.raw(), k.raw(), bn_ctx()) != 1) {
    fail("mul");
  }
  return Point(group_, r);
}

Point Group::mul_g1(const Scalar& k) const {
  EC_POINT* r = EC_POINT_new(group_);
  if (!r ||
      EC_POINT_mul(group_, r, k.raw(), nullptr, nullptr, bn_ctx()) != 1) {
    fail("base mul");
  }
  return Point(group_, r);
}

Point Group::mul_g2(int64_t m) const {
  Scalar k(m < 0 ? uint64_t(-(m + 1)) + 1 : uint64_t(m));
  if (m < 0) {
    if (BN_sub(k.raw(), order_, k.raw()) != 1) fail("scalar negate");
  }
  return mul(g2_, k);
}

bool Group::eq(const Point& p, const Point& q) const {
  check_point(p);
  check_point(q);
  const int c = EC_POINT_cmp(group_, p.raw(), q.raw(), bn_ctx());
  if (c < 0) fail("cmp");
  return c == 0;
}

bool Group::is_identity(const Point& p) const {
  check_point(p);
  return EC_POINT_is_at_infinity(group_, p.raw()) == 1;
}

std::vector<uint8_t> Group::encode(const Point& p) const {
  check_point(p);
  const size_t n = EC_POINT_point2oct(group_, p.raw(),
                                      POINT_CONVERSION_COMPRESSED, nullptr, 0,
                                      bn_ctx());
  if (n == 0) fail("encode");
  std::vector<uint8_t> out(n);
  if (EC_POINT_point2oct(group_, p.raw(), POINT_CONVERSION_COMPRESSED,
                         out.data(), out.size(), bn_ctx()) != n) {
    fail("encode");
  }
  return out;
}

Point Group::decode(const std::vector<uint8_t>& bytes) const {
  EC_POINT* pt = EC_POINT_new(group_);
  if (!pt) fail("alloc");
  if (EC_POINT_oct2point(group_, pt, bytes.data(), bytes.size(), bn_ctx()) !=
      1) {
    EC_POINT_free(pt);
    throw DecodeError("invalid point encoding");
  }
  return Point(group_, pt);
}

Scalar Group::random_scalar(Drbg& rng) const {
  // 16 extra bytes make the mod-q bias negligible.
  uint8_t buf[44];
  Scalar k;
  do {
    rng.fill(buf, sizeof buf);
    if (!BN_bin2bn(buf, sizeof buf, k.raw()) ||
        BN_mod(k.raw(), k.raw(), order_, bn_ctx()) != 1) {
      fail("scalar sample");
    }
  } while (BN_is_zero(k.raw()));
  return k;
}

Scalar Group::add_scalars(const Scalar& a, const Scalar& b) const {
  Scalar r;
  if (BN_mod_add(r.raw(), a.raw(), b.raw(), order_, bn_ctx()) != 1) {
    fail("scalar add");
  }
  return r;
}

AuthorityKey authority_keygen(const Group& g, Drbg& rng) {
  AuthorityKey key;
  key.secret = g.random_scalar(rng);
  key.public_key = g.mul_g1(key.secret);
  return key;
}

Point combine_public_keys(const Group& g, const std::vector<Point>& pks) {
  if (pks.empty()) throw UsageError("no authority keys to combine");
  Point pk = pks[0];
  for (size_t i = 1; i < pks.size(); ++i) pk = g.add(pk, pks[i]);
  return pk;
}

Ciphertext encrypt(const Group& g, const Point& pk, int64_t m, Drbg& rng) {
  check_point(pk);
  const Scalar r = g.random_scalar(rng);
  Ciphertext ct;
  ct.a = g.mul_g1(r);
  ct.b = g.add(g.mul(pk, r), g.mul_g2(m));
  return ct;
}

Ciphertext add_ciphertexts(const Group& g, const Ciphertext& x,
                           const Ciphertext& y) {
  return Ciphertext{g.add(x.a, y.a), g.add(x.b, y.b)};
}

Ciphertext homomorphic_combine(const Group& g,
                               const std::vector<Ciphertext>& cts,
                               const std::vector<int64_t>& coeffs) {
  if (cts.size() != coeffs.size()) {
    throw UsageError("ciphertext and coefficient lengths differ");
  }
  Ciphertext acc{g.identity(), g.identity()};
  for (size_t i = 0; i < cts.size(); ++i) {
    const int64_t c = coeffs[i];
    if (c == 0) continue;
    if (c == 1) {
      acc = add_ciphertexts(g, acc, cts[i]);
    } else if (c == -1) {
      acc.a = g.sub(acc.a, cts[i].a);
      acc.b = g.sub(acc.b, cts[i].b);
    } else {
      const Scalar k(c < 0 ? uint64_t(-(c + 1)) + 1 : uint64_t(c));
      Point pa = g.mul(cts[i].a, k);
      Point pb = g.mul(cts[i].b, k);
      if (c < 0) {
        pa = g.neg(pa);
        pb = g.neg(pb);
      }
      acc.a = g.add(acc.a, pa);
      acc.b = g.add(acc.b, pb);
    }
  }
  return acc;
}

Point partial_decrypt(const Group& g, const Ciphertext& ct,
                      const AuthorityKey& key) {
  return g.mul(ct.a, key.secret);
}

DlogTable::DlogTable(const Group& g, int64_t bound) : bound_(bound) {
  if (bound < 0) throw ParameterError("dlog table bound must be >= 0");
  by_encoding_.reserve(size_t(2 * bound + 1));
  Point p = g.mul_g2(-bound);
  const Point& step = g.g2();
  for (int64_t m = -bound;; ++m) {
    const auto enc = g.encode(p);
    by_encoding_.emplace(std::string(enc.begin(), enc.end()), m);
    if (m == bound) break;
    p = g.add(p, step);
  }
}

std::optional<int64_t> DlogTable::lookup(const Group& g,
                                         const Point& p) const {
  const auto enc = g.encode(p);
  const auto it = by_encoding_.find(std::string(enc.begin(), enc.end()));
  if (it == by_encoding_.end()) return std::nullopt;
  return it->second;
}

int64_t combine_and_decode(const Group& g, const Ciphertext& ct,
                           const std::vector<Point>& parts,
                           const DlogTable& table) {
  if (parts.empty()) throw UsageError("no decryption shares");
  Point mask = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) mask = g.add(mask, parts[i]);
  const Point m_point = g.sub(ct.b, mask);
  const auto m = table.lookup(g, m_point);
  if (!m) {
    throw DecodeFailure("plaintext outside dlog table bound " +
                        std::to_string(table.bound()));
  }
  return *m;
}

int64_t decrypt(const Group& g, const Ciphertext& ct, const AuthorityKey& key,
                const DlogTable& table) {
  return combine_and_decode(g, ct, {partial_decrypt(g, ct, key)}, table);
}

EncryptedSketch encrypt_sketch(const Group& g, const Point& pk,
                               const SketchTable& sketch, Drbg& rng) {
  EncryptedSketch out;
  out.kind = sketch.kind();
  out.params = sketch.params();
  out.cells.reserve(sketch.size());
  for (int64_t cell : sketch.cells()) {
    out.cells.push_back(encrypt(g, pk, cell, rng));
  }
  return out;
}

EncryptedSketch aggregate_encrypted(const Group& g,
                                    const std::vector<EncryptedSketch>& parts) {
  if (parts.empty()) throw UsageError("nothing to aggregate");
  EncryptedSketch out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (p.kind != out.kind || !(p.params == out.params) ||
        p.cells.size() != out.cells.size()) {
      throw MergeError("encrypted sketch metadata mismatch");
    }
    for (size_t l = 0; l < out.cells.size(); ++l) {
      out.cells[l] = add_ciphertexts(g, out.cells[l], p.cells[l]);
    }
  }
  return out;
}

size_t encrypted_sketch_bytes(const Group& g, const EncryptedSketch& s) {
  // Frame: magic(4) kind(1) depth(4) width(4) seed(8) cell count(4).
  size_t total = 25;
  for (const auto& ct : s.cells) {
    total += g.encode(ct.a).size() + g.encode(ct.b).size();
  }
  return total;
}

}  // namespace privstats::ahe
