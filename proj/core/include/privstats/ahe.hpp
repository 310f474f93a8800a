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

#ifndef PRIVSTATS_AHE_HPP_
#define PRIVSTATS_AHE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "privstats/rng.hpp"
#include "privstats/sketch.hpp"

typedef struct ec_group_st EC_GROUP;
typedef struct ec_point_st EC_POINT;
typedef struct bignum_st BIGNUM;

namespace privstats::ahe {

// Additively homomorphic EC-ElGamal over NIST P-224 with two public
// generators: (A, B) = (g1^r, pk^r * g2^m). Component-wise point addition of
// ciphertexts adds plaintexts. Decryption recovers g2^m and finishes with a
// precomputed discrete-log table, so plaintexts must stay within its bound.

class Group;

// Value-semantic EC point tied to the curve of the Group that produced it.
class Point {
 public:
  Point() = default;
  Point(const Point& other);
  Point(Point&& other) noexcept;
  Point& operator=(Point other) noexcept;
  ~Point();

  bool valid() const { return pt_ != nullptr; }
  const EC_POINT* raw() const { return pt_; }

 private:
  friend class Group;
  Point(const EC_GROUP* group, EC_POINT* pt) : group_(group), pt_(pt) {}

  const EC_GROUP* group_ = nullptr;
  EC_POINT* pt_ = nullptr;
};

// Owned scalar mod the group order.
class Scalar {
 public:
  Scalar();
  explicit Scalar(uint64_t v);
  Scalar(const Scalar& other);
  Scalar(Scalar&& other) noexcept;
  Scalar& operator=(Scalar other) noexcept;
  ~Scalar();

  const BIGNUM* raw() const { return bn_; }
  BIGNUM* raw() { return bn_; }

 private:
  BIGNUM* bn_ = nullptr;
};

struct Ciphertext {
  Point a;  // g1^r
  Point b;  // pk^r * g2^m
};

struct AuthorityKey {
  Scalar secret;   // x_i
  Point public_key;  // g1^{x_i}
};

class Group {
 public:
  Group();
  ~Group();
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  const Point& g2() const { return g2_; }
  Point identity() const;
  Point generator() const;

  Point add(const Point& p, const Point& q) const;
  Point sub(const Point& p, const Point& q) const;
  Point neg(const Point& p) const;
  Point mul(const Point& p, const Scalar& k) const;
  Point mul_g1(const Scalar& k) const;
  // g2^m for signed m, reduced mod the group order.
  Point mul_g2(int64_t m) const;
  bool eq(const Point& p, const Point& q) const;
  bool is_identity(const Point& p) const;

  // Compressed SEC1 encoding (29 bytes for P-224; 1 byte for infinity).
  std::vector<uint8_t> encode(const Point& p) const;
  Point decode(const std::vector<uint8_t>& bytes) const;

  // Uniform nonzero scalar in [1, q).
  Scalar random_scalar(Drbg& rng) const;
  Scalar add_scalars(const Scalar& a, const Scalar& b) const;

  size_t compressed_point_bytes() const { return 29; }

 private:
  EC_GROUP* group_ = nullptr;
  BIGNUM* order_ = nullptr;
  Point g2_;
};

AuthorityKey authority_keygen(const Group& g, Drbg& rng);
Point combine_public_keys(const Group& g, const std::vector<Point>& pks);

Ciphertext encrypt(const Group& g, const Point& pk, int64_t m, Drbg& rng);
Ciphertext add_ciphertexts(const Group& g, const Ciphertext& x,
                           const Ciphertext& y);

// Encryption of sum coeffs[k] * m_k. Coefficients of +/-1 use plain point
// addition; larger magnitudes fall back to scalar multiplication.
Ciphertext homomorphic_combine(const Group& g,
                               const std::vector<Ciphertext>& cts,
                               const std::vector<int64_t>& coeffs);

// A^{x_i}, the authority's share of pk^r.
Point partial_decrypt(const Group& g, const Ciphertext& ct,
                      const AuthorityKey& key);

// g2^m -> m for m in [-bound, bound], keyed by compressed encoding.
class DlogTable {
 public:
  DlogTable(const Group& g, int64_t bound);

  int64_t bound() const { return bound_; }
  std::optional<int64_t> lookup(const Group& g, const Point& p) const;

 private:
  int64_t bound_;
  std::unordered_map<std::string, int64_t> by_encoding_;
};

// B * (product of parts)^{-1} = g2^m, then table lookup. Throws DecodeFailure
// when m is outside the table.
int64_t combine_and_decode(const Group& g, const Ciphertext& ct,
                           const std::vector<Point>& parts,
                           const DlogTable& table);

// Single-key convenience path, equivalent to one authority.
int64_t decrypt(const Group& g, const Ciphertext& ct, const AuthorityKey& key,
                const DlogTable& table);

struct EncryptedSketch {
  SketchKind kind = SketchKind::kCount;
  SketchParams params;
  std::vector<Ciphertext> cells;  // length d * w, row-major
};

// Cell-wise encryption of a plaintext sketch under the combined public key.
EncryptedSketch encrypt_sketch(const Group& g, const Point& pk,
                               const SketchTable& sketch, Drbg& rng);

// Cell-wise homomorphic sum; metadata must match. Throws MergeError.
EncryptedSketch aggregate_encrypted(const Group& g,
                                    const std::vector<EncryptedSketch>& parts);

// Serialized payload size in bytes of one encrypted sketch (framing included).
size_t encrypted_sketch_bytes(const Group& g, const EncryptedSketch& s);

}  // namespace privstats::ahe

#endif  // PRIVSTATS_AHE_HPP_
