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

#ifndef PRIVSTATS_ITEM_KEY_HPP_
#define PRIVSTATS_ITEM_KEY_HPP_

#include <cstdint>
#include <string>

namespace privstats {

// Opaque key for sketch updates and queries. The helpers provide the three
// structured encodings used across the applications:
//   pair(a, b)     -- order-normalized program pair, pair(a, b) == pair(b, a)
//   grid(row, col) -- location grid cell
//   value(v)       -- integer in a median domain
// Each category carries a distinct tag byte, so encodings never collide
// across categories.
class ItemKey {
 public:
  explicit ItemKey(std::string bytes) : bytes_(std::move(bytes)) {}

  static ItemKey pair(uint32_t a, uint32_t b);
  static ItemKey grid(uint32_t row, uint32_t col);
  static ItemKey value(uint64_t v);

  const std::string& bytes() const { return bytes_; }

  // 64-bit FNV-1a over the key bytes; feeds the (ax + b mod p) row hashes.
  uint64_t hash64() const;

  friend bool operator==(const ItemKey& x, const ItemKey& y) {
    return x.bytes_ == y.bytes_;
  }
  friend bool operator<(const ItemKey& x, const ItemKey& y) {
    return x.bytes_ < y.bytes_;
  }

 private:
  std::string bytes_;
};

}  // namespace privstats

#endif  // PRIVSTATS_ITEM_KEY_HPP_
