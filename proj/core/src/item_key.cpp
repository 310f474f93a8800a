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

#include "privstats/item_key.hpp"

#include <algorithm>

namespace privstats {
namespace {

void put_be32(std::string& s, uint32_t v) {
  s.push_back(static_cast<char>(v >> 24));
  s.push_back(static_cast<char>(v >> 16));
  s.push_back(static_cast<char>(v >> 8));
  s.push_back(static_cast<char>(v));
}

}  // namespace

ItemKey ItemKey::pair(uint32_t a, uint32_t b) {
  if (a > b) std::swap(a, b);
  std::string s;
  s.reserve(9);
  s.push_back('P');
  put_be32(s, a);
  put_be32(s, b);
  return ItemKey(std::move(s));
}

ItemKey ItemKey::grid(uint32_t row, uint32_t col) {
  std::string s;
  s.reserve(9);
  s.push_back('G');
  put_be32(s, row);
  put_be32(s, col);
  return ItemKey(std::move(s));
}

ItemKey ItemKey::value(uint64_t v) {
  std::string s;
  s.reserve(9);
  s.push_back('V');
  put_be32(s, static_cast<uint32_t>(v >> 32));
  put_be32(s, static_cast<uint32_t>(v));
  return ItemKey(std::move(s));
}

uint64_t ItemKey::hash64() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes_) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // FNV alone maps sequential encodings onto an arithmetic progression, and
  // the affine row hashes preserve that structure. The finalizer breaks it.
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

}  // namespace privstats
