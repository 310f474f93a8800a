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

#include "privstats/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>

namespace privstats {

SketchParams derive_params(double epsilon, double delta, const DepthRule& rule,
                           uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("epsilon must be in (0,1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must be in (0,1)");
  }
  SketchParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.seed = seed;
  p.width = static_cast<uint32_t>(std::ceil(std::exp(1.0) / epsilon));
  double ratio;
  if (rule.total_items.has_value()) {
    if (*rule.total_items < 1) {
      throw ParameterError("item count must be >= 1");
    }
    ratio = static_cast<double>(*rule.total_items) / delta;
  } else {
    ratio = 1.0 / delta;
  }
  p.depth = static_cast<uint32_t>(std::ceil(std::log(ratio)));
  if (p.depth == 0) p.depth = 1;
  return p;
}

HashFamily::HashFamily(uint64_t seed, uint32_t depth, uint32_t width)
    : seed_(seed), width_(width) {
  // mt19937_64 output is fully specified, so identical seeds reproduce the
  // same coefficients everywhere.
  std::mt19937_64 rng(seed);
  a_.reserve(depth);
  b_.reserve(depth);
  for (uint32_t j = 0; j < depth; ++j) {
    a_.push_back(rng() % (kPrime - 1) + 1);  // a != 0 mod p
    b_.push_back(rng() % kPrime);
  }
}

SketchTable::SketchTable(SketchKind kind, SketchParams params)
    : kind_(kind),
      params_([&] {
        if (params.depth < 1) throw ParameterError("depth must be >= 1");
        if (params.width < 2) throw ParameterError("width must be >= 2");
        if (kind == SketchKind::kCount && params.width % 2 != 0) {
          params.width += 1;  // paired-column rule needs a partner column
        }
        return params;
      }()),
      hashes_(params_.seed, params_.depth, params_.width),
      cells_(size_t(params_.depth) * params_.width, 0) {}

void SketchTable::update(const ItemKey& key, int64_t count) {
  const uint64_t kh = key.hash64();
  for (uint32_t j = 0; j < params_.depth; ++j) {
    int64_t& cell = cells_[size_t(j) * params_.width +
                           hashes_.column_of_hash(j, kh)];
    int64_t next;
    if (__builtin_add_overflow(cell, count, &next)) {
      throw OverflowError("sketch cell overflow");
    }
    cell = next;
  }
}

int64_t SketchTable::estimate_cms(const ItemKey& key) const {
  if (kind_ != SketchKind::kCountMin) {
    throw UsageError("estimate_cms on a Count Sketch table");
  }
  const uint64_t kh = key.hash64();
  int64_t best = cells_[hashes_.column_of_hash(0, kh)];
  for (uint32_t j = 1; j < params_.depth; ++j) {
    best = std::min(best, cells_[size_t(j) * params_.width +
                                 hashes_.column_of_hash(j, kh)]);
  }
  return best;
}

int64_t SketchTable::estimate_cs(const ItemKey& key) const {
  if (kind_ != SketchKind::kCount) {
    throw UsageError("estimate_cs on a Count-Min table");
  }
  const uint64_t kh = key.hash64();
  std::vector<int64_t> row_estimates;
  row_estimates.reserve(params_.depth);
  for (uint32_t j = 0; j < params_.depth; ++j) {
    const uint32_t col = hashes_.column_of_hash(j, kh);
    const size_t base = size_t(j) * params_.width;
    row_estimates.push_back(cells_[base + col] -
                            cells_[base + paired_column(col)]);
  }
  // Lower median keeps the estimator integer-valued for even depth.
  std::sort(row_estimates.begin(), row_estimates.end());
  return row_estimates[(row_estimates.size() - 1) / 2];
}

SketchTable merge(const SketchTable& a, const SketchTable& b) {
  if (!a.mergeable_with(b)) {
    throw MergeError("sketches have different kind, params, or hashes");
  }
  SketchTable out = a;
  for (size_t i = 0; i < out.size(); ++i) {
    int64_t next;
    if (__builtin_add_overflow(a.cells()[i], b.cells()[i], &next)) {
      throw OverflowError("merge cell overflow");
    }
    out.set_flat_cell(i, next);
  }
  return out;
}

std::vector<int64_t> range_coefficients(const SketchTable& table, int64_t lo,
                                        int64_t hi) {
  if (table.kind() != SketchKind::kCount) {
    throw UsageError("range_coefficients on a Count-Min table");
  }
  if (lo < 0 || lo > hi) {
    throw ParameterError("invalid range");
  }
  std::vector<int64_t> phi(table.size(), 0);
  const uint32_t w = table.width();
  for (int64_t v = lo; v < hi; ++v) {
    const uint64_t kh = ItemKey::value(static_cast<uint64_t>(v)).hash64();
    for (uint32_t j = 0; j < table.depth(); ++j) {
      const uint32_t col = table.hashes().column_of_hash(j, kh);
      phi[size_t(j) * w + col] += 1;
      phi[size_t(j) * w + SketchTable::paired_column(col)] -= 1;
    }
  }
  return phi;
}

namespace {

void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64le(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_string16(std::vector<uint8_t>& out, const std::string& s) {
  out.push_back(static_cast<uint8_t>(s.size() & 0xff));
  out.push_back(static_cast<uint8_t>(s.size() >> 8));
  out.insert(out.end(), s.begin(), s.end());
}

class Reader {
 public:
  explicit Reader(const std::vector<uint8_t>& d) : d_(d) {}

  uint8_t u8() { return d_.at(pos_++); }
  uint32_t u32le() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(u8()) << (8 * i);
    return v;
  }
  uint64_t u64le() {
    uint64_t v = uint64_t(u32le());
    return v | (uint64_t(u32le()) << 32);
  }
  std::string string16() {
    size_t n = u8();
    n |= size_t(u8()) << 8;
    std::string s;
    for (size_t i = 0; i < n; ++i) s.push_back(static_cast<char>(u8()));
    return s;
  }

 private:
  const std::vector<uint8_t>& d_;
  size_t pos_ = 0;
};

std::string decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<uint8_t> SketchTable::serialize() const {
  std::vector<uint8_t> out;
  out.reserve(32 + cells_.size() * 8);
  out.insert(out.end(), {'P', 'S', 'K', 'T'});
  out.push_back(1);  // version
  out.push_back(static_cast<uint8_t>(kind_));
  put_u32le(out, params_.depth);
  put_u32le(out, params_.width);
  put_u64le(out, params_.seed);
  put_string16(out, decimal(params_.epsilon));
  put_string16(out, decimal(params_.delta));
  for (int64_t c : cells_) put_u64le(out, static_cast<uint64_t>(c));
  return out;
}

SketchTable SketchTable::deserialize(const std::vector<uint8_t>& data) {
  try {
    Reader r(data);
    if (r.u8() != 'P' || r.u8() != 'S' || r.u8() != 'K' || r.u8() != 'T') {
      throw DecodeError("bad sketch magic");
    }
    if (r.u8() != 1) throw DecodeError("unsupported sketch version");
    const auto kind = static_cast<SketchKind>(r.u8());
    SketchParams p;
    p.depth = r.u32le();
    p.width = r.u32le();
    p.seed = r.u64le();
    p.epsilon = std::strtod(r.string16().c_str(), nullptr);
    p.delta = std::strtod(r.string16().c_str(), nullptr);
    SketchTable t(kind, p);
    if (t.width() != p.width) {
      throw DecodeError("serialized Count Sketch width not even");
    }
    for (size_t i = 0; i < t.size(); ++i) {
      t.set_flat_cell(i, static_cast<int64_t>(r.u64le()));
    }
    return t;
  } catch (const std::out_of_range&) {
    throw DecodeError("truncated sketch payload");
  }
}

}  // namespace privstats
