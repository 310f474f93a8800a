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

#ifndef PRIVSTATS_SKETCH_HPP_
#define PRIVSTATS_SKETCH_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "privstats/common.hpp"
#include "privstats/item_key.hpp"

namespace privstats {

enum class SketchKind : uint8_t { kCountMin = 0, kCount = 1 };

// Depth selection. CountItems(T) gives d = ceil(ln(T/delta)); FailureOnly
// gives d = ceil(ln(1/delta)). Count-Min applications use the former,
// Count Sketch applications the latter.
struct DepthRule {
  static DepthRule count_items(uint64_t total) { return DepthRule{total}; }
  static DepthRule failure_only() { return DepthRule{std::nullopt}; }

  std::optional<uint64_t> total_items;
};

struct SketchParams {
  double epsilon = 0;
  double delta = 0;
  uint32_t depth = 0;
  uint32_t width = 0;
  uint64_t seed = 0;

  friend bool operator==(const SketchParams&, const SketchParams&) = default;
};

// w = ceil(e / epsilon), d per the depth rule. Throws ParameterError for
// epsilon or delta outside (0, 1).
SketchParams derive_params(double epsilon, double delta, const DepthRule& rule,
                           uint64_t seed = 0);

// The d row hashes h_j(x) = ((a_j x + b_j) mod p) mod w, with a fixed prime
// p just above 2^31 and (a_j, b_j) drawn from a seeded deterministic stream.
class HashFamily {
 public:
  static constexpr uint64_t kPrime = 2147483659ULL;  // smallest prime > 2^31

  HashFamily(uint64_t seed, uint32_t depth, uint32_t width);

  uint32_t column(uint32_t row, const ItemKey& key) const {
    return column_of_hash(row, key.hash64());
  }
  uint32_t column_of_hash(uint32_t row, uint64_t key_hash) const {
    const uint64_t x = key_hash % kPrime;
    return static_cast<uint32_t>(((a_[row] * x + b_[row]) % kPrime) % width_);
  }

  uint32_t depth() const { return static_cast<uint32_t>(a_.size()); }
  uint32_t width() const { return width_; }
  uint64_t seed() const { return seed_; }
  uint64_t row_a(uint32_t row) const { return a_[row]; }
  uint64_t row_b(uint32_t row) const { return b_[row]; }

  friend bool operator==(const HashFamily&, const HashFamily&) = default;

 private:
  uint64_t seed_;
  uint32_t width_;
  std::vector<uint64_t> a_;
  std::vector<uint64_t> b_;
};

// The d x w counter table shared by Count-Min and Count Sketch. Cells are
// 64-bit signed; the zero-sum wire format truncates to 32-bit at encryption
// time. Count Sketch tables round the width up to even so the paired-column
// estimator is total.
class SketchTable {
 public:
  SketchTable(SketchKind kind, SketchParams params);

  SketchKind kind() const { return kind_; }
  const SketchParams& params() const { return params_; }
  const HashFamily& hashes() const { return hashes_; }
  uint32_t depth() const { return params_.depth; }
  uint32_t width() const { return params_.width; }
  size_t size() const { return cells_.size(); }  // L = d * w

  const std::vector<int64_t>& cells() const { return cells_; }
  int64_t cell(uint32_t row, uint32_t col) const {
    return cells_[size_t(row) * params_.width + col];
  }
  void set_flat_cell(size_t index, int64_t value) { cells_[index] = value; }

  // Adds `count` to one cell per row. Negative counts are allowed.
  void update(const ItemKey& key, int64_t count);

  // Count-Min point estimate: min over rows. Throws UsageError on a Count
  // table.
  int64_t estimate_cms(const ItemKey& key) const;

  // Count Sketch point estimate: lower median over rows of the paired-cell
  // differences. Throws UsageError on a Count-Min table.
  int64_t estimate_cs(const ItemKey& key) const;

  // Adjacent even/odd partner column for the Count Sketch estimator.
  static uint32_t paired_column(uint32_t col) {
    return (col % 2 == 0) ? col + 1 : col - 1;
  }

  bool mergeable_with(const SketchTable& other) const {
    return kind_ == other.kind_ && params_ == other.params_;
  }

  std::vector<uint8_t> serialize() const;
  static SketchTable deserialize(const std::vector<uint8_t>& data);

  friend bool operator==(const SketchTable&, const SketchTable&) = default;

 private:
  SketchKind kind_;
  SketchParams params_;
  HashFamily hashes_;
  std::vector<int64_t> cells_;
};

// Cell-wise sum. Throws MergeError unless kind, params, and hashes agree.
SketchTable merge(const SketchTable& a, const SketchTable& b);

// Integer coefficients phi of length L with
//   sum_l phi_l * cells_l = sum_{v in [lo,hi)} sum_rows (X[j,h] - X[j,h'])
// i.e. d times the summed per-row unbiased range estimate; the consumer
// divides by d. Count Sketch tables only.
std::vector<int64_t> range_coefficients(const SketchTable& table, int64_t lo,
                                        int64_t hi);

}  // namespace privstats

#endif  // PRIVSTATS_SKETCH_HPP_
