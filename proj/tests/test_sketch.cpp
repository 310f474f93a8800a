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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "doctest.h"
#include "privstats/datagen.hpp"
#include "privstats/sketch.hpp"

using namespace privstats;

TEST_CASE("derive_params reproduces the reference parameter sets") {
  auto p = derive_params(0.01, 0.01, DepthRule::count_items(245000));
  CHECK(p.depth == 18);
  CHECK(p.width == 272);

  p = derive_params(0.01, 0.01, DepthRule::count_items(10000));
  CHECK(p.depth == 14);
  CHECK(p.width == 272);

  p = derive_params(0.05, 0.05, DepthRule::failure_only());
  CHECK(p.depth == 3);
  CHECK(p.width == 55);

  p = derive_params(0.25, 0.25, DepthRule::failure_only());
  CHECK(p.depth == 2);
  CHECK(p.width == 11);
}

TEST_CASE("derive_params rejects out-of-range inputs") {
  CHECK_THROWS_AS(derive_params(0, 0.1, DepthRule::failure_only()),
                  ParameterError);
  CHECK_THROWS_AS(derive_params(1, 0.1, DepthRule::failure_only()),
                  ParameterError);
  CHECK_THROWS_AS(derive_params(0.1, 0, DepthRule::failure_only()),
                  ParameterError);
  CHECK_THROWS_AS(derive_params(0.1, 1.5, DepthRule::failure_only()),
                  ParameterError);
  CHECK_THROWS_AS(derive_params(0.1, 0.1, DepthRule::count_items(0)),
                  ParameterError);
}

TEST_CASE("hash family modulus is the smallest prime above 2^31") {
  const uint64_t p = HashFamily::kPrime;
  CHECK(p > (uint64_t(1) << 31));
  for (uint64_t d = 2; d * d <= p; ++d) CHECK(p % d != 0);
  // No prime lies strictly between 2^31 and kPrime.
  for (uint64_t n = (uint64_t(1) << 31) + 1; n < p; ++n) {
    bool composite = false;
    for (uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        composite = true;
        break;
      }
    }
    CHECK(composite);
  }
}

TEST_CASE("hash family is deterministic and in range") {
  const HashFamily h1(42, 8, 272);
  const HashFamily h2(42, 8, 272);
  CHECK(h1 == h2);
  const HashFamily h3(43, 8, 272);
  CHECK(h1 != h3);
  for (uint32_t j = 0; j < 8; ++j) {
    CHECK(h1.row_a(j) >= 1);
    CHECK(h1.row_a(j) < HashFamily::kPrime);
    for (uint64_t key : {0ULL, 1ULL, 0xffffffffffffffffULL, 1234567ULL}) {
      CHECK(h1.column_of_hash(j, key) < 272);
    }
  }
}

TEST_CASE("count-min is exact for a lone item and never underestimates") {
  const auto params =
      derive_params(0.05, 0.05, DepthRule::count_items(1000), 7);
  SketchTable t(SketchKind::kCountMin, params);
  t.update(ItemKey::pair(3, 5), 41);
  CHECK(t.estimate_cms(ItemKey::pair(3, 5)) == 41);
  CHECK(t.estimate_cms(ItemKey::pair(5, 3)) == 41);  // order-normalized key

  SketchTable busy(SketchKind::kCountMin, params);
  std::map<uint32_t, int64_t> truth;
  const auto draws = gen_zipf(300, 1000, 1.0, 99);
  for (uint32_t d : draws) {
    busy.update(ItemKey::pair(d, d), 1);
    ++truth[d];
  }
  for (const auto& [item, c] : truth) {
    CHECK(busy.estimate_cms(ItemKey::pair(item, item)) >= c);
  }
}

TEST_CASE("count-min error bound holds with slack across seeds") {
  // Guarantee: est <= true + epsilon * stream mass, w.p. 1 - delta per item.
  // With depth from the CountItems rule the failure probability is far below
  // delta / T, so zero violations at double the bound are expected.
  const double eps = 0.05;
  const int64_t draws_per_seed = 2000;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const auto params = derive_params(
        eps, 0.05, DepthRule::count_items(uint64_t(draws_per_seed)), seed);
    SketchTable t(SketchKind::kCountMin, params);
    std::map<uint32_t, int64_t> truth;
    for (uint32_t d : gen_zipf(100, size_t(draws_per_seed), 1.0, seed)) {
      t.update(ItemKey::pair(d, d), 1);
      ++truth[d];
    }
    const int64_t budget =
        int64_t(2.0 * eps * double(draws_per_seed));  // 2x slack
    for (const auto& [item, c] : truth) {
      CHECK(t.estimate_cms(ItemKey::pair(item, item)) <= c + budget);
    }
  }
}

TEST_CASE("count sketch row estimator matches a hand-computed fixture") {
  SketchParams params;
  params.epsilon = 0.5;
  params.delta = 0.5;
  params.depth = 3;
  params.width = 6;
  params.seed = 11;
  SketchTable t(SketchKind::kCount, params);
  const ItemKey key = ItemKey::value(123);
  const uint64_t kh = key.hash64();

  // Arbitrary cell contents; the estimate must be the lower median of the
  // per-row paired differences.
  const std::vector<int64_t> cells = {5,  -2, 7, 0,  3, 9,   //
                                      1,  1,  4, -6, 2, 2,   //
                                      -3, 8,  0, 5,  6, -1};
  for (size_t i = 0; i < cells.size(); ++i) t.set_flat_cell(i, cells[i]);

  std::vector<int64_t> rows;
  for (uint32_t j = 0; j < 3; ++j) {
    const uint32_t col = t.hashes().column_of_hash(j, kh);
    const uint32_t pair = (col % 2 == 0) ? col + 1 : col - 1;
    rows.push_back(cells[j * 6 + col] - cells[j * 6 + pair]);
  }
  std::sort(rows.begin(), rows.end());
  CHECK(t.estimate_cs(key) == rows[1]);
}

TEST_CASE("count sketch lower median convention for even depth") {
  SketchParams params;
  params.epsilon = 0.5;
  params.delta = 0.5;
  params.depth = 2;
  params.width = 4;
  params.seed = 3;
  SketchTable t(SketchKind::kCount, params);
  const ItemKey key = ItemKey::value(7);
  const uint64_t kh = key.hash64();
  // Force row estimates {10, 20}; lower median must pick 10.
  for (uint32_t j = 0; j < 2; ++j) {
    const uint32_t col = t.hashes().column_of_hash(j, kh);
    t.set_flat_cell(j * 4 + col, j == 0 ? 10 : 20);
  }
  const auto e = t.estimate_cs(key);
  CHECK(e == 10);
}

TEST_CASE("count sketch is exact for a lone item") {
  const auto params = derive_params(0.05, 0.05, DepthRule::failure_only(), 5);
  SketchTable t(SketchKind::kCount, params);
  t.update(ItemKey::value(321), 17);
  CHECK(t.estimate_cs(ItemKey::value(321)) == 17);
}

TEST_CASE("count sketch tables round odd widths up to even") {
  const auto params = derive_params(0.05, 0.05, DepthRule::failure_only());
  CHECK(params.width == 55);
  const SketchTable t(SketchKind::kCount, params);
  CHECK(t.width() == 56);
  CHECK(t.size() == 3 * 56);
  const SketchTable cms(SketchKind::kCountMin, params);
  CHECK(cms.width() == 55);  // only the paired estimator needs evenness
}

TEST_CASE("paired columns are adjacent even-odd partners") {
  CHECK(SketchTable::paired_column(0) == 1);
  CHECK(SketchTable::paired_column(1) == 0);
  CHECK(SketchTable::paired_column(2) == 3);
  CHECK(SketchTable::paired_column(3) == 2);
  CHECK(SketchTable::paired_column(54) == 55);
}

TEST_CASE("estimators reject the wrong sketch kind") {
  const auto params = derive_params(0.25, 0.25, DepthRule::failure_only());
  const SketchTable cms(SketchKind::kCountMin, params);
  const SketchTable cs(SketchKind::kCount, params);
  CHECK_THROWS_AS(cms.estimate_cs(ItemKey::value(1)), UsageError);
  CHECK_THROWS_AS(cs.estimate_cms(ItemKey::value(1)), UsageError);
}

TEST_CASE("merge is cell-wise addition and demands identical shape") {
  const auto params = derive_params(0.1, 0.1, DepthRule::count_items(100), 2);
  SketchTable a(SketchKind::kCountMin, params);
  SketchTable b(SketchKind::kCountMin, params);
  for (uint32_t i = 0; i < 50; ++i) {
    a.update(ItemKey::pair(i, i + 1), int64_t(i));
    b.update(ItemKey::pair(i / 2, i), 3);
  }
  const SketchTable m = merge(a, b);
  for (size_t i = 0; i < m.size(); ++i) {
    CHECK(m.cells()[i] == a.cells()[i] + b.cells()[i]);
  }

  const auto other = derive_params(0.1, 0.1, DepthRule::count_items(100), 3);
  const SketchTable c(SketchKind::kCountMin, other);
  CHECK_THROWS_AS(merge(a, c), MergeError);
  const SketchTable d(SketchKind::kCount, params);
  CHECK_THROWS_AS(merge(a, d), MergeError);
}

TEST_CASE("update and merge detect 64-bit overflow") {
  const auto params = derive_params(0.25, 0.25, DepthRule::failure_only(), 1);
  SketchTable t(SketchKind::kCountMin, params);
  t.update(ItemKey::value(9), INT64_MAX);
  CHECK_THROWS_AS(t.update(ItemKey::value(9), INT64_MAX), OverflowError);
  SketchTable u(SketchKind::kCountMin, params);
  u.update(ItemKey::value(9), INT64_MAX);
  CHECK_THROWS_AS(merge(t, u), OverflowError);
}

TEST_CASE("range coefficients reproduce the summed per-row estimates") {
  const auto params = derive_params(0.05, 0.05, DepthRule::failure_only(), 17);
  SketchTable t(SketchKind::kCount, params);
  for (uint32_t v = 0; v < 64; ++v) {
    t.update(ItemKey::value(v % 16), 1 + int64_t(v % 5));
  }

  for (auto [lo, hi] : std::vector<std::pair<int64_t, int64_t>>{
           {0, 16}, {3, 9}, {0, 0}, {5, 5}, {10, 16}}) {
    const auto phi = range_coefficients(t, lo, hi);
    REQUIRE(phi.size() == t.size());
    int64_t via_phi = 0;
    for (size_t l = 0; l < phi.size(); ++l) via_phi += phi[l] * t.cells()[l];

    // Independent oracle: accumulate X[j, h_j(v)] - X[j, partner] directly.
    int64_t direct = 0;
    for (int64_t v = lo; v < hi; ++v) {
      const uint64_t kh = ItemKey::value(uint64_t(v)).hash64();
      for (uint32_t j = 0; j < t.depth(); ++j) {
        const uint32_t col = t.hashes().column_of_hash(j, kh);
        const uint32_t partner = (col % 2 == 0) ? col + 1 : col - 1;
        direct += t.cell(j, col) - t.cell(j, partner);
      }
    }
    CHECK(via_phi == direct);
  }

  const SketchTable cms(SketchKind::kCountMin, params);
  CHECK_THROWS_AS(range_coefficients(cms, 0, 4), UsageError);
  CHECK_THROWS_AS(range_coefficients(t, 4, 2), ParameterError);
}

TEST_CASE("range coefficients are additive over adjacent ranges") {
  const auto params = derive_params(0.05, 0.05, DepthRule::failure_only(), 19);
  const SketchTable t(SketchKind::kCount, params);
  for (auto [lo, mid, hi] : std::vector<std::array<int64_t, 3>>{
           {0, 4, 9}, {0, 500, 1000}, {7, 7, 12}}) {
    const auto left = range_coefficients(t, lo, mid);
    const auto right = range_coefficients(t, mid, hi);
    const auto whole = range_coefficients(t, lo, hi);
    REQUIRE(left.size() == whole.size());
    for (size_t l = 0; l < whole.size(); ++l) {
      REQUIRE(whole[l] == left[l] + right[l]);
    }
  }
}

TEST_CASE("range estimate tracks the true range count") {
  const auto params = derive_params(0.05, 0.05, DepthRule::failure_only(), 23);
  SketchTable t(SketchKind::kCount, params);
  const auto values = gen_mixture(23, 200, 40);
  for (int64_t v : values) t.update(ItemKey::value(uint64_t(v)), 1);

  const int64_t lo = 250, hi = 350;
  const int64_t truth = std::count_if(values.begin(), values.end(),
                                      [&](int64_t v) { return v >= lo && v < hi; });
  const auto phi = range_coefficients(t, lo, hi);
  double est = 0;
  for (size_t l = 0; l < phi.size(); ++l) {
    est += double(phi[l]) * double(t.cells()[l]);
  }
  est /= t.depth();
  // Unbiased estimator; tolerance is loose since this is a single draw.
  CHECK(std::abs(est - double(truth)) < 0.5 * double(values.size()));
}

TEST_CASE("serialization round-trips and rejects corrupt payloads") {
  const auto params = derive_params(0.05, 0.05, DepthRule::failure_only(), 77);
  SketchTable t(SketchKind::kCount, params);
  for (uint32_t v = 0; v < 40; ++v) t.update(ItemKey::value(v), int64_t(v) - 7);

  auto bytes = t.serialize();
  const SketchTable back = SketchTable::deserialize(bytes);
  CHECK(back == t);
  CHECK(back.params() == t.params());
  CHECK(back.estimate_cs(ItemKey::value(5)) == t.estimate_cs(ItemKey::value(5)));

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(SketchTable::deserialize(bad_magic), DecodeError);

  auto truncated = bytes;
  truncated.resize(truncated.size() / 2);
  CHECK_THROWS_AS(SketchTable::deserialize(truncated), DecodeError);
}
