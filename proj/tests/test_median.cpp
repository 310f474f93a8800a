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
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "privstats/datagen.hpp"
#include "privstats/median.hpp"

namespace privstats {
namespace {

TEST_CASE("xi is the bisection depth of the domain") {
  CHECK(MedianDomain{0, 1000, 1}.xi() == 10);
  CHECK(MedianDomain{0, 1024, 1}.xi() == 10);
  CHECK(MedianDomain{0, 1025, 1}.xi() == 11);
  CHECK(MedianDomain{0, 8, 1}.xi() == 3);
  CHECK(MedianDomain{0, 2, 1}.xi() == 1);
  CHECK(MedianDomain{0, 1, 1}.xi() == 0);
  CHECK(MedianDomain{-512, 512, 1}.xi() == 10);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS((MedianDomain{5, 5, 1}.validate()), ParameterError);
  CHECK_THROWS_AS((MedianDomain{10, 2, 1}.validate()), ParameterError);
  CHECK_THROWS_AS((MedianDomain{0, 10, 0}.validate()), ParameterError);
  CHECK_NOTHROW((MedianDomain{0, 10, 3}.validate()));
}

TEST_CASE("laplace scale follows xi * d / epsilon") {
  const MedianDomain domain{0, 1000, 100};
  const auto dp = DpConfig::with_epsilon(0.5, domain, 3);
  CHECK(dp.enabled);
  CHECK(dp.scale() == doctest::Approx(10 * 3 / 0.5));
  CHECK_THROWS_AS(DpConfig::with_epsilon(0, domain, 3), ParameterError);
  CHECK(DpConfig::disabled().enabled == false);
}

TEST_CASE("laplace moments match the target distribution") {
  const double scale = 7.0;
  const size_t n = 1000000;
  Drbg rng(12345);
  double sum = 0, sum_sq = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = laplace(scale, rng);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / double(n);
  const double var = sum_sq / double(n) - mean * mean;
  const double sigma = scale * std::sqrt(2.0);
  CHECK(std::abs(mean) < 5 * sigma / std::sqrt(double(n)));
  CHECK(var == doctest::Approx(2 * scale * scale).epsilon(0.05));
}

TEST_CASE("laplace draws are reproducible from the seed") {
  Drbg a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(laplace(3.0, a) == laplace(3.0, b));
}

TEST_CASE("exact_median is the lower median") {
  CHECK(exact_median({5}) == 5);
  CHECK(exact_median({3, 9}) == 3);
  CHECK(exact_median({9, 3, 7}) == 7);
  CHECK(exact_median({4, 1, 3, 2}) == 2);
  CHECK(exact_median({10, 10, 10, 10, 0}) == 10);
}

TEST_CASE("exact range counter counts half-open intervals") {
  ExactRangeCounter c({1, 3, 3, 7, 9});
  CHECK(c.count(0, 10) == 5);
  CHECK(c.count(3, 4) == 2);
  CHECK(c.count(4, 7) == 0);
  CHECK(c.count(7, 10) == 2);
}

void for_each_multiset(int64_t domain_size, size_t max_len, int64_t first,
                       std::vector<int64_t>& cur,
                       const std::function<void(const std::vector<int64_t>&)>&
                           fn) {
  if (!cur.empty()) fn(cur);
  if (cur.size() == max_len) return;
  for (int64_t v = first; v < domain_size; ++v) {
    cur.push_back(v);
    for_each_multiset(domain_size, max_len, v, cur, fn);
    cur.pop_back();
  }
}

TEST_CASE("exact-count bisection recovers the true median exhaustively") {
  size_t checked = 0;
  std::vector<int64_t> cur;
  for_each_multiset(8, 6, 0, cur, [&](const std::vector<int64_t>& values) {
    ExactRangeCounter counter(values);
    const MedianDomain domain{0, 8, values.size()};
    const auto res =
        bisect_median(counter, domain, DpConfig::disabled(), nullptr);
    REQUIRE(res.median == exact_median(values));
    REQUIRE(res.transcript.size() == domain.xi());
    ++checked;
  });
  CHECK(checked == 3002);
}

TEST_CASE("transcript records a consistent route") {
  ExactRangeCounter counter({100, 200, 300, 400, 401, 900});
  const MedianDomain domain{0, 1000, 6};
  const auto res =
      bisect_median(counter, domain, DpConfig::disabled(), nullptr);
  CHECK(res.median == 300);
  REQUIRE(res.transcript.size() == 10);
  int64_t lo = 0, hi = 1000;
  for (const auto& step : res.transcript) {
    CHECK(step.lo == lo);
    CHECK(step.hi == hi);
    CHECK(step.mid == lo + (hi - lo) / 2);
    CHECK(step.routed_count >= 0);
    CHECK(uint64_t(step.routed_count) <= step.remaining);
    if (step.went_left) {
      hi = step.mid;
    } else {
      lo = step.mid;
    }
  }
  CHECK(lo == res.median);
}

SketchTable aggregate_submissions(const std::vector<int64_t>& values,
                                  const MedianDomain& domain,
                                  const SketchParams& params,
                                  size_t reporters) {
  SketchTable agg(SketchKind::kCount, params);
  const size_t per = (values.size() + reporters - 1) / reporters;
  for (size_t start = 0; start < values.size(); start += per) {
    const size_t end = std::min(values.size(), start + per);
    std::vector<int64_t> chunk(values.begin() + start, values.begin() + end);
    agg = merge(agg, build_submission(chunk, domain, params));
  }
  return agg;
}

TEST_CASE("sketch bisection approximates the median of the mixture") {
  const auto values = gen_mixture(7);
  const MedianDomain domain{0, 1000, values.size()};
  const auto params = derive_params(0.05, 0.05, DepthRule::failure_only(), 7);
  auto agg = aggregate_submissions(values, domain, params, 60);
  SketchRangeCounter counter(std::move(agg));
  const auto res =
      bisect_median(counter, domain, DpConfig::disabled(), nullptr);
  CHECK(res.transcript.size() == 10);
  const int64_t truth = exact_median(values);
  CHECK(std::abs(double(res.median - truth)) <= 0.25 * double(truth));
}

TEST_CASE("encrypted and plaintext range counters agree exactly") {
  const std::vector<int64_t> values{2, 2, 3, 5, 8, 9, 9, 12, 14, 15};
  const MedianDomain domain{0, 16, values.size()};
  const auto params = derive_params(0.25, 0.25, DepthRule::failure_only(), 21);

  SketchRangeCounter plain(build_submission(values, domain, params));

  ahe::Group g;
  Drbg rng(21, "privstats/ahe-rng/v1");
  std::vector<ahe::AuthorityKey> authorities;
  std::vector<ahe::Point> pks;
  for (int i = 0; i < 3; ++i) {
    authorities.push_back(ahe::authority_keygen(g, rng));
    pks.push_back(authorities.back().public_key);
  }
  const auto pk = ahe::combine_public_keys(g, pks);
  const auto enc = submit(g, pk, values, domain, params, rng);
  const ahe::DlogTable table(g, 16 * 10 * int64_t(params.depth));
  EncryptedRangeCounter encrypted(g, enc, authorities, table);

  for (auto [lo, hi] : std::vector<std::pair<int64_t, int64_t>>{
           {0, 8}, {8, 16}, {0, 16}, {3, 5}, {9, 10}}) {
    CHECK(encrypted.count(lo, hi) == plain.count(lo, hi));
  }
  CHECK(encrypted.decryptions() == 5);
}

TEST_CASE("encrypted bisection matches the plaintext sketch route") {
  const auto all = gen_mixture(3, 50, 10);
  const MedianDomain domain{0, 1000, all.size()};
  const auto params = derive_params(0.25, 0.25, DepthRule::failure_only(), 3);

  SketchRangeCounter plain(build_submission(all, domain, params));
  ahe::Group g;
  Drbg rng(3, "privstats/ahe-rng/v1");
  const auto key = ahe::authority_keygen(g, rng);
  const auto enc = submit(g, key.public_key, all, domain, params, rng);
  const ahe::DlogTable table(g, 1000 * int64_t(params.depth));
  EncryptedRangeCounter encrypted(g, enc, {key}, table);

  const auto res_plain =
      bisect_median(plain, domain, DpConfig::disabled(), nullptr);
  const auto res_enc =
      bisect_median(encrypted, domain, DpConfig::disabled(), nullptr);
  CHECK(res_plain.median == res_enc.median);
  CHECK(encrypted.decryptions() == domain.xi());
}

TEST_CASE("DP noise is recorded and the route stays in bounds") {
  const auto values = gen_mixture(11);
  const MedianDomain domain{0, 1000, values.size()};
  const auto dp = DpConfig::with_epsilon(0.5, domain, 3);
  ExactRangeCounter counter(
      std::vector<int64_t>(values.begin(), values.end()));
  Drbg noise_rng(11, "privstats/dp-noise/v1");
  const auto res = bisect_median(counter, domain, dp, &noise_rng);
  REQUIRE(res.transcript.size() == 10);
  bool any_noise = false;
  for (const auto& step : res.transcript) {
    if (step.noise != 0) any_noise = true;
    CHECK(step.routed_count >= 0);
    CHECK(uint64_t(step.routed_count) <= step.remaining);
  }
  CHECK(any_noise);
  CHECK(res.median >= 0);
  CHECK(res.median < 1000);
}

TEST_CASE("degenerate inputs") {
  SUBCASE("single value") {
    ExactRangeCounter c({42});
    const auto res = bisect_median(c, MedianDomain{0, 1000, 1},
                                   DpConfig::disabled(), nullptr);
    CHECK(res.median == 42);
  }
  SUBCASE("all identical") {
    ExactRangeCounter c(std::vector<int64_t>(50, 777));
    const auto res = bisect_median(c, MedianDomain{0, 1000, 50},
                                   DpConfig::disabled(), nullptr);
    CHECK(res.median == 777);
  }
  SUBCASE("boundary values") {
    ExactRangeCounter c({0, 0, 999});
    const auto res = bisect_median(c, MedianDomain{0, 1000, 3},
                                   DpConfig::disabled(), nullptr);
    CHECK(res.median == 0);
  }
}

TEST_CASE("build_submission rejects out-of-domain values") {
  const MedianDomain domain{0, 16, 3};
  const auto params = derive_params(0.25, 0.25, DepthRule::failure_only(), 1);
  CHECK_THROWS_AS(build_submission({1, 16, 2}, domain, params),
                  ParameterError);
  CHECK_THROWS_AS(build_submission({-1}, domain, params), ParameterError);
  CHECK_NOTHROW(build_submission({0, 15}, domain, params));
}

TEST_CASE("mixture generator matches its contract") {
  const auto v = gen_mixture(5);
  REQUIRE(v.size() == 1200);
  for (int64_t x : v) {
    CHECK(x >= 0);
    CHECK(x < 1000);
  }
  size_t near_300 = 0;
  for (size_t i = 0; i < 1000; ++i) near_300 += std::abs(v[i] - 300) <= 25;
  CHECK(near_300 == 1000);
  CHECK(gen_mixture(5) == v);
  CHECK(gen_mixture(6) != v);
}

}  // namespace
}  // namespace privstats
