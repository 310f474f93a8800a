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

#include <benchmark/benchmark.h>

#include "privstats/ahe.hpp"
#include "privstats/group_crypto.hpp"
#include "privstats/sketch.hpp"
#include "privstats/zerosum.hpp"

namespace {

using namespace privstats;

void BM_SketchUpdate(benchmark::State& state) {
  const auto params = derive_params(0.01, 0.01, DepthRule::count_items(245000));
  SketchTable t(SketchKind::kCountMin, params);
  uint32_t i = 0;
  for (auto _ : state) {
    t.update(ItemKey::pair(i, i + 1), 1);
    ++i;
  }
}
BENCHMARK(BM_SketchUpdate);

void BM_SketchEstimate(benchmark::State& state) {
  const auto params = derive_params(0.01, 0.01, DepthRule::count_items(245000));
  SketchTable t(SketchKind::kCountMin, params);
  for (uint32_t i = 0; i < 1000; ++i) t.update(ItemKey::pair(i, i + 1), 1);
  uint32_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t.estimate_cms(ItemKey::pair(i % 1000, i % 1000 + 1)));
    ++i;
  }
}
BENCHMARK(BM_SketchEstimate);

void BM_Mask32(benchmark::State& state) {
  const KeyPair a = keygen(1), b = keygen(2);
  const SharedPoint s = shared_point(a, b.public_key);
  uint32_t cell = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mask32(s, cell++, 7));
  }
}
BENCHMARK(BM_Mask32);

void BM_MaskStream(benchmark::State& state) {
  const KeyPair a = keygen(1), b = keygen(2);
  const SharedPoint s = shared_point(a, b.public_key);
  std::vector<uint32_t> out(4896);
  for (auto _ : state) {
    mask_stream(s, 7, uint32_t(out.size()), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(out.size()));
}
BENCHMARK(BM_MaskStream);

void BM_SharedPoint(benchmark::State& state) {
  const KeyPair a = keygen(1), b = keygen(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shared_point(a, b.public_key));
  }
}
BENCHMARK(BM_SharedPoint);

void BM_BlindingFactors(benchmark::State& state) {
  const size_t n = size_t(state.range(0));
  const size_t length = 4896;
  Roster roster;
  roster.group_id = "g.0";
  roster.round = 1;
  std::vector<KeyPair> keys;
  for (size_t i = 0; i < n; ++i) {
    keys.push_back(keygen(i));
    roster.members.push_back({"u." + std::to_string(i), keys[i].public_key});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        blinding_factors(keys[0], "u.0", roster, length));
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(n - 1) *
                          int64_t(length));
}
BENCHMARK(BM_BlindingFactors)->Arg(10)->Arg(100);

void BM_AheEncrypt(benchmark::State& state) {
  ahe::Group g;
  Drbg rng(1);
  const auto key = ahe::authority_keygen(g, rng);
  int64_t m = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ahe::encrypt(g, key.public_key, m++ % 100, rng));
  }
}
BENCHMARK(BM_AheEncrypt);

void BM_AheDecrypt(benchmark::State& state) {
  ahe::Group g;
  Drbg rng(1);
  const auto key = ahe::authority_keygen(g, rng);
  const ahe::DlogTable table(g, 1000);
  const auto ct = ahe::encrypt(g, key.public_key, 123, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ahe::decrypt(g, ct, key, table));
  }
}
BENCHMARK(BM_AheDecrypt);

}  // namespace

BENCHMARK_MAIN();
