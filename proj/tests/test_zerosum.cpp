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

#include <set>
#include <string>
#include <vector>

#include "privstats/harness.hpp"
#include "privstats/zerosum.hpp"

namespace privstats {
namespace {

struct Fixture {
  Roster roster;
  std::vector<KeyPair> keys;
  SketchParams params;
  std::vector<SketchTable> sketches;

  Fixture(size_t n, uint32_t round, uint64_t seed) {
    params = derive_params(0.25, 0.25, DepthRule::failure_only(), seed);
    roster.group_id = "g.0";
    roster.round = round;
    for (size_t i = 0; i < n; ++i) {
      keys.push_back(keygen(seed * 1000 + i));
      roster.members.push_back({"u." + std::to_string(i), keys[i].public_key});
      SketchTable t(SketchKind::kCountMin, params);
      for (uint32_t v = 0; v < 5; ++v) {
        t.update(ItemKey::value(v * 7 + i), int64_t(i) + 1);
      }
      sketches.push_back(std::move(t));
    }
  }

  SketchTable plaintext_sum(const std::vector<bool>& online) const {
    SketchTable sum(SketchKind::kCountMin, params);
    for (size_t i = 0; i < sketches.size(); ++i) {
      if (online[i]) sum = merge(sum, sketches[i]);
    }
    return sum;
  }

  std::vector<BlindedSketch> blind_all() const {
    std::vector<BlindedSketch> out;
    for (size_t i = 0; i < keys.size(); ++i) {
      const auto f = blinding_factors(keys[i], roster.members[i].id, roster,
                                      sketches[i].size());
      out.push_back(
          encrypt_sketch(sketches[i], f, roster, roster.members[i].id));
    }
    return out;
  }
};

TEST_CASE("blinding factors cancel pairwise across the full roster") {
  for (size_t n : {2, 3, 7}) {
    Fixture fx(n, 1, n);
    const size_t length = fx.sketches[0].size();
    std::vector<uint32_t> total(length, 0);
    for (size_t i = 0; i < n; ++i) {
      const auto f =
          blinding_factors(fx.keys[i], fx.roster.members[i].id, fx.roster,
                           length);
      for (size_t l = 0; l < length; ++l) total[l] += f[l];
    }
    for (uint32_t v : total) CHECK(v == 0);
  }
}

TEST_CASE("two-party masks are exact negations") {
  Fixture fx(2, 3, 9);
  const size_t length = fx.sketches[0].size();
  const auto f0 = blinding_factors(fx.keys[0], "u.0", fx.roster, length);
  const auto f1 = blinding_factors(fx.keys[1], "u.1", fx.roster, length);
  for (size_t l = 0; l < length; ++l) {
    CHECK(f0[l] == uint32_t(-f1[l]));
  }
}

TEST_CASE("rounds produce unrelated masks") {
  Fixture a(2, 1, 5), b(2, 2, 5);
  const auto fa = blinding_factors(a.keys[0], "u.0", a.roster, 16);
  const auto fb = blinding_factors(b.keys[0], "u.0", b.roster, 16);
  CHECK(fa != fb);
}

TEST_CASE("aggregate of a full roster equals the plaintext merge") {
  for (size_t n : {2, 5}) {
    Fixture fx(n, 1, 20 + n);
    const auto agg = aggregate(fx.roster, fx.blind_all(),
                               SketchKind::kCountMin, fx.params);
    const auto truth = fx.plaintext_sum(std::vector<bool>(n, true));
    CHECK(agg.cells() == truth.cells());
  }
}

TEST_CASE("aggregate with a missing submission reports the online set") {
  Fixture fx(4, 1, 31);
  auto blinded = fx.blind_all();
  blinded.erase(blinded.begin() + 2);
  try {
    aggregate(fx.roster, blinded, SketchKind::kCountMin, fx.params);
    FAIL("expected IncompleteRound");
  } catch (const IncompleteRound& e) {
    CHECK(e.online() == std::vector<std::string>{"u.0", "u.1", "u.3"});
    CHECK(e.missing() == std::vector<std::string>{"u.2"});
  }
}

TEST_CASE("recovery is exact for every nonempty online subset") {
  const size_t n = 5;
  Fixture fx(n, 2, 47);
  const auto blinded = fx.blind_all();
  for (uint32_t subset = 1; subset < (1u << n); ++subset) {
    std::vector<bool> online(n);
    std::set<std::string> online_ids;
    for (size_t i = 0; i < n; ++i) {
      online[i] = (subset >> i) & 1;
      if (online[i]) online_ids.insert(fx.roster.members[i].id);
    }
    std::vector<BlindedSketch> submitted;
    std::vector<RecoveryShare> shares;
    for (size_t i = 0; i < n; ++i) {
      if (!online[i]) continue;
      submitted.push_back(blinded[i]);
      shares.push_back({fx.roster.members[i].id,
                        blinding_factors(fx.keys[i], fx.roster.members[i].id,
                                         fx.roster, fx.sketches[i].size(),
                                         online_ids)});
    }
    const auto rec =
        recover(fx.roster, submitted, shares, SketchKind::kCountMin, fx.params);
    CHECK(rec.cells() == fx.plaintext_sum(online).cells());
  }
}

TEST_CASE("a missing recovery share aborts with a second IncompleteRound") {
  Fixture fx(3, 1, 53);
  const auto blinded = fx.blind_all();
  const std::set<std::string> online_ids{"u.0", "u.1"};
  std::vector<BlindedSketch> submitted{blinded[0], blinded[1]};
  std::vector<RecoveryShare> shares{
      {"u.0", blinding_factors(fx.keys[0], "u.0", fx.roster,
                               fx.sketches[0].size(), online_ids)}};
  try {
    recover(fx.roster, submitted, shares, SketchKind::kCountMin, fx.params);
    FAIL("expected IncompleteRound");
  } catch (const IncompleteRound& e) {
    CHECK(e.online() == std::vector<std::string>{"u.0"});
    CHECK(e.missing() == std::vector<std::string>{"u.1"});
  }
}

TEST_CASE("all_blinding_factors matches the per-member path bit for bit") {
  Fixture fx(6, 4, 61);
  const size_t length = fx.sketches[0].size();
  const auto fast = all_blinding_factors(fx.keys, fx.roster, length);
  REQUIRE(fast.size() == 6);
  for (size_t i = 0; i < 6; ++i) {
    CHECK(fast[i] == blinding_factors(fx.keys[i], fx.roster.members[i].id,
                                      fx.roster, length));
  }
}

TEST_CASE("blinded sketch wire format round-trips") {
  Fixture fx(2, 1, 70);
  const auto blinded = fx.blind_all();
  const auto bytes = blinded[0].serialize();
  const auto back = BlindedSketch::deserialize(bytes);
  CHECK(back.group_id == blinded[0].group_id);
  CHECK(back.round == blinded[0].round);
  CHECK(back.user_id == blinded[0].user_id);
  CHECK(back.entries == blinded[0].entries);

  auto truncated = bytes;
  truncated.resize(truncated.size() - 3);
  CHECK_THROWS_AS(BlindedSketch::deserialize(truncated), DecodeError);
  auto corrupt = bytes;
  corrupt[0] ^= 0xff;
  CHECK_THROWS_AS(BlindedSketch::deserialize(corrupt), DecodeError);
}

TEST_CASE("recovery share wire format round-trips") {
  RecoveryShare s{"user.17", {1u, 0u, 0xffffffffu, 42u}};
  const auto bytes = s.serialize();
  const auto back = RecoveryShare::deserialize(bytes);
  CHECK(back.user_id == s.user_id);
  CHECK(back.entries == s.entries);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(RecoveryShare::deserialize(truncated), DecodeError);
}

TEST_CASE("partition_groups splits in order with stable ids") {
  std::vector<RosterEntry> users;
  for (size_t i = 0; i < 7; ++i) {
    users.push_back({"u." + std::to_string(i), keygen(i).public_key});
  }
  const auto groups = partition_groups(users, 3, 9, "pool");
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].group_id == "pool.0");
  CHECK(groups[2].group_id == "pool.2");
  CHECK(groups[0].members.size() == 3);
  CHECK(groups[2].members.size() == 1);
  CHECK(groups[1].members[0].id == "u.3");
  for (const auto& g : groups) CHECK(g.round == 9);
  CHECK_THROWS_AS(partition_groups(users, 1, 0), ParameterError);
}

TEST_CASE("position_of rejects unknown members") {
  Fixture fx(3, 1, 80);
  CHECK(fx.roster.position_of("u.2") == 2);
  CHECK_THROWS_AS(fx.roster.position_of("ghost"), ProtocolError);
}

}  // namespace
}  // namespace privstats
