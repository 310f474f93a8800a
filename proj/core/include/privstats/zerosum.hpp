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

#ifndef PRIVSTATS_ZEROSUM_HPP_
#define PRIVSTATS_ZEROSUM_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "privstats/group_crypto.hpp"
#include "privstats/sketch.hpp"

namespace privstats {

// User-side blinding, tally-side aggregation, and fault recovery for the
// zero-sum sketch aggregation protocol. All blinding arithmetic is mod 2^32;
// aggregate counts above 2^32 are out of contract.

struct RosterEntry {
  std::string id;
  PublicKey public_key{};
};

// The roster order is frozen for the round: the blinding sign for the pair
// (i, j) compares roster positions, not id values.
struct Roster {
  std::string group_id;
  uint32_t round = 0;
  std::vector<RosterEntry> members;

  // Throws ProtocolError if the id is not a member.
  size_t position_of(const std::string& id) const;
  std::vector<std::string> ids() const;
};

struct BlindedSketch {
  std::string group_id;
  uint32_t round = 0;
  std::string user_id;
  std::vector<uint32_t> entries;  // length L, cells + factors mod 2^32

  std::vector<uint8_t> serialize() const;
  static BlindedSketch deserialize(const std::vector<uint8_t>& data);
};

struct RecoveryShare {
  std::string user_id;
  std::vector<uint32_t> entries;  // length L

  std::vector<uint8_t> serialize() const;
  static RecoveryShare deserialize(const std::vector<uint8_t>& data);
};

// k_l = sum over peers j (j != me, j not excluded) of
//       mask32(shared(me, j), l, round) * (-1)^{pos(me) > pos(j)}  mod 2^32.
// With an empty exclude set this is the normal blinding vector; with
// exclude = U^on it is the recovery share of step (4).
std::vector<uint32_t> blinding_factors(const KeyPair& me,
                                       const std::string& my_id,
                                       const Roster& roster, size_t length,
                                       const std::set<std::string>& exclude = {});

// entries = (cells + factors) mod 2^32. Sketch cells are truncated to 32 bits.
BlindedSketch encrypt_sketch(const SketchTable& sketch,
                             const std::vector<uint32_t>& factors,
                             const Roster& roster, const std::string& user_id);

// Cell-wise sum mod 2^32 over one submission per roster member. Throws
// IncompleteRound (carrying the online set) when submissions are missing.
// The result is re-wrapped into a table with the given kind/params.
SketchTable aggregate(const Roster& roster,
                      const std::vector<BlindedSketch>& blinded,
                      SketchKind kind, const SketchParams& params);

// Fig-recovery path: C' = sum b - sum k' over the online set. Every online
// member must supply a share built with exclude = U^on; a missing share
// aborts with a second IncompleteRound.
SketchTable recover(const Roster& roster,
                    const std::vector<BlindedSketch>& blinded_online,
                    const std::vector<RecoveryShare>& shares, SketchKind kind,
                    const SketchParams& params);

// Deterministic partition into rosters of size <= group_size, in input order.
// Group ids are "<base_group_id>.<index>".
std::vector<Roster> partition_groups(const std::vector<RosterEntry>& users,
                                     size_t group_size, uint32_t round,
                                     const std::string& base_group_id = "g");

}  // namespace privstats

#endif  // PRIVSTATS_ZEROSUM_HPP_
