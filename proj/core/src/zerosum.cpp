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

#include "privstats/zerosum.hpp"

#include <algorithm>
#include <unordered_map>

namespace privstats {

size_t Roster::position_of(const std::string& id) const {
  for (size_t i = 0; i < members.size(); ++i) {
    if (members[i].id == id) return i;
  }
  throw ProtocolError("id '" + id + "' is not in the roster");
}

std::vector<std::string> Roster::ids() const {
  std::vector<std::string> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.id);
  return out;
}

std::vector<uint32_t> blinding_factors(const KeyPair& me,
                                       const std::string& my_id,
                                       const Roster& roster, size_t length,
                                       const std::set<std::string>& exclude) {
  const size_t my_pos = roster.position_of(my_id);
  if (roster.members[my_pos].public_key != me.public_key) {
    throw ProtocolError("key pair does not match the roster entry");
  }
  std::vector<uint32_t> factors(length, 0);
  std::vector<uint32_t> masks(length);
  for (size_t j = 0; j < roster.members.size(); ++j) {
    if (j == my_pos) continue;
    if (exclude.count(roster.members[j].id)) continue;
    const SharedPoint shared = shared_point(me, roster.members[j].public_key);
    mask_stream(shared, roster.round, static_cast<uint32_t>(length),
                masks.data());
    if (my_pos > j) {
      for (size_t l = 0; l < length; ++l) factors[l] -= masks[l];
    } else {
      for (size_t l = 0; l < length; ++l) factors[l] += masks[l];
    }
  }
  return factors;
}

BlindedSketch encrypt_sketch(const SketchTable& sketch,
                             const std::vector<uint32_t>& factors,
                             const Roster& roster, const std::string& user_id) {
  if (factors.size() != sketch.size()) {
    throw ProtocolError("blinding factor length does not match sketch size");
  }
  BlindedSketch out;
  out.group_id = roster.group_id;
  out.round = roster.round;
  out.user_id = user_id;
  out.entries.resize(sketch.size());
  for (size_t l = 0; l < sketch.size(); ++l) {
    out.entries[l] =
        static_cast<uint32_t>(sketch.cells()[l]) + factors[l];  // mod 2^32
  }
  return out;
}

namespace {

// Shared submission bookkeeping for aggregate() and recover().
std::unordered_map<std::string, const BlindedSketch*> index_submissions(
    const Roster& roster, const std::vector<BlindedSketch>& blinded,
    size_t expected_length) {
  std::unordered_map<std::string, const BlindedSketch*> by_id;
  for (const auto& b : blinded) {
    if (b.group_id != roster.group_id || b.round != roster.round) {
      throw ProtocolError("submission from a different group or round");
    }
    if (b.entries.size() != expected_length) {
      throw ProtocolError("submission length does not match sketch size");
    }
    roster.position_of(b.user_id);  // membership check
    if (!by_id.emplace(b.user_id, &b).second) {
      throw ProtocolError("duplicate submission from '" + b.user_id + "'");
    }
  }
  return by_id;
}

SketchTable wrap_cells(SketchKind kind, const SketchParams& params,
                       const std::vector<uint32_t>& sums) {
  SketchTable out(kind, params);
  for (size_t l = 0; l < sums.size(); ++l) {
    out.set_flat_cell(l, static_cast<int64_t>(sums[l]));
  }
  return out;
}

}  // namespace

SketchTable aggregate(const Roster& roster,
                      const std::vector<BlindedSketch>& blinded,
                      SketchKind kind, const SketchParams& params) {
  const SketchTable shape(kind, params);
  const auto by_id = index_submissions(roster, blinded, shape.size());

  std::vector<std::string> online, missing;
  for (const auto& m : roster.members) {
    (by_id.count(m.id) ? online : missing).push_back(m.id);
  }
  if (!missing.empty()) {
    throw IncompleteRound(std::move(online), std::move(missing));
  }

  std::vector<uint32_t> sums(shape.size(), 0);
  for (const auto& b : blinded) {
    for (size_t l = 0; l < sums.size(); ++l) sums[l] += b.entries[l];
  }
  return wrap_cells(kind, params, sums);
}

SketchTable recover(const Roster& roster,
                    const std::vector<BlindedSketch>& blinded_online,
                    const std::vector<RecoveryShare>& shares, SketchKind kind,
                    const SketchParams& params) {
  const SketchTable shape(kind, params);
  const auto by_id = index_submissions(roster, blinded_online, shape.size());

  std::unordered_map<std::string, const RecoveryShare*> share_by_id;
  for (const auto& s : shares) {
    if (s.entries.size() != shape.size()) {
      throw ProtocolError("recovery share length does not match sketch size");
    }
    if (!by_id.count(s.user_id)) {
      throw ProtocolError("recovery share from a non-submitting user");
    }
    if (!share_by_id.emplace(s.user_id, &s).second) {
      throw ProtocolError("duplicate recovery share from '" + s.user_id + "'");
    }
  }

  // A dropout during recovery aborts the round instead of recursing.
  std::vector<std::string> with_share, without_share;
  for (const auto& [id, unused] : by_id) {
    (void)unused;
    (share_by_id.count(id) ? with_share : without_share).push_back(id);
  }
  if (!without_share.empty()) {
    std::sort(with_share.begin(), with_share.end());
    std::sort(without_share.begin(), without_share.end());
    throw IncompleteRound(std::move(with_share), std::move(without_share));
  }

  std::vector<uint32_t> sums(shape.size(), 0);
  for (const auto& b : blinded_online) {
    for (size_t l = 0; l < sums.size(); ++l) sums[l] += b.entries[l];
  }
  for (const auto& s : shares) {
    for (size_t l = 0; l < sums.size(); ++l) sums[l] -= s.entries[l];
  }
  return wrap_cells(kind, params, sums);
}

std::vector<Roster> partition_groups(const std::vector<RosterEntry>& users,
                                     size_t group_size, uint32_t round,
                                     const std::string& base_group_id) {
  if (group_size < 2) throw ParameterError("group size must be >= 2");
  std::vector<Roster> groups;
  for (size_t start = 0; start < users.size(); start += group_size) {
    Roster r;
    r.group_id = base_group_id + "." + std::to_string(groups.size());
    r.round = round;
    const size_t end = std::min(users.size(), start + group_size);
    r.members.assign(users.begin() + start, users.begin() + end);
    groups.push_back(std::move(r));
  }
  return groups;
}

namespace {

void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_string16(std::vector<uint8_t>& out, const std::string& s) {
  out.push_back(static_cast<uint8_t>(s.size() & 0xff));
  out.push_back(static_cast<uint8_t>(s.size() >> 8));
  out.insert(out.end(), s.begin(), s.end());
}

struct Reader {
  const std::vector<uint8_t>& d;
  size_t pos = 0;

  uint8_t u8() {
    if (pos >= d.size()) throw DecodeError("truncated message");
    return d[pos++];
  }
  uint32_t u32le() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(u8()) << (8 * i);
    return v;
  }
  std::string string16() {
    size_t n = u8();
    n |= size_t(u8()) << 8;
    std::string s;
    for (size_t i = 0; i < n; ++i) s.push_back(static_cast<char>(u8()));
    return s;
  }
};

}  // namespace

std::vector<uint8_t> BlindedSketch::serialize() const {
  std::vector<uint8_t> out;
  out.insert(out.end(), {'P', 'S', 'B', 'S'});
  put_string16(out, group_id);
  put_string16(out, user_id);
  put_u32le(out, round);
  put_u32le(out, static_cast<uint32_t>(entries.size()));
  for (uint32_t e : entries) put_u32le(out, e);  // L x 4-byte payload
  return out;
}

BlindedSketch BlindedSketch::deserialize(const std::vector<uint8_t>& data) {
  Reader r{data};
  if (r.u8() != 'P' || r.u8() != 'S' || r.u8() != 'B' || r.u8() != 'S') {
    throw DecodeError("bad blinded-sketch magic");
  }
  BlindedSketch b;
  b.group_id = r.string16();
  b.user_id = r.string16();
  b.round = r.u32le();
  b.entries.resize(r.u32le());
  for (auto& e : b.entries) e = r.u32le();
  return b;
}

std::vector<uint8_t> RecoveryShare::serialize() const {
  std::vector<uint8_t> out;
  out.insert(out.end(), {'P', 'S', 'R', 'S'});
  put_string16(out, user_id);
  put_u32le(out, static_cast<uint32_t>(entries.size()));
  for (uint32_t e : entries) put_u32le(out, e);
  return out;
}

RecoveryShare RecoveryShare::deserialize(const std::vector<uint8_t>& data) {
  Reader r{data};
  if (r.u8() != 'P' || r.u8() != 'S' || r.u8() != 'R' || r.u8() != 'S') {
    throw DecodeError("bad recovery-share magic");
  }
  RecoveryShare s;
  s.user_id = r.string16();
  s.entries.resize(r.u32le());
  for (auto& e : s.entries) e = r.u32le();
  return s;
}

}  // namespace privstats
