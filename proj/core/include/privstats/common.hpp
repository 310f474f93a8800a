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

#ifndef PRIVSTATS_COMMON_HPP_
#define PRIVSTATS_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace privstats {

// Error hierarchy. Everything user-facing derives from Error so callers can
// catch one type at the CLI boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Wrong-kind sketch queries, mismatched lengths, and similar API misuse.
class UsageError : public Error {
 public:
  using Error::Error;
};

class MergeError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

// Decrypted group element was not found in the discrete-log table.
class DecodeFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Raised by the tally when a round is missing submissions. Carries the online
// set so the caller can start the recovery path.
class IncompleteRound : public Error {
 public:
  IncompleteRound(std::vector<std::string> online, std::vector<std::string> missing)
      : Error("incomplete round: " + std::to_string(missing.size()) +
              " submission(s) missing"),
        online_(std::move(online)),
        missing_(std::move(missing)) {}

  const std::vector<std::string>& online() const { return online_; }
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> online_;
  std::vector<std::string> missing_;
};

inline void append_be32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void append_be64(std::vector<uint8_t>& out, uint64_t v) {
  append_be32(out, static_cast<uint32_t>(v >> 32));
  append_be32(out, static_cast<uint32_t>(v));
}

}  // namespace privstats

#endif  // PRIVSTATS_COMMON_HPP_
