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

#ifndef PRIVSTATS_MEDIAN_HPP_
#define PRIVSTATS_MEDIAN_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "privstats/ahe.hpp"
#include "privstats/rng.hpp"
#include "privstats/sketch.hpp"

namespace privstats {

// Divide-and-conquer median over aggregated Count Sketch range counts, with
// an optional Laplace layer on each decrypted intermediate count.

struct MedianDomain {
  int64_t lo = 0;
  int64_t hi = 0;
  uint64_t n = 0;  // number of contributed values

  // Planned number of bisection steps (and decryptions).
  uint32_t xi() const;
  void validate() const;  // throws ParameterError
};

struct DpConfig {
  bool enabled = false;
  double epsilon_dp = 0;
  uint32_t xi = 0;
  uint32_t depth = 0;

  static DpConfig disabled() { return DpConfig{}; }
  static DpConfig with_epsilon(double epsilon_dp, const MedianDomain& domain,
                               uint32_t depth);

  // Laplace scale xi * d / epsilon_dp.
  double scale() const;
};

// Inverse-CDF Laplace sample: u in (-1/2, 1/2), -scale * sgn(u) * ln(1-2|u|).
double laplace(double scale, Drbg& rng);

// Noiseless real-valued count of contributed values in [lo, hi). The three
// implementations differ only in estimation error: exact, sketch, and
// sketch-under-encryption (the last two agree cell-for-cell by construction).
class RangeCounter {
 public:
  virtual ~RangeCounter() = default;
  virtual double count(int64_t lo, int64_t hi) = 0;
};

class ExactRangeCounter : public RangeCounter {
 public:
  explicit ExactRangeCounter(std::vector<int64_t> values);
  double count(int64_t lo, int64_t hi) override;

 private:
  std::vector<int64_t> sorted_;
};

// Mean over rows of the per-row unbiased range estimates of a plaintext
// aggregated Count sketch.
class SketchRangeCounter : public RangeCounter {
 public:
  explicit SketchRangeCounter(SketchTable aggregate);
  double count(int64_t lo, int64_t hi) override;

 private:
  SketchTable aggregate_;
};

// Same estimator evaluated homomorphically: range coefficients are applied to
// the encrypted cells, the result is jointly decrypted by all authorities,
// and the integer sum is divided by the depth.
class EncryptedRangeCounter : public RangeCounter {
 public:
  EncryptedRangeCounter(const ahe::Group& group, ahe::EncryptedSketch aggregate,
                        std::vector<ahe::AuthorityKey> authorities,
                        const ahe::DlogTable& table);
  double count(int64_t lo, int64_t hi) override;

  uint32_t decryptions() const { return decryptions_; }

 private:
  const ahe::Group& group_;
  ahe::EncryptedSketch aggregate_;
  SketchTable shape_;  // plaintext metadata for the range coefficients
  std::vector<ahe::AuthorityKey> authorities_;
  const ahe::DlogTable& table_;
  uint32_t decryptions_ = 0;
};

struct BisectionStep {
  int64_t lo = 0;
  int64_t mid = 0;
  int64_t hi = 0;
  double raw_count = 0;   // counter output for [lo, mid)
  double noise = 0;       // Laplace draw, 0 when DP is off
  int64_t routed_count = 0;  // rounded and clamped to [0, remaining]
  uint64_t rank = 0;      // 1-indexed target within [lo, hi) before routing
  uint64_t remaining = 0;
  bool went_left = false;
};

struct BisectionResult {
  int64_t median = 0;
  std::vector<BisectionStep> transcript;
};

// Exactly domain.xi() iterations; rank target ceil(n / 2) (the lower median).
// Noise never crashes the routing, it can only misroute.
BisectionResult bisect_median(RangeCounter& counter,
                              const MedianDomain& domain, const DpConfig& dp,
                              Drbg* noise_rng);

// Reporter-side plaintext Count sketch over the given values. Throws
// ParameterError for a value outside [domain.lo, domain.hi).
SketchTable build_submission(const std::vector<int64_t>& values,
                             const MedianDomain& domain,
                             const SketchParams& params);

// build_submission followed by cell-wise encryption under the combined key.
ahe::EncryptedSketch submit(const ahe::Group& group, const ahe::Point& pk,
                            const std::vector<int64_t>& values,
                            const MedianDomain& domain,
                            const SketchParams& params, Drbg& rng);

// Sorted-array lower median, the oracle the protocol is judged against.
int64_t exact_median(std::vector<int64_t> values);

}  // namespace privstats

#endif  // PRIVSTATS_MEDIAN_HPP_
