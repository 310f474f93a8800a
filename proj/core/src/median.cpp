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

#include "privstats/median.hpp"

#include <algorithm>
#include <cmath>

#include "privstats/common.hpp"

namespace privstats {

uint32_t MedianDomain::xi() const {
  validate();
  uint32_t bits = 0;
  uint64_t span = uint64_t(hi - lo);
  while ((uint64_t(1) << bits) < span) ++bits;
  return bits;  // ceil(log2(hi - lo))
}

void MedianDomain::validate() const {
  if (hi <= lo) throw ParameterError("median domain requires hi > lo");
  if (n < 1) throw ParameterError("median requires at least one value");
}

DpConfig DpConfig::with_epsilon(double epsilon_dp, const MedianDomain& domain,
                                uint32_t depth) {
  if (!(epsilon_dp > 0)) throw ParameterError("dp epsilon must be > 0");
  DpConfig dp;
  dp.enabled = true;
  dp.epsilon_dp = epsilon_dp;
  dp.xi = domain.xi();
  dp.depth = depth;
  return dp;
}

double DpConfig::scale() const {
  if (!enabled) return 0;
  return double(xi) * double(depth) / epsilon_dp;
}

double laplace(double scale, Drbg& rng) {
  double u;
  do {
    u = rng.uniform() - 0.5;
  } while (u <= -0.5);  // keep 1 - 2|u| strictly positive
  if (u == 0) return 0;
  const double s = u > 0 ? 1.0 : -1.0;
  return -scale * s * std::log(1.0 - 2.0 * std::fabs(u));
}

ExactRangeCounter::ExactRangeCounter(std::vector<int64_t> values)
    : sorted_(std::move(values)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double ExactRangeCounter::count(int64_t lo, int64_t hi) {
  const auto first = std::lower_bound(sorted_.begin(), sorted_.end(), lo);
  const auto last = std::lower_bound(sorted_.begin(), sorted_.end(), hi);
  return double(last - first);
}

SketchRangeCounter::SketchRangeCounter(SketchTable aggregate)
    : aggregate_(std::move(aggregate)) {
  if (aggregate_.kind() != SketchKind::kCount) {
    throw UsageError("range counting requires a Count sketch");
  }
}

double SketchRangeCounter::count(int64_t lo, int64_t hi) {
  const auto phi = range_coefficients(aggregate_, lo, hi);
  long double s = 0;
  for (size_t l = 0; l < phi.size(); ++l) {
    s += static_cast<long double>(phi[l]) * aggregate_.cells()[l];
  }
  return double(s) / aggregate_.depth();
}

EncryptedRangeCounter::EncryptedRangeCounter(
    const ahe::Group& group, ahe::EncryptedSketch aggregate,
    std::vector<ahe::AuthorityKey> authorities, const ahe::DlogTable& table)
    : group_(group),
      aggregate_(std::move(aggregate)),
      shape_(aggregate_.kind, aggregate_.params),
      authorities_(std::move(authorities)),
      table_(table) {
  if (aggregate_.kind != SketchKind::kCount) {
    throw UsageError("range counting requires a Count sketch");
  }
  if (authorities_.empty()) throw UsageError("no decryption authorities");
  if (aggregate_.cells.size() != shape_.size()) {
    throw UsageError("encrypted sketch cell count does not match metadata");
  }
}

double EncryptedRangeCounter::count(int64_t lo, int64_t hi) {
  const auto phi = range_coefficients(shape_, lo, hi);
  const ahe::Ciphertext combined =
      ahe::homomorphic_combine(group_, aggregate_.cells, phi);
  std::vector<ahe::Point> parts;
  parts.reserve(authorities_.size());
  for (const auto& auth : authorities_) {
    parts.push_back(ahe::partial_decrypt(group_, combined, auth));
  }
  const int64_t s = ahe::combine_and_decode(group_, combined, parts, table_);
  ++decryptions_;
  return double(s) / shape_.depth();
}

BisectionResult bisect_median(RangeCounter& counter,
                              const MedianDomain& domain, const DpConfig& dp,
                              Drbg* noise_rng) {
  domain.validate();
  if (dp.enabled && noise_rng == nullptr) {
    throw UsageError("DP noise requires a noise generator");
  }
  const uint32_t steps = domain.xi();
  int64_t a = domain.lo;
  int64_t b = domain.hi;
  uint64_t r = (domain.n + 1) / 2;  // lower median rank
  uint64_t m = domain.n;

  BisectionResult out;
  out.transcript.reserve(steps);
  for (uint32_t i = 0; i < steps; ++i) {
    const int64_t mid = a + (b - a) / 2;
    BisectionStep step;
    step.lo = a;
    step.mid = mid;
    step.hi = b;
    step.rank = r;
    step.remaining = m;
    step.raw_count = counter.count(a, mid);
    step.noise = dp.enabled ? laplace(dp.scale(), *noise_rng) : 0;
    double c = std::llround(step.raw_count + step.noise);
    c = std::max(0.0, std::min(double(m), c));
    step.routed_count = int64_t(c);
    if (r <= uint64_t(step.routed_count) && step.routed_count > 0) {
      step.went_left = true;
      b = mid;
      m = uint64_t(step.routed_count);
    } else {
      step.went_left = false;
      a = mid;
      r -= uint64_t(step.routed_count);
      m -= uint64_t(step.routed_count);
    }
    if (m == 0) m = 1;  // noise can empty the range; keep the rank valid
    if (r < 1) r = 1;
    if (r > m) r = m;
    out.transcript.push_back(step);
  }
  out.median = a;
  return out;
}

SketchTable build_submission(const std::vector<int64_t>& values,
                             const MedianDomain& domain,
                             const SketchParams& params) {
  if (domain.hi <= domain.lo) {
    throw ParameterError("median domain requires hi > lo");
  }
  SketchTable sketch(SketchKind::kCount, params);
  for (int64_t v : values) {
    if (v < domain.lo || v >= domain.hi) {
      throw ParameterError("value " + std::to_string(v) +
                           " outside the median domain");
    }
    sketch.update(ItemKey::value(uint64_t(v)), 1);
  }
  return sketch;
}

ahe::EncryptedSketch submit(const ahe::Group& group, const ahe::Point& pk,
                            const std::vector<int64_t>& values,
                            const MedianDomain& domain,
                            const SketchParams& params, Drbg& rng) {
  return ahe::encrypt_sketch(group, pk, build_submission(values, domain, params),
                             rng);
}

int64_t exact_median(std::vector<int64_t> values) {
  if (values.empty()) throw ParameterError("median of an empty set");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

}  // namespace privstats
