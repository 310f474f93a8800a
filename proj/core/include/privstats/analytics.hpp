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

#ifndef PRIVSTATS_ANALYTICS_HPP_
#define PRIVSTATS_ANALYTICS_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "privstats/sketch.hpp"

namespace privstats {

// Downstream models over decrypted aggregates: item-to-item collaborative
// filtering on co-view counts and EWMA prediction over location heat grids.

// Symmetric co-view counts over num_items programs. count(a, a) is the
// estimated number of viewers of a.
class CoViewCounts {
 public:
  virtual ~CoViewCounts() = default;
  virtual uint32_t num_items() const = 0;
  virtual double count(uint32_t a, uint32_t b) const = 0;
};

// Exact counts in a dense upper-triangular matrix; the oracle the sketch
// path is compared against.
class DenseCoViewCounts : public CoViewCounts {
 public:
  explicit DenseCoViewCounts(uint32_t num_items);

  void add(uint32_t a, uint32_t b, double delta);
  // One user's watch set: bumps every unordered pair and every diagonal.
  void add_user(const std::vector<uint32_t>& watched);

  uint32_t num_items() const override { return num_items_; }
  double count(uint32_t a, uint32_t b) const override;

 private:
  size_t index(uint32_t a, uint32_t b) const;

  uint32_t num_items_;
  std::vector<double> tri_;
};

// Counts read back from an aggregated Count-Min sketch of pair keys.
// Estimates are clamped to >= 0.
class SketchCoViewCounts : public CoViewCounts {
 public:
  SketchCoViewCounts(SketchTable aggregate, uint32_t num_items);

  uint32_t num_items() const override { return num_items_; }
  double count(uint32_t a, uint32_t b) const override;

 private:
  SketchTable aggregate_;
  uint32_t num_items_;
};

// C_ab / sqrt(C_aa * C_bb), 0 when either marginal is 0, clamped to [0, 1].
double cosine_similarity(const CoViewCounts& agg, uint32_t a, uint32_t b);

struct Neighbor {
  uint32_t item = 0;
  double weight = 0;
};

struct SimilarityModel {
  uint32_t num_items = 0;
  uint32_t k = 0;
  // neighbors[i]: up to k entries, weight descending, ties by lower index.
  std::vector<std::vector<Neighbor>> neighbors;
};

SimilarityModel build_model(const CoViewCounts& agg, uint32_t k);

struct Recommendation {
  uint32_t item = 0;
  double score = 0;
};

// score(i) = sum of weights of i's neighbors the user watched, for unwatched
// i with score > 0; top k_out by score, ties by lower index.
std::vector<Recommendation> recommend(const SimilarityModel& model,
                                      const std::set<uint32_t>& watched,
                                      size_t k_out);

// "item,neighbor,weight" rows with a header line.
std::string model_to_csv(const SimilarityModel& model);

// sum over t' of alpha * (1-alpha)^(t-t') * r(t'). The literal formula's
// weights sum to 1-(1-alpha)^t; `normalized` divides that factor out.
double ewma_predict(const std::vector<double>& series, double alpha,
                    bool normalized = false);

struct HeatGrid {
  uint32_t p = 0;
  std::vector<double> cells;  // p * p, row-major

  explicit HeatGrid(uint32_t p_ = 0) : p(p_), cells(size_t(p_) * p_, 0) {}
  double& at(uint32_t row, uint32_t col) { return cells[size_t(row) * p + col]; }
  double at(uint32_t row, uint32_t col) const {
    return cells[size_t(row) * p + col];
  }
};

// Mean |predicted - truth| over the top_n cells ranked by truth count
// (ties by lower cell index). Throws UsageError on dimension mismatch.
double heatmap_mae(const HeatGrid& predicted, const HeatGrid& truth,
                   size_t top_n);

// Cell-wise EWMA prediction for the slot after the series.
HeatGrid ewma_predict_grid(const std::vector<HeatGrid>& series, double alpha,
                           bool normalized = false);

}  // namespace privstats

#endif  // PRIVSTATS_ANALYTICS_HPP_
