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

#include "privstats/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "privstats/common.hpp"

namespace privstats {

DenseCoViewCounts::DenseCoViewCounts(uint32_t num_items)
    : num_items_(num_items),
      tri_(size_t(num_items) * (num_items + 1) / 2, 0) {}

size_t DenseCoViewCounts::index(uint32_t a, uint32_t b) const {
  if (a >= num_items_ || b >= num_items_) {
    throw UsageError("item index out of range");
  }
  if (a > b) std::swap(a, b);
  // Row-major upper triangle: row a starts after a rows of shrinking length.
  return size_t(a) * num_items_ - size_t(a) * (a + 1) / 2 + size_t(a) + (b - a);
}

void DenseCoViewCounts::add(uint32_t a, uint32_t b, double delta) {
  tri_[index(a, b)] += delta;
}

void DenseCoViewCounts::add_user(const std::vector<uint32_t>& watched) {
  for (size_t i = 0; i < watched.size(); ++i) {
    for (size_t j = i; j < watched.size(); ++j) {
      add(watched[i], watched[j], 1);
    }
  }
}

double DenseCoViewCounts::count(uint32_t a, uint32_t b) const {
  return tri_[index(a, b)];
}

SketchCoViewCounts::SketchCoViewCounts(SketchTable aggregate,
                                       uint32_t num_items)
    : aggregate_(std::move(aggregate)), num_items_(num_items) {
  if (aggregate_.kind() != SketchKind::kCountMin) {
    throw UsageError("co-view estimation requires a Count-Min sketch");
  }
}

double SketchCoViewCounts::count(uint32_t a, uint32_t b) const {
  if (a >= num_items_ || b >= num_items_) {
    throw UsageError("item index out of range");
  }
  const int64_t est = aggregate_.estimate_cms(ItemKey::pair(a, b));
  return est < 0 ? 0 : double(est);
}

double cosine_similarity(const CoViewCounts& agg, uint32_t a, uint32_t b) {
  const double caa = agg.count(a, a);
  const double cbb = agg.count(b, b);
  if (caa <= 0 || cbb <= 0) return 0;
  const double sim = agg.count(a, b) / std::sqrt(caa * cbb);
  return std::clamp(sim, 0.0, 1.0);
}

SimilarityModel build_model(const CoViewCounts& agg, uint32_t k) {
  if (k < 1) throw ParameterError("neighbor count must be >= 1");
  const uint32_t m = agg.num_items();
  SimilarityModel model;
  model.num_items = m;
  model.k = k;
  model.neighbors.resize(m);
  std::vector<Neighbor> all;
  for (uint32_t i = 0; i < m; ++i) {
    all.clear();
    all.reserve(m - 1);
    for (uint32_t j = 0; j < m; ++j) {
      if (j != i) all.push_back({j, cosine_similarity(agg, i, j)});
    }
    const size_t take = std::min<size_t>(k, all.size());
    std::partial_sort(all.begin(), all.begin() + take, all.end(),
                      [](const Neighbor& x, const Neighbor& y) {
                        if (x.weight != y.weight) return x.weight > y.weight;
                        return x.item < y.item;
                      });
    model.neighbors[i].assign(all.begin(), all.begin() + take);
  }
  return model;
}

std::vector<Recommendation> recommend(const SimilarityModel& model,
                                      const std::set<uint32_t>& watched,
                                      size_t k_out) {
  std::vector<Recommendation> scored;
  for (uint32_t i = 0; i < model.num_items; ++i) {
    if (watched.count(i)) continue;
    double score = 0;
    for (const Neighbor& nb : model.neighbors[i]) {
      if (watched.count(nb.item)) score += nb.weight;
    }
    if (score > 0) scored.push_back({i, score});
  }
  std::sort(scored.begin(), scored.end(),
            [](const Recommendation& x, const Recommendation& y) {
              if (x.score != y.score) return x.score > y.score;
              return x.item < y.item;
            });
  if (scored.size() > k_out) scored.resize(k_out);
  return scored;
}

std::string model_to_csv(const SimilarityModel& model) {
  std::ostringstream out;
  out << "item,neighbor,weight\n";
  out.precision(17);
  for (uint32_t i = 0; i < model.num_items; ++i) {
    for (const Neighbor& nb : model.neighbors[i]) {
      out << i << ',' << nb.item << ',' << nb.weight << '\n';
    }
  }
  return out.str();
}

double ewma_predict(const std::vector<double>& series, double alpha,
                    bool normalized) {
  if (!(alpha > 0 && alpha < 1)) {
    throw ParameterError("ewma alpha must be in (0, 1)");
  }
  if (series.empty()) throw ParameterError("ewma needs at least one value");
  // Horner evaluation of sum alpha (1-alpha)^(t-t') r(t').
  double acc = 0;
  for (double r : series) acc = acc * (1 - alpha) + alpha * r;
  if (normalized) {
    acc /= 1 - std::pow(1 - alpha, double(series.size()));
  }
  return acc;
}

double heatmap_mae(const HeatGrid& predicted, const HeatGrid& truth,
                   size_t top_n) {
  if (predicted.p != truth.p) throw UsageError("grid dimensions differ");
  if (top_n == 0) throw ParameterError("top_n must be >= 1");
  std::vector<size_t> order(truth.cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (truth.cells[x] != truth.cells[y]) {
      return truth.cells[x] > truth.cells[y];
    }
    return x < y;
  });
  const size_t take = std::min(top_n, order.size());
  double sum = 0;
  for (size_t i = 0; i < take; ++i) {
    sum += std::fabs(predicted.cells[order[i]] - truth.cells[order[i]]);
  }
  return sum / double(take);
}

HeatGrid ewma_predict_grid(const std::vector<HeatGrid>& series, double alpha,
                           bool normalized) {
  if (series.empty()) throw ParameterError("ewma needs at least one grid");
  const uint32_t p = series[0].p;
  for (const auto& g : series) {
    if (g.p != p) throw UsageError("grid dimensions differ");
  }
  HeatGrid out(p);
  std::vector<double> cell_series(series.size());
  for (size_t c = 0; c < out.cells.size(); ++c) {
    for (size_t t = 0; t < series.size(); ++t) {
      cell_series[t] = series[t].cells[c];
    }
    out.cells[c] = ewma_predict(cell_series, alpha, normalized);
  }
  return out;
}

}  // namespace privstats
