// Copyright 2026 The textscale Authors
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

#include "textscale/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "textscale/error.hpp"

namespace textscale {

PointwiseScore WeightedMeanScore(const TokenDistribution& dist,
                                 const ScaleSpec& scale,
                                 const std::string& item_id) {
  dist.Validate();
  scale.Validate();
  PointwiseScore score;
  score.item_id = item_id;
  double mass = 0.0;
  double weighted = 0.0;
  bool have_modal = false;
  for (const auto& token : scale.tokens) {
    auto it = dist.probs.find(token);
    double p = it == dist.probs.end() ? 0.0 : it->second;
    int value = scale.to_int.at(token);
    mass += p;
    weighted += p * value;
    // Strictly-greater keeps ties at the lower integer (tokens ascend).
    if (!have_modal || p > score.modal_confidence) {
      score.modal_token = token;
      score.modal_confidence = p;
      have_modal = true;
    }
  }
  if (mass <= 0.0) {
    throw ScaleMassAbsentError("response for item '" + item_id +
                               "' carries zero scale-token mass");
  }
  score.scale_mass = mass;
  score.weighted_mean = weighted / mass;
  return score;
}

ScoreBatch ScoreItems(Judge& judge, const std::vector<Item>& items,
                      const PromptTemplate& tmpl, const ScaleSpec& scale,
                      const ExemplarSet* exemplars) {
  if (items.empty()) throw ValidationError("no items to score");
  std::vector<const Item*> ordered;
  ordered.reserve(items.size());
  for (const auto& item : items) ordered.push_back(&item);
  std::sort(ordered.begin(), ordered.end(),
            [](const Item* a, const Item* b) { return a->id < b->id; });

  ScoreBatch batch;
  batch.scores.provenance = "pointwise-weighted";
  for (const Item* item : ordered) {
    std::string prompt = RenderPrompt(tmpl, item->text, exemplars);
    TokenDistribution dist;
    try {
      dist = judge.Query(prompt, scale.tokens);
    } catch (const TransportError& e) {
      throw TransportError("item '" + item->id + "': " + e.what(), e.attempts());
    } catch (const CandidatesUnobservableError& e) {
      batch.skipped.push_back({item->id, e.what()});
      continue;
    }
    try {
      PointwiseScore score = WeightedMeanScore(dist, scale, item->id);
      batch.scores.values[item->id] = score.weighted_mean;
      batch.details.push_back(std::move(score));
    } catch (const ScaleMassAbsentError& e) {
      batch.skipped.push_back({item->id, e.what()});
    }
  }
  return batch;
}

namespace {

HeapingDiagnostics HeapingFromCounts(const std::map<std::string, size_t>& counts,
                                     size_t total) {
  HeapingDiagnostics diag;
  if (total == 0) throw ValidationError("heaping index of an empty value list");
  std::vector<double> shares;
  for (const auto& [value, count] : counts)
    shares.push_back(static_cast<double>(count) / total);
  std::sort(shares.begin(), shares.end(), std::greater<double>());
  diag.top1_share = shares[0];
  diag.top2_share = shares.size() > 1 ? shares[0] + shares[1] : shares[0];
  if (shares.size() > 1) {
    double entropy = 0.0;
    for (double s : shares) {
      if (s > 0) entropy -= s * std::log(s);
    }
    diag.normalized_entropy = entropy / std::log(static_cast<double>(shares.size()));
  }
  return diag;
}

}  // namespace

HeapingDiagnostics HeapingIndex(const std::vector<std::string>& values) {
  std::map<std::string, size_t> counts;
  for (const auto& v : values) ++counts[v];
  return HeapingFromCounts(counts, values.size());
}

HeapingDiagnostics HeapingIndex(const std::vector<int>& values) {
  std::vector<std::string> tokens;
  tokens.reserve(values.size());
  for (int v : values) tokens.push_back(std::to_string(v));
  return HeapingIndex(tokens);
}

}  // namespace textscale
