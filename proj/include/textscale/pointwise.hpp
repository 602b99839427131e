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

#ifndef TEXTSCALE_POINTWISE_HPP_
#define TEXTSCALE_POINTWISE_HPP_

#include <map>
#include <string>
#include <vector>

#include "textscale/judge.hpp"

namespace textscale {

struct PointwiseScore {
  std::string item_id;
  double weighted_mean = 0.0;     // on the scale's integer range
  std::string modal_token;        // argmax over scale tokens; ties -> lower int
  double modal_confidence = 0.0;  // raw probability of the modal token
  double scale_mass = 0.0;        // p_s: total mass on scale tokens
};

struct ScoreVector {
  std::map<std::string, double> values;
  std::string provenance;  // pointwise-weighted | pointwise-modal | bt | reward-model
};

// Probability-weighted mean over the scale: s = (1/p_s) sum P(s) n(s).
// Zero scale mass raises ScaleMassAbsentError.
PointwiseScore WeightedMeanScore(const TokenDistribution& dist,
                                 const ScaleSpec& scale,
                                 const std::string& item_id = "");

struct SkipRecord {
  std::string item_id;
  std::string reason;
};

struct ScoreBatch {
  ScoreVector scores;  // provenance "pointwise-weighted"
  std::vector<PointwiseScore> details;
  std::vector<SkipRecord> skipped;  // unusable responses, never dropped silently
};

// Scores every item with the judge; items ordered by id for determinism.
// Transport errors are rethrown with the offending item id attached;
// zero-scale-mass responses land in the skip list instead.
ScoreBatch ScoreItems(Judge& judge, const std::vector<Item>& items,
                      const PromptTemplate& tmpl, const ScaleSpec& scale,
                      const ExemplarSet* exemplars = nullptr);

struct HeapingDiagnostics {
  double top1_share = 0.0;
  double top2_share = 0.0;
  double normalized_entropy = 0.0;  // histogram entropy / log(#distinct)
};

HeapingDiagnostics HeapingIndex(const std::vector<std::string>& values);
HeapingDiagnostics HeapingIndex(const std::vector<int>& values);

}  // namespace textscale

#endif  // TEXTSCALE_POINTWISE_HPP_
