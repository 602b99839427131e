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

#include "textscale/pairwise.hpp"

#include <cmath>

#include "textscale/error.hpp"

namespace textscale {

const std::array<AugmentationVariant, 4> kAugmentationVariants = {{
    {false, false},
    {true, false},
    {false, true},
    {true, true},
}};

std::array<AugmentedPrompt, 4> MakeAugmentations(const PromptTemplate& tmpl,
                                                 const Item& item1,
                                                 const Item& item2,
                                                 const ExemplarSet* exemplars) {
  if (item1.id == item2.id) {
    throw ValidationError("cannot augment a pair of identical items ('" +
                          item1.id + "')");
  }
  std::array<AugmentedPrompt, 4> prompts;
  for (size_t v = 0; v < kAugmentationVariants.size(); ++v) {
    prompts[v].variant = kAugmentationVariants[v];
    prompts[v].prompt = RenderPairVariant(tmpl, item1.text, item2.text,
                                          kAugmentationVariants[v], exemplars);
  }
  return prompts;
}

double AlignPreference(double p_token1, AugmentationVariant variant) {
  if (p_token1 < 0.0 || p_token1 > 1.0) {
    throw ValidationError("preference probability outside [0, 1]");
  }
  return variant.swap_labels == variant.reverse_order ? p_token1
                                                      : 1.0 - p_token1;
}

DebiasedJudgment Debias(const AugmentedResponses& responses, double tie_band) {
  const std::array<const std::optional<double>*, 4> raw = {
      &responses.p00, &responses.p10, &responses.p01, &responses.p11};
  double sum = 0.0;
  int present = 0;
  for (size_t v = 0; v < raw.size(); ++v) {
    if (!raw[v]->has_value()) continue;
    sum += AlignPreference(raw[v]->value(), kAugmentationVariants[v]);
    ++present;
  }
  if (present == 0) {
    throw ValidationError("debias called with zero present variants");
  }
  DebiasedJudgment judgment;
  judgment.p_first = sum / present;
  judgment.all_variants_present = present == 4;
  judgment.margin = std::abs(judgment.p_first - 0.5);
  if (judgment.p_first > 0.5 + tie_band) {
    judgment.choice = ComparisonOutcome::kFirstWins;
  } else if (judgment.p_first < 0.5 - tie_band) {
    judgment.choice = ComparisonOutcome::kSecondWins;
  } else {
    judgment.choice = ComparisonOutcome::kTie;
  }
  return judgment;
}

std::vector<JudgedPair> JudgePairs(Judge& judge,
                                   const std::vector<PairTask>& pairs,
                                   const PromptTemplate& tmpl,
                                   const ExemplarSet* exemplars,
                                   double tie_band) {
  static const std::vector<std::string> kChoiceTokens = {"1", "2"};
  std::vector<JudgedPair> results;
  results.reserve(pairs.size());
  for (const auto& task : pairs) {
    JudgedPair out;
    out.pair_id = task.pair_id;
    out.left_id = task.first.id;
    out.right_id = task.second.id;
    auto prompts = MakeAugmentations(tmpl, task.first, task.second, exemplars);
    std::array<std::optional<double>, 4> p_token1;
    std::string first_error;
    for (size_t v = 0; v < prompts.size(); ++v) {
      try {
        TokenDistribution dist = judge.Query(prompts[v].prompt, kChoiceTokens);
        auto it = dist.probs.find("1");
        p_token1[v] = it == dist.probs.end() ? 0.0 : it->second;
      } catch (const Error& e) {
        if (first_error.empty()) first_error = e.what();
      }
    }
    out.raw.p00 = p_token1[0];
    out.raw.p10 = p_token1[1];
    out.raw.p01 = p_token1[2];
    out.raw.p11 = p_token1[3];
    for (size_t v = 0; v < p_token1.size(); ++v) {
      if (p_token1[v]) {
        out.aligned[v] = AlignPreference(*p_token1[v], kAugmentationVariants[v]);
      }
    }
    bool any = false;
    for (const auto& p : p_token1) any = any || p.has_value();
    if (!any) {
      out.error = "pair '" + task.pair_id + "': all variants failed: " + first_error;
    } else {
      out.judgment = Debias(out.raw, tie_band);
    }
    results.push_back(std::move(out));
  }
  return results;
}

}  // namespace textscale
