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

#ifndef TEXTSCALE_PAIRWISE_HPP_
#define TEXTSCALE_PAIRWISE_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "textscale/judge.hpp"

namespace textscale {

// The four (swap_labels, reverse_order) combinations in fixed order:
// (F,F), (T,F), (F,T), (T,T).
extern const std::array<AugmentationVariant, 4> kAugmentationVariants;

struct AugmentedPrompt {
  AugmentationVariant variant;
  std::string prompt;
};

// Renders all four label/order arrangements of a pair. The two items must
// be distinct.
std::array<AugmentedPrompt, 4> MakeAugmentations(
    const PromptTemplate& tmpl, const Item& item1, const Item& item2,
    const ExemplarSet* exemplars = nullptr);

// P(token "1") per variant, in the kAugmentationVariants order. A missing
// entry marks a failed variant; debiasing averages over the present ones.
struct AugmentedResponses {
  std::optional<double> p00;  // no swap, no reverse
  std::optional<double> p10;  // swap, no reverse
  std::optional<double> p01;  // no swap, reverse
  std::optional<double> p11;  // swap, reverse
};

// Alignment to "preference for item 1": y = p when swap_labels ==
// reverse_order, else 1 - p. Under swap XOR reverse the token "1" names
// item 2, so the preference flips.
double AlignPreference(double p_token1, AugmentationVariant variant);

struct DebiasedJudgment {
  double p_first = 0.5;  // debiased preference for the pair's first item
  ComparisonOutcome choice = ComparisonOutcome::kTie;
  double margin = 0.0;  // |p_first - 0.5|
  bool all_variants_present = true;
};

// Mean of the aligned preferences over the present variants; the choice
// follows p_first against the tie band (default 0: strict argmax).
DebiasedJudgment Debias(const AugmentedResponses& responses,
                        double tie_band = 0.0);

struct JudgedPair {
  std::string pair_id;
  std::string left_id;
  std::string right_id;
  AugmentedResponses raw;
  std::array<std::optional<double>, 4> aligned;
  DebiasedJudgment judgment;
  std::string error;  // non-empty when every variant failed
};

struct PairTask {
  std::string pair_id;
  Item first;
  Item second;
};

// Four queries per pair with candidates {"1", "2"}. Partial provider
// failures are flagged per pair; pair identity is preserved in the output
// order.
std::vector<JudgedPair> JudgePairs(Judge& judge, const std::vector<PairTask>& pairs,
                                   const PromptTemplate& tmpl,
                                   const ExemplarSet* exemplars = nullptr,
                                   double tie_band = 0.0);

}  // namespace textscale

#endif  // TEXTSCALE_PAIRWISE_HPP_
