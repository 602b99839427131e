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

#include "doctest.h"
#include "textscale/error.hpp"
#include "textscale/rng.hpp"

using namespace textscale;

namespace {

PromptTemplate PairwiseTemplate() {
  PromptTemplate tmpl;
  tmpl.task_id = "demo";
  tmpl.mode = PromptMode::kPairwise;
  tmpl.body = "Pick one.\n\n## Input\n\n{text}\n\n**Response**:";
  return tmpl;
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("the four augmentations realize the label/order table") {
  Item a{"a", "alpha text", {}};
  Item b{"b", "beta text", {}};
  auto prompts = MakeAugmentations(PairwiseTemplate(), a, b);

  // (F,F): Text 1: item1 before Text 2: item2.
  CHECK(prompts[0].prompt.find("Text 1: alpha text") <
        prompts[0].prompt.find("Text 2: beta text"));
  // (T,F): Text 2: item1 before Text 1: item2.
  CHECK(prompts[1].prompt.find("Text 2: alpha text") <
        prompts[1].prompt.find("Text 1: beta text"));
  // (F,T): Text 1: item2 before Text 2: item1.
  CHECK(prompts[2].prompt.find("Text 1: beta text") <
        prompts[2].prompt.find("Text 2: alpha text"));
  // (T,T): Text 2: item2 before Text 1: item1 — the label "Text 1" is
  // attached to item1 but listed second.
  CHECK(prompts[3].prompt.find("Text 2: beta text") <
        prompts[3].prompt.find("Text 1: alpha text"));

  CHECK_THROWS_AS(MakeAugmentations(PairwiseTemplate(), a, a), ValidationError);
}

TEST_CASE("alignment follows the worked probabilities") {
  CHECK(AlignPreference(0.996, {false, false}) == doctest::Approx(0.996));
  CHECK(AlignPreference(0.197, {false, true}) == doctest::Approx(0.803));
  CHECK(AlignPreference(0.651, {true, true}) == doctest::Approx(0.651));
  CHECK(AlignPreference(0.699, {true, false}) == doctest::Approx(0.301));
  CHECK_THROWS_AS(AlignPreference(1.5, {false, false}), ValidationError);
}

TEST_CASE("debias reproduces the worked example") {
  AugmentedResponses responses;
  responses.p00 = 0.996;
  responses.p10 = 0.699;
  responses.p01 = 0.197;
  responses.p11 = 0.651;
  auto judgment = Debias(responses);
  CHECK(std::abs(judgment.p_first - 0.688) < 1e-3);
  CHECK(judgment.choice == ComparisonOutcome::kFirstWins);
  CHECK(judgment.all_variants_present);
}

TEST_CASE("all-0.5 responses give a tie at any band") {
  AugmentedResponses responses;
  responses.p00 = responses.p10 = responses.p01 = responses.p11 = 0.5;
  auto judgment = Debias(responses, 0.0);
  CHECK(judgment.p_first == doctest::Approx(0.5));
  CHECK(judgment.choice == ComparisonOutcome::kTie);
  CHECK(judgment.margin == doctest::Approx(0.0));
}

TEST_CASE("averaging identity: equal aligned values pass through") {
  AugmentedResponses responses;
  responses.p00 = 0.73;
  responses.p10 = 1.0 - 0.73;
  responses.p01 = 1.0 - 0.73;
  responses.p11 = 0.73;
  auto judgment = Debias(responses);
  CHECK(judgment.p_first == doctest::Approx(0.73));
}

TEST_CASE("missing variants average over the present ones, flagged") {
  AugmentedResponses responses;
  responses.p00 = 0.9;
  responses.p11 = 0.7;
  auto judgment = Debias(responses);
  CHECK(judgment.p_first == doctest::Approx(0.8));
  CHECK_FALSE(judgment.all_variants_present);
  AugmentedResponses empty;
  CHECK_THROWS_AS(Debias(empty), ValidationError);
}

TEST_CASE("bias cancellation is exact for the mock's position bias") {
  auto tmpl = PairwiseTemplate();
  Rng rng(99);
  for (double delta : {-2.0, -1.0, 1.0, 2.0}) {
    MockJudgeConfig config;
    config.position_bias = delta;
    config.beta = 1.0;
    std::vector<PairTask> tasks;
    for (int k = 0; k < 250; ++k) {
      Item a{"a" + std::to_string(k), "left text " + std::to_string(k), {}};
      Item b{"b" + std::to_string(k), "right text " + std::to_string(k), {}};
      config.latent_by_text[a.text] = rng.NextUniform(1.0, 9.0);
      config.latent_by_text[b.text] = rng.NextUniform(1.0, 9.0);
      tasks.push_back({"p" + std::to_string(k), a, b});
    }
    MockJudge biased(config);
    auto judged = JudgePairs(biased, tasks, tmpl);
    for (const auto& jp : judged) {
      REQUIRE(jp.error.empty());
      double s1 = config.latent_by_text.at(
          tasks[&jp - judged.data()].first.text);
      double s2 = config.latent_by_text.at(
          tasks[&jp - judged.data()].second.text);
      double unbiased = Sigmoid((s1 - s2) / config.beta);
      CHECK(std::abs(jp.judgment.p_first - unbiased) < 1e-6);
      // The raw first-variant response really is biased.
      if (delta > 0 && unbiased > 0.05 && unbiased < 0.95) {
        CHECK(*jp.raw.p00 > unbiased - 1e-9);
      }
    }
  }
}

TEST_CASE("judge_pairs antisymmetry under pair reversal") {
  MockJudgeConfig config;
  config.latent_by_text = {{"one text", 6.5}, {"two text", 3.5}};
  MockJudge judge(config);
  auto tmpl = PairwiseTemplate();
  Item a{"a", "one text", {}};
  Item b{"b", "two text", {}};
  auto forward = JudgePairs(judge, {{"fwd", a, b}}, tmpl);
  auto reverse = JudgePairs(judge, {{"rev", b, a}}, tmpl);
  REQUIRE(forward.size() == 1);
  REQUIRE(reverse.size() == 1);
  CHECK(forward[0].judgment.choice == ComparisonOutcome::kFirstWins);
  CHECK(reverse[0].judgment.choice == ComparisonOutcome::kSecondWins);
  CHECK(forward[0].judgment.p_first ==
        doctest::Approx(1.0 - reverse[0].judgment.p_first).epsilon(1e-12));
}

TEST_CASE("partial provider failures are flagged per pair") {
  class FlakyJudge : public Judge {
   public:
    TokenDistribution Query(const std::string& prompt,
                            const std::vector<std::string>&) override {
      // Fail exactly the swapped-label, unreversed variant.
      size_t pos1 = prompt.rfind("Text 1: ");
      size_t pos2 = prompt.rfind("Text 2: ");
      bool swapped_first = pos2 < pos1;
      bool reversed = prompt.find("zz-second") < prompt.find("zz-first");
      if (swapped_first && !reversed) throw TransportError("flaky", 1);
      TokenDistribution d;
      d.probs["1"] = 0.8;
      d.probs["2"] = 0.2;
      d.source = "flaky";
      return d;
    }
    std::string Name() const override { return "flaky"; }
  };
  FlakyJudge judge;
  Item a{"a", "zz-first", {}};
  Item b{"b", "zz-second", {}};
  auto judged = JudgePairs(judge, {{"p0", a, b}}, PairwiseTemplate());
  REQUIRE(judged.size() == 1);
  CHECK(judged[0].error.empty());
  CHECK_FALSE(judged[0].raw.p10.has_value());
  CHECK_FALSE(judged[0].judgment.all_variants_present);
}

TEST_CASE("tie band turns near-even judgments into ties") {
  AugmentedResponses responses;
  responses.p00 = 0.52;
  responses.p10 = 0.48;
  responses.p01 = 0.48;
  responses.p11 = 0.52;
  CHECK(Debias(responses, 0.0).choice == ComparisonOutcome::kFirstWins);
  CHECK(Debias(responses, 0.05).choice == ComparisonOutcome::kTie);
}
