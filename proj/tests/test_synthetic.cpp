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

#include "textscale/synthetic.hpp"

#include <cmath>

#include "doctest.h"
#include "textscale/bt.hpp"
#include "textscale/error.hpp"
#include "textscale/metrics.hpp"

using namespace textscale;

TEST_CASE("latent generation is deterministic and validated") {
  CHECK_THROWS_AS(GenLatent(1, LatentDistribution::kUniform, 0), ValidationError);
  auto a = GenLatent(10, LatentDistribution::kUniform, 0);
  auto b = GenLatent(10, LatentDistribution::kUniform, 0);
  CHECK(a == b);
  auto c = GenLatent(10, LatentDistribution::kNormal, 0, 0.0);
  double first = c.begin()->second;
  for (const auto& [id, v] : c) CHECK(v == doctest::Approx(first));
}

TEST_CASE("bimodal latents center on the midpoint") {
  auto latent = GenLatent(10000, LatentDistribution::kBimodal, 3);
  double mean = 0.0;
  for (const auto& [id, v] : latent) mean += v;
  mean /= latent.size();
  CHECK(std::abs(mean - 0.5) < 0.05);
}

TEST_CASE("simulated comparisons follow the logistic law") {
  std::map<std::string, double> latent = {{"hi", 10.0}, {"lo", 0.0}};
  std::vector<std::pair<std::string, std::string>> schedule(
      10000, {"hi", "lo"});
  auto edges = SimulateComparisons(latent, schedule, 5);
  int hi_wins = 0;
  for (const auto& e : edges)
    hi_wins += e.outcome == ComparisonOutcome::kFirstWins;
  CHECK(hi_wins >= 9990);

  std::map<std::string, double> equal = {{"a", 0.3}, {"b", 0.3}};
  std::vector<std::pair<std::string, std::string>> schedule2(10000, {"a", "b"});
  auto edges2 = SimulateComparisons(equal, schedule2, 6);
  int a_wins = 0;
  for (const auto& e : edges2)
    a_wins += e.outcome == ComparisonOutcome::kFirstWins;
  CHECK(std::abs(a_wins / 10000.0 - 0.5) < 0.02);
}

TEST_CASE("comparison simulation is seed-deterministic") {
  auto latent = GenLatent(8, LatentDistribution::kUniform, 1);
  std::vector<std::string> ids;
  for (const auto& [id, v] : latent) ids.push_back(id);
  auto schedule = RandomPairSchedule(ids, 6, 2);
  auto e1 = SimulateComparisons(latent, schedule, 3);
  auto e2 = SimulateComparisons(latent, schedule, 3);
  REQUIRE(e1.size() == e2.size());
  for (size_t i = 0; i < e1.size(); ++i) {
    CHECK(e1[i].left == e2[i].left);
    CHECK(e1[i].outcome == e2[i].outcome);
  }
}

TEST_CASE("annotator simulation validates accuracies and respects them") {
  std::vector<ComparisonOutcome> truth(200, ComparisonOutcome::kFirstWins);
  CHECK_THROWS_AS(SimulateAnnotators(truth, {0.2}, 0), ValidationError);
  auto sim = SimulateAnnotators(truth, {1.0}, 0);
  for (const auto& row : sim.labels)
    CHECK(row[0] == ComparisonOutcome::kFirstWins);
  auto noisy = SimulateAnnotators(truth, {0.9}, 1);
  int correct = 0;
  for (const auto& row : noisy.labels)
    correct += row[0] == ComparisonOutcome::kFirstWins;
  CHECK(correct > 160);
  CHECK(correct < 200);
}

TEST_CASE("brute force BT refuses more than 4 items") {
  std::vector<ComparisonEdge> edges;
  for (int i = 0; i < 5; ++i) {
    ComparisonEdge e;
    e.left = "x" + std::to_string(i);
    e.right = "x" + std::to_string((i + 1) % 5);
    edges.push_back(e);
  }
  CHECK_THROWS_AS(BruteForceBt(edges, "x0"), ValidationError);
}

TEST_CASE("brute force BT finds the symmetric optimum") {
  std::vector<ComparisonEdge> edges;
  ComparisonEdge ab;
  ab.left = "A";
  ab.right = "B";
  ab.count = 3;
  ComparisonEdge ba;
  ba.left = "B";
  ba.right = "A";
  ba.count = 3;
  edges = {ab, ba};
  auto oracle = BruteForceBt(edges, "B");
  CHECK(std::abs(oracle.at("A")) <= 0.011);  // within one grid step
}

TEST_CASE("scored-text world embeds the latent signal") {
  auto world = GenScoredTexts(60, 42);
  CHECK(world.items.size() == 60);
  auto again = GenScoredTexts(60, 42);
  for (size_t i = 0; i < world.items.size(); ++i) {
    CHECK(world.items[i].text == again.items[i].text);
  }
  // High-latent items should contain more high-vocabulary words; check via
  // a cheap proxy: latent order correlates with shared-vocabulary overlap.
  auto edges = SeparablePairSchedule(world, 100, 7);
  for (const auto& e : edges) {
    double zl = world.latent.at(e.left), zr = world.latent.at(e.right);
    if (e.outcome == ComparisonOutcome::kFirstWins) CHECK(zl > zr);
    else CHECK(zr > zl);
  }
}

TEST_CASE("world serialization round trip and golden snapshot") {
  auto world = GenScoredTexts(12, 321, 20);
  auto path = std::string("/tmp/textscale_world_roundtrip.jsonl");
  SaveWorldJsonl(world, path);
  auto loaded = LoadWorldJsonl(path);
  CHECK(loaded.seed == world.seed);
  REQUIRE(loaded.items.size() == world.items.size());
  for (size_t i = 0; i < world.items.size(); ++i) {
    CHECK(loaded.items[i].id == world.items[i].id);
    CHECK(loaded.items[i].text == world.items[i].text);
  }
  CHECK(loaded.latent == world.latent);
  // The checked-in golden snapshot pins the generator's output.
  auto golden = LoadWorldJsonl(std::string(TEXTSCALE_FIXTURES_DIR) +
                               "/e2e/golden_world.jsonl");
  REQUIRE(golden.items.size() == world.items.size());
  for (size_t i = 0; i < world.items.size(); ++i) {
    CHECK(golden.items[i].text == world.items[i].text);
  }
  CHECK(golden.latent == world.latent);
}

TEST_CASE("recovery improves with more comparisons per item") {
  // Monotone on average over seeds, per the end-to-end recovery property.
  std::vector<int> budgets = {5, 15, 30};
  std::vector<double> avg_rho(budgets.size(), 0.0);
  const int kSeeds = 10;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto latent = GenLatent(40, LatentDistribution::kNormal, 1000 + seed);
    std::vector<std::string> ids;
    for (const auto& [id, v] : latent) ids.push_back(id);
    for (size_t b = 0; b < budgets.size(); ++b) {
      auto schedule = RandomPairSchedule(ids, budgets[b], 2000 + seed);
      auto edges = SimulateComparisons(latent, schedule, 3000 + seed);
      auto fit = FitBradleyTerry(edges);
      avg_rho[b] += SpearmanRho(latent, fit.lambda) / kSeeds;
    }
  }
  CHECK(avg_rho[0] < avg_rho[1]);
  CHECK(avg_rho[1] < avg_rho[2]);
}
