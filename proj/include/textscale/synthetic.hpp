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

#ifndef TEXTSCALE_SYNTHETIC_HPP_
#define TEXTSCALE_SYNTHETIC_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textscale/bt.hpp"
#include "textscale/graph.hpp"

namespace textscale {

enum class LatentDistribution { kUniform, kBimodal, kNormal };

// Seeded latent scores for items "i000", "i001", ... Bimodal draws from a
// symmetric two-component mixture.
std::map<std::string, double> GenLatent(int n, LatentDistribution dist,
                                        uint64_t seed, double normal_sigma = 1.0);

// Comparison schedules.
std::vector<std::pair<std::string, std::string>> RandomPairSchedule(
    const std::vector<std::string>& ids, int comparisons_per_item,
    uint64_t seed);

// Samples each scheduled comparison FirstWins with probability
// sigma(lambda_left - lambda_right); never produces ties.
std::vector<ComparisonEdge> SimulateComparisons(
    const std::map<std::string, double>& latent,
    const std::vector<std::pair<std::string, std::string>>& schedule,
    uint64_t seed);

// Each annotator reports the true label with its accuracy, otherwise
// uniformly one of the other two classes. Accuracies must exceed 1/3.
struct SimulatedAnnotations {
  std::vector<std::string> pair_ids;
  std::vector<std::string> annotator_ids;
  std::vector<std::vector<ComparisonOutcome>> labels;  // [pair][annotator]
};
SimulatedAnnotations SimulateAnnotators(
    const std::vector<ComparisonOutcome>& truth,
    const std::vector<double>& accuracies, uint64_t seed);

struct BruteForceBtConfig {
  double lo = -5.0;
  double hi = 5.0;
  double step = 0.01;      // initial grid step (finer for 1-2 free items)
  int refine_rounds = 3;   // each round shrinks the step 10x around the best
  double regularization = 0.0;  // same pseudo-count objective as the MM fit
  TiePolicy tie_policy = TiePolicy::kHalfWinEach;
};

// Exhaustive grid-search maximum likelihood over at most 4 items, with the
// reference item's lambda fixed at 0. Refuses larger inputs. Serves as the
// independent oracle for the MM fit.
std::map<std::string, double> BruteForceBt(
    const std::vector<ComparisonEdge>& edges, const std::string& reference_id,
    const BruteForceBtConfig& config = {});

// World with planted latent scores and generated texts whose character
// n-gram features carry the latent signal: each text mixes words from a
// "high" and a "low" vocabulary in a proportion fixed by its latent score.
struct SyntheticWorld {
  std::vector<Item> items;
  std::map<std::string, double> latent;  // in [-1, 1]
  uint64_t seed = 0;
};
SyntheticWorld GenScoredTexts(int n, uint64_t seed, int words_per_text = 60);

// Pairs with deterministic outcomes ordered by latent score. Pairs whose
// latent gap is below min_gap are skipped so the labels stay separable.
std::vector<ComparisonEdge> SeparablePairSchedule(const SyntheticWorld& world,
                                                  int num_pairs, uint64_t seed,
                                                  double min_gap = 0.05);

// JSON Lines world serialization: a header record with the seed, then one
// record per item carrying id, text, and latent score.
void SaveWorldJsonl(const SyntheticWorld& world, const std::string& path);
SyntheticWorld LoadWorldJsonl(const std::string& path);

}  // namespace textscale

#endif  // TEXTSCALE_SYNTHETIC_HPP_
