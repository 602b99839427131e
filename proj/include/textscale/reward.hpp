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

#ifndef TEXTSCALE_REWARD_HPP_
#define TEXTSCALE_REWARD_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "textscale/graph.hpp"

namespace textscale {

struct FeatureSpec {
  int ngram_min = 2;
  int ngram_max = 4;
  int dimensions = 1 << 18;  // must be a power of two
  uint64_t hash_seed = 0x9e3779b97f4a7c15ULL;
  bool lowercase = true;

  void Validate() const;
};

struct SparseVector {
  // (index, value), sorted by index, unique.
  std::vector<std::pair<uint32_t, double>> entries;

  double Dot(const SparseVector& other) const;
};

// Hashed character n-gram counts, L2-normalized. Deterministic given the
// spec; empty text is an error.
SparseVector Featurize(const std::string& text, const FeatureSpec& spec);

struct LinearRewardModel {
  FeatureSpec spec;
  std::vector<double> weights;  // dense, spec.dimensions long
  double bias = 0.0;
};

double ModelScore(const LinearRewardModel& model, const std::string& text);

// -log sigma(r(preferred) - r(dispreferred)).
double PairwiseLoss(const LinearRewardModel& model, const std::string& preferred,
                    const std::string& dispreferred);

enum class TrainObjective { kPairwise, kRegression };

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 10;
  int minibatch = 16;  // 0 = full batch
  double l2 = 0.0;
  uint64_t seed = 0;
  TrainObjective objective = TrainObjective::kPairwise;
  FeatureSpec features;
};

struct TrainingLog {
  std::vector<double> epoch_loss;  // mean per-example training loss
  int skipped_ties = 0;
};

struct TrainResult {
  LinearRewardModel model;
  TrainingLog log;
};

// Pairwise objective: first-order stochastic optimization of the pairwise
// logistic loss over (preferred, dispreferred) texts; tie edges are skipped
// and counted. Deterministic given the seed.
TrainResult TrainPairwise(const std::map<std::string, Item>& items,
                          const std::vector<ComparisonEdge>& edges,
                          const TrainConfig& config);

// Regression objective: mean squared error against per-item targets
// (typically unit-rescaled Bradley-Terry scores).
TrainResult TrainRegression(const std::vector<std::pair<std::string, double>>&
                                texts_and_targets,
                            const TrainConfig& config);

// Versioned JSON persistence with sparse weight encoding.
void SaveModel(const LinearRewardModel& model, const std::string& path);
LinearRewardModel LoadModel(const std::string& path);

}  // namespace textscale

#endif  // TEXTSCALE_REWARD_HPP_
