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

#include "textscale/reward.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "json.hpp"
#include "textscale/error.hpp"
#include "textscale/rng.hpp"

namespace textscale {
namespace {

using nlohmann::json;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(-m)), stable for both signs of m.
double SoftplusNeg(double margin) {
  return margin >= 0 ? std::log1p(std::exp(-margin))
                     : -margin + std::log1p(std::exp(margin));
}

double SparseDot(const std::vector<double>& dense, const SparseVector& sparse) {
  double total = 0.0;
  for (const auto& [idx, value] : sparse.entries) total += dense[idx] * value;
  return total;
}

// Weights kept behind a global multiplicative scale so L2 decay stays O(1)
// per step; effective weight = scale * stored.
struct ScaledWeights {
  std::vector<double> stored;
  double scale = 1.0;

  explicit ScaledWeights(int dims) : stored(dims, 0.0) {}

  double Dot(const SparseVector& features) const {
    return scale * SparseDot(stored, features);
  }
  void Decay(double factor) {
    scale *= factor;
    if (scale < 1e-6) Flush();
  }
  void Add(const SparseVector& features, double step) {
    for (const auto& [idx, value] : features.entries)
      stored[idx] += step * value / scale;
  }
  void Flush() {
    for (auto& w : stored) w *= scale;
    scale = 1.0;
  }
};

}  // namespace

void FeatureSpec::Validate() const {
  if (ngram_min < 1 || ngram_max < ngram_min)
    throw ValidationError("invalid n-gram range");
  if (dimensions < 2 || (dimensions & (dimensions - 1)) != 0)
    throw ValidationError("feature dimensionality must be a power of two");
}

double SparseVector::Dot(const SparseVector& other) const {
  double total = 0.0;
  size_t i = 0, j = 0;
  while (i < entries.size() && j < other.entries.size()) {
    if (entries[i].first < other.entries[j].first) {
      ++i;
    } else if (entries[i].first > other.entries[j].first) {
      ++j;
    } else {
      total += entries[i].second * other.entries[j].second;
      ++i;
      ++j;
    }
  }
  return total;
}

SparseVector Featurize(const std::string& text, const FeatureSpec& spec) {
  spec.Validate();
  if (text.empty()) throw ValidationError("cannot featurize empty text");
  std::string normalized = text;
  if (spec.lowercase) {
    for (auto& c : normalized)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  const uint32_t mask = static_cast<uint32_t>(spec.dimensions - 1);
  std::unordered_map<uint32_t, double> counts;
  const size_t len = normalized.size();
  for (int n = spec.ngram_min; n <= spec.ngram_max; ++n) {
    if (static_cast<size_t>(n) > len) break;
    for (size_t start = 0; start + n <= len; ++start) {
      uint64_t h = Fnv1a64(normalized.substr(start, n),
                           spec.hash_seed ^ static_cast<uint64_t>(n));
      counts[static_cast<uint32_t>(h) & mask] += 1.0;
    }
  }
  if (counts.empty())
    throw ValidationError("text too short for the configured n-gram range");
  SparseVector vec;
  vec.entries.assign(counts.begin(), counts.end());
  std::sort(vec.entries.begin(), vec.entries.end());
  double norm = 0.0;
  for (const auto& [idx, c] : vec.entries) norm += c * c;
  norm = std::sqrt(norm);
  for (auto& [idx, c] : vec.entries) c /= norm;
  return vec;
}

double ModelScore(const LinearRewardModel& model, const std::string& text) {
  SparseVector features = Featurize(text, model.spec);
  return SparseDot(model.weights, features) + model.bias;
}

double PairwiseLoss(const LinearRewardModel& model, const std::string& preferred,
                    const std::string& dispreferred) {
  double margin = ModelScore(model, preferred) - ModelScore(model, dispreferred);
  return SoftplusNeg(margin);
}

namespace {

struct PairExample {
  SparseVector preferred;
  SparseVector dispreferred;
};

struct RegressionExample {
  SparseVector features;
  double target;
};

template <typename Example, typename LossGrad>
TrainResult RunSgd(std::vector<Example> examples, const TrainConfig& config,
                   const LossGrad& loss_grad, int skipped_ties) {
  if (config.learning_rate <= 0) throw ValidationError("learning rate must be positive");
  if (config.epochs < 1) throw ValidationError("epochs must be >= 1");
  config.features.Validate();
  if (examples.empty()) throw ValidationError("no training examples");

  ScaledWeights weights(config.features.dimensions);
  double bias = 0.0;
  TrainResult result;
  result.log.skipped_ties = skipped_ties;

  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t batch = config.minibatch <= 0
                           ? examples.size()
                           : static_cast<size_t>(config.minibatch);
  Rng rng(DeriveSeed(config.seed, "train"));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(&order);
    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size(); start += batch) {
      size_t stop = std::min(order.size(), start + batch);
      // Accumulate minibatch gradient as (example, coefficient) pairs.
      std::vector<std::pair<const SparseVector*, double>> grads;
      double bias_grad = 0.0;
      for (size_t k = start; k < stop; ++k) {
        epoch_loss += loss_grad(examples[order[k]], weights, bias, &grads,
                                &bias_grad);
      }
      double step = config.learning_rate / static_cast<double>(stop - start);
      if (config.l2 > 0.0) weights.Decay(1.0 - config.learning_rate * config.l2);
      for (const auto& [vec, coeff] : grads) weights.Add(*vec, -step * coeff);
      bias -= step * bias_grad;
    }
    if (!std::isfinite(epoch_loss)) {
      throw Error("training aborted: non-finite loss at epoch " +
                  std::to_string(epoch));
    }
    result.log.epoch_loss.push_back(epoch_loss /
                                    static_cast<double>(examples.size()));
  }

  weights.Flush();
  result.model.spec = config.features;
  result.model.weights = std::move(weights.stored);
  result.model.bias = bias;
  return result;
}

}  // namespace

TrainResult TrainPairwise(const std::map<std::string, Item>& items,
                          const std::vector<ComparisonEdge>& edges,
                          const TrainConfig& config) {
  if (config.objective != TrainObjective::kPairwise)
    throw ValidationError("TrainPairwise requires the pairwise objective");
  std::vector<PairExample> examples;
  int skipped_ties = 0;
  // Feature vectors computed once per item.
  std::map<std::string, SparseVector> features;
  auto featurize_item = [&](const std::string& id) -> const SparseVector& {
    auto it = features.find(id);
    if (it != features.end()) return it->second;
    auto item = items.find(id);
    if (item == items.end())
      throw ValidationError("edge references unknown item '" + id + "'");
    return features.emplace(id, Featurize(item->second.text, config.features))
        .first->second;
  };
  for (const auto& e : edges) {
    if (e.outcome == ComparisonOutcome::kTie) {
      skipped_ties += e.count;
      continue;
    }
    const std::string& winner =
        e.outcome == ComparisonOutcome::kFirstWins ? e.left : e.right;
    const std::string& loser =
        e.outcome == ComparisonOutcome::kFirstWins ? e.right : e.left;
    for (int c = 0; c < e.count; ++c) {
      examples.push_back({featurize_item(winner), featurize_item(loser)});
    }
  }
  if (examples.empty()) {
    throw ValidationError(
        "no trainable pairs: every edge is a tie or the edge list is empty");
  }
  auto loss_grad = [](const PairExample& ex, const ScaledWeights& w, double bias,
                      std::vector<std::pair<const SparseVector*, double>>* grads,
                      double* bias_grad) {
    (void)bias;
    (void)bias_grad;  // bias cancels in the margin
    double margin = w.Dot(ex.preferred) - w.Dot(ex.dispreferred);
    double coeff = -(1.0 - Sigmoid(margin));  // d loss / d margin
    grads->emplace_back(&ex.preferred, coeff);
    grads->emplace_back(&ex.dispreferred, -coeff);
    return SoftplusNeg(margin);
  };
  return RunSgd(std::move(examples), config, loss_grad, skipped_ties);
}

TrainResult TrainRegression(
    const std::vector<std::pair<std::string, double>>& texts_and_targets,
    const TrainConfig& config) {
  if (config.objective != TrainObjective::kRegression)
    throw ValidationError("TrainRegression requires the regression objective");
  std::vector<RegressionExample> examples;
  for (const auto& [text, target] : texts_and_targets) {
    if (!std::isfinite(target))
      throw ValidationError("regression target is not finite");
    examples.push_back({Featurize(text, config.features), target});
  }
  auto loss_grad = [](const RegressionExample& ex, const ScaledWeights& w,
                      double bias,
                      std::vector<std::pair<const SparseVector*, double>>* grads,
                      double* bias_grad) {
    double prediction = w.Dot(ex.features) + bias;
    double residual = prediction - ex.target;
    grads->emplace_back(&ex.features, residual);
    *bias_grad += residual;
    return 0.5 * residual * residual;
  };
  return RunSgd(std::move(examples), config, loss_grad, 0);
}

void SaveModel(const LinearRewardModel& model, const std::string& path) {
  json doc;
  doc["format"] = "textscale-linear-reward";
  doc["version"] = 1;
  doc["spec"] = {{"ngram_min", model.spec.ngram_min},
                 {"ngram_max", model.spec.ngram_max},
                 {"dimensions", model.spec.dimensions},
                 {"hash_seed", model.spec.hash_seed},
                 {"lowercase", model.spec.lowercase}};
  doc["bias"] = model.bias;
  json weights = json::array();
  for (size_t i = 0; i < model.weights.size(); ++i) {
    if (model.weights[i] != 0.0) {
      weights.push_back(json::array({i, model.weights[i]}));
    }
  }
  doc["weights"] = std::move(weights);
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path);
  out << doc.dump() << "\n";
}

LinearRewardModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file: " + path);
  json doc = json::parse(in);
  if (doc.value("format", "") != "textscale-linear-reward" ||
      doc.value("version", 0) != 1) {
    throw ValidationError("unrecognized model file format: " + path);
  }
  LinearRewardModel model;
  const auto& spec = doc.at("spec");
  model.spec.ngram_min = spec.at("ngram_min").get<int>();
  model.spec.ngram_max = spec.at("ngram_max").get<int>();
  model.spec.dimensions = spec.at("dimensions").get<int>();
  model.spec.hash_seed = spec.at("hash_seed").get<uint64_t>();
  model.spec.lowercase = spec.at("lowercase").get<bool>();
  model.spec.Validate();
  model.bias = doc.at("bias").get<double>();
  model.weights.assign(model.spec.dimensions, 0.0);
  for (const auto& entry : doc.at("weights")) {
    model.weights.at(entry.at(0).get<size_t>()) = entry.at(1).get<double>();
  }
  return model;
}

}  // namespace textscale
