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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "textscale/bt.hpp"
#include "textscale/error.hpp"
#include "textscale/rng.hpp"

namespace textscale {
namespace {

std::string ItemId(int i) {
  std::ostringstream s;
  s << "i";
  if (i < 1000) s << (i < 100 ? (i < 10 ? "00" : "0") : "");
  s << i;
  return s.str();
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::map<std::string, double> GenLatent(int n, LatentDistribution dist,
                                        uint64_t seed, double normal_sigma) {
  if (n < 2) throw ValidationError("need at least 2 items to generate latents");
  Rng rng(seed);
  std::map<std::string, double> latent;
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    switch (dist) {
      case LatentDistribution::kUniform:
        v = rng.NextUniform(0.0, 1.0);
        break;
      case LatentDistribution::kBimodal: {
        // Symmetric two-component mixture around the midpoint 0.5.
        bool high = rng.NextDouble() < 0.5;
        v = (high ? 0.75 : 0.25) + 0.08 * rng.NextGaussian();
        break;
      }
      case LatentDistribution::kNormal:
        v = 0.5 + normal_sigma * rng.NextGaussian();
        break;
    }
    latent[ItemId(i)] = v;
  }
  return latent;
}

std::vector<std::pair<std::string, std::string>> RandomPairSchedule(
    const std::vector<std::string>& ids, int comparisons_per_item,
    uint64_t seed) {
  if (ids.size() < 2) throw ValidationError("need at least 2 items to schedule pairs");
  Rng rng(seed);
  std::vector<std::pair<std::string, std::string>> schedule;
  const size_t n = ids.size();
  const size_t total = n * static_cast<size_t>(comparisons_per_item) / 2;
  schedule.reserve(total);
  for (size_t k = 0; k < total; ++k) {
    size_t a = rng.NextBelow(n);
    size_t b = rng.NextBelow(n - 1);
    if (b >= a) ++b;
    schedule.emplace_back(ids[a], ids[b]);
  }
  return schedule;
}

std::vector<ComparisonEdge> SimulateComparisons(
    const std::map<std::string, double>& latent,
    const std::vector<std::pair<std::string, std::string>>& schedule,
    uint64_t seed) {
  Rng rng(seed);
  std::vector<ComparisonEdge> edges;
  edges.reserve(schedule.size());
  for (const auto& [left, right] : schedule) {
    auto it_l = latent.find(left);
    auto it_r = latent.find(right);
    if (it_l == latent.end() || it_r == latent.end()) {
      throw ValidationError("schedule references an item without a latent score");
    }
    double p = Sigmoid(it_l->second - it_r->second);
    ComparisonEdge e;
    e.left = left;
    e.right = right;
    e.outcome = rng.NextDouble() < p ? ComparisonOutcome::kFirstWins
                                     : ComparisonOutcome::kSecondWins;
    edges.push_back(std::move(e));
  }
  return edges;
}

SimulatedAnnotations SimulateAnnotators(
    const std::vector<ComparisonOutcome>& truth,
    const std::vector<double>& accuracies, uint64_t seed) {
  for (double a : accuracies) {
    if (a <= 1.0 / 3.0 || a > 1.0) {
      throw ValidationError(
          "annotator accuracy must lie in (1/3, 1]; below-chance annotators "
          "break identifiability of the simulation");
    }
  }
  static constexpr ComparisonOutcome kClasses[3] = {
      ComparisonOutcome::kFirstWins, ComparisonOutcome::kSecondWins,
      ComparisonOutcome::kTie};
  Rng rng(seed);
  SimulatedAnnotations out;
  for (size_t p = 0; p < truth.size(); ++p) out.pair_ids.push_back("p" + std::to_string(p));
  for (size_t a = 0; a < accuracies.size(); ++a)
    out.annotator_ids.push_back("a" + std::to_string(a));
  out.labels.assign(truth.size(),
                    std::vector<ComparisonOutcome>(accuracies.size(),
                                                   ComparisonOutcome::kTie));
  for (size_t p = 0; p < truth.size(); ++p) {
    for (size_t a = 0; a < accuracies.size(); ++a) {
      if (rng.NextDouble() < accuracies[a]) {
        out.labels[p][a] = truth[p];
      } else {
        // Uniform over the two wrong classes.
        int offset = 1 + static_cast<int>(rng.NextBelow(2));
        int truth_idx = 0;
        for (int c = 0; c < 3; ++c)
          if (kClasses[c] == truth[p]) truth_idx = c;
        out.labels[p][a] = kClasses[(truth_idx + offset) % 3];
      }
    }
  }
  return out;
}

std::map<std::string, double> BruteForceBt(
    const std::vector<ComparisonEdge>& edges, const std::string& reference_id,
    const BruteForceBtConfig& config) {
  std::set<std::string> id_set;
  for (const auto& e : edges) {
    id_set.insert(e.left);
    id_set.insert(e.right);
  }
  if (id_set.size() > 4) {
    throw ValidationError("brute-force BT oracle refuses more than 4 items");
  }
  if (!id_set.count(reference_id)) {
    throw ValidationError("reference item '" + reference_id +
                          "' does not appear in the edges");
  }
  std::vector<std::string> free_ids;
  for (const auto& id : id_set)
    if (id != reference_id) free_ids.push_back(id);
  const int dims = static_cast<int>(free_ids.size());

  // Win counts over ordered pairs, with ties handled like the MM fit.
  std::vector<std::string> ids(id_set.begin(), id_set.end());
  std::map<std::string, int> index_of;
  for (size_t i = 0; i < ids.size(); ++i) index_of[ids[i]] = static_cast<int>(i);
  const int n = static_cast<int>(ids.size());
  std::vector<std::vector<double>> wins(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    int i = index_of.at(e.left), j = index_of.at(e.right);
    double c = e.count;
    switch (e.outcome) {
      case ComparisonOutcome::kFirstWins: wins[i][j] += c; break;
      case ComparisonOutcome::kSecondWins: wins[j][i] += c; break;
      case ComparisonOutcome::kTie:
        if (config.tie_policy == TiePolicy::kHalfWinEach) {
          wins[i][j] += 0.5 * c;
          wins[j][i] += 0.5 * c;
        }
        break;
    }
  }
  if (config.regularization > 0.0) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) wins[i][j] += config.regularization;
  }

  const int ref_idx = index_of.at(reference_id);
  std::vector<int> free_idx;
  for (const auto& id : free_ids) free_idx.push_back(index_of.at(id));

  auto objective = [&](const std::vector<double>& free_lambda) {
    std::vector<double> lambda(n, 0.0);
    lambda[ref_idx] = 0.0;
    for (int d = 0; d < dims; ++d) lambda[free_idx[d]] = free_lambda[d];
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || wins[i][j] == 0.0) continue;
        double diff = lambda[i] - lambda[j];
        double logp = diff >= 0 ? -std::log1p(std::exp(-diff))
                                : diff - std::log1p(std::exp(diff));
        total += wins[i][j] * logp;
      }
    }
    return total;
  };

  if (dims == 0) return {{reference_id, 0.0}};

  // Full grid at the initial step, then successively finer grids around the
  // incumbent. Coarser start for three free coordinates keeps the first
  // sweep tractable.
  double step = config.step;
  if (dims == 3 && step < 0.05) step = 0.05;
  std::vector<double> lo(dims, config.lo), hi(dims, config.hi);
  std::vector<double> best(dims, 0.0);
  double best_value = -std::numeric_limits<double>::infinity();
  for (int round = 0; round <= config.refine_rounds; ++round) {
    std::vector<int> steps(dims);
    for (int d = 0; d < dims; ++d)
      steps[d] = static_cast<int>(std::floor((hi[d] - lo[d]) / step)) + 1;
    std::vector<int> counter(dims, 0);
    std::vector<double> point(dims, 0.0);
    for (;;) {
      for (int d = 0; d < dims; ++d) point[d] = lo[d] + counter[d] * step;
      double value = objective(point);
      if (value > best_value) {
        best_value = value;
        best = point;
      }
      int d = 0;
      while (d < dims && ++counter[d] >= steps[d]) counter[d++] = 0;
      if (d == dims) break;
    }
    for (int dd = 0; dd < dims; ++dd) {
      lo[dd] = std::max(config.lo, best[dd] - step);
      hi[dd] = std::min(config.hi, best[dd] + step);
    }
    step /= 10.0;
  }

  std::map<std::string, double> out;
  out[reference_id] = 0.0;
  for (int d = 0; d < dims; ++d) out[free_ids[d]] = best[d];
  return out;
}

SyntheticWorld GenScoredTexts(int n, uint64_t seed, int words_per_text) {
  if (n < 2) throw ValidationError("need at least 2 items");
  SyntheticWorld world;
  world.seed = seed;
  Rng rng(DeriveSeed(seed, "scored-texts"));

  auto make_word = [&](Rng* r) {
    std::string w(5, 'a');
    for (auto& c : w) c = static_cast<char>('a' + r->NextBelow(26));
    return w;
  };
  // Fixed per-world vocabularies; "high" words signal a high latent score.
  std::vector<std::string> high_vocab, low_vocab, filler;
  Rng vocab_rng(DeriveSeed(seed, "vocab"));
  for (int i = 0; i < 64; ++i) high_vocab.push_back(make_word(&vocab_rng));
  for (int i = 0; i < 64; ++i) low_vocab.push_back(make_word(&vocab_rng));
  for (int i = 0; i < 32; ++i) filler.push_back(make_word(&vocab_rng));

  for (int i = 0; i < n; ++i) {
    double z = rng.NextUniform(-1.0, 1.0);
    int n_high = static_cast<int>(
        std::lround(words_per_text * (1.0 + z) / 2.0));
    n_high = std::clamp(n_high, 0, words_per_text);
    std::vector<std::string> words;
    words.reserve(words_per_text + 8);
    for (int k = 0; k < n_high; ++k)
      words.push_back(high_vocab[rng.NextBelow(high_vocab.size())]);
    for (int k = n_high; k < words_per_text; ++k)
      words.push_back(low_vocab[rng.NextBelow(low_vocab.size())]);
    for (int k = 0; k < 8; ++k)
      words.push_back(filler[rng.NextBelow(filler.size())]);
    rng.Shuffle(&words);
    std::ostringstream text;
    for (size_t k = 0; k < words.size(); ++k) {
      if (k) text << ' ';
      text << words[k];
    }
    Item item;
    item.id = ItemId(i);
    item.text = text.str();
    world.items.push_back(std::move(item));
    world.latent[ItemId(i)] = z;
  }
  return world;
}

std::vector<ComparisonEdge> SeparablePairSchedule(const SyntheticWorld& world,
                                                  int num_pairs, uint64_t seed,
                                                  double min_gap) {
  Rng rng(seed);
  std::vector<ComparisonEdge> edges;
  edges.reserve(num_pairs);
  const size_t n = world.items.size();
  int guard = num_pairs * 50;
  while (static_cast<int>(edges.size()) < num_pairs && guard-- > 0) {
    size_t a = rng.NextBelow(n);
    size_t b = rng.NextBelow(n - 1);
    if (b >= a) ++b;
    const auto& ia = world.items[a];
    const auto& ib = world.items[b];
    double za = world.latent.at(ia.id);
    double zb = world.latent.at(ib.id);
    if (std::abs(za - zb) < min_gap) continue;
    ComparisonEdge e;
    e.left = ia.id;
    e.right = ib.id;
    e.outcome = za > zb ? ComparisonOutcome::kFirstWins
                        : ComparisonOutcome::kSecondWins;
    edges.push_back(std::move(e));
  }
  if (static_cast<int>(edges.size()) < num_pairs) {
    throw ValidationError("could not find enough separable pairs");
  }
  return edges;
}

void SaveWorldJsonl(const SyntheticWorld& world, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write world file: " + path);
  nlohmann::json header;
  header["world_seed"] = world.seed;
  out << header.dump() << "\n";
  for (const auto& item : world.items) {
    nlohmann::json record;
    record["id"] = item.id;
    record["text"] = item.text;
    record["latent"] = world.latent.at(item.id);
    out << record.dump() << "\n";
  }
}

SyntheticWorld LoadWorldJsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open world file: " + path);
  SyntheticWorld world;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto record = nlohmann::json::parse(line);
    if (first) {
      world.seed = record.at("world_seed").get<uint64_t>();
      first = false;
      continue;
    }
    Item item;
    item.id = record.at("id").get<std::string>();
    item.text = record.at("text").get<std::string>();
    world.latent[item.id] = record.at("latent").get<double>();
    world.items.push_back(std::move(item));
  }
  if (first) throw ValidationError("world file is empty: " + path);
  return world;
}

}  // namespace textscale
