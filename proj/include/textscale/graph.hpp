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

#ifndef TEXTSCALE_GRAPH_HPP_
#define TEXTSCALE_GRAPH_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace textscale {

struct Item {
  std::string id;
  std::string text;
  std::map<std::string, std::string> meta;
};

enum class ComparisonOutcome { kFirstWins, kSecondWins, kTie };

std::string OutcomeToken(ComparisonOutcome o);                 // "1", "2", "tie"
ComparisonOutcome OutcomeFromToken(const std::string& token);  // throws on junk

struct ComparisonEdge {
  std::string left;
  std::string right;
  ComparisonOutcome outcome = ComparisonOutcome::kFirstWins;
  std::string annotator;  // empty = unattributed
  int count = 1;          // multiplicity of this exact annotation
};

// Items plus directed, possibly tied, possibly multi-annotator comparison
// edges. Immutable after construction; all member functions are const and
// safe to call concurrently.
class ComparisonGraph {
 public:
  ComparisonGraph() = default;

  // Validates ids, non-empty texts, left != right and referential
  // integrity. Throws ValidationError listing every offender.
  static ComparisonGraph Build(std::vector<Item> items,
                               std::vector<ComparisonEdge> edges);

  const std::map<std::string, Item>& items() const { return items_; }
  const std::vector<ComparisonEdge>& edges() const { return edges_; }
  bool empty() const { return items_.empty(); }

  // Distinct unordered item pairs with at least one edge.
  std::set<std::pair<std::string, std::string>> CollapsedPairs() const;

 private:
  std::map<std::string, Item> items_;  // ordered: deterministic iteration
  std::vector<ComparisonEdge> edges_;
};

struct GraphStats {
  int num_items = 0;
  // Total annotated comparisons (edge multiplicities included).
  long long num_pairs = 0;
  // Minimum number of vertices whose removal disconnects the collapsed
  // undirected graph; 0 when already disconnected, n-1 for complete graphs.
  int vertex_connectivity = 0;
  bool connectivity_is_estimate = false;
  double density = 0.0;         // distinct pairs / (n*(n-1)/2)
  double degree_mean = 0.0;     // over the collapsed simple graph
  double degree_std = 0.0;      // population std dev
  double avg_clustering = 0.0;  // mean local clustering coefficient
  bool connected = false;
};

struct StatsOptions {
  // Above this many items the exact max-flow connectivity is replaced by a
  // sampled estimate (min cut over sampled vertex pairs) and the result is
  // flagged via connectivity_is_estimate.
  int exact_connectivity_max_items = 5000;
  int connectivity_samples = 200;
  uint64_t sample_seed = 0;
};

GraphStats ComputeStats(const ComparisonGraph& graph,
                        const StatsOptions& options = {});

struct SplitPlan {
  std::set<std::string> test_items;
  std::set<std::string> train_items;
  std::vector<ComparisonEdge> train_edges;  // both endpoints in train_items
  std::vector<ComparisonEdge> eval_edges;   // >= 1 endpoint in test_items
  uint64_t seed = 0;
};

// Selects the n_test items of highest collapsed degree (ties broken by a
// seeded shuffle, then id order) and partitions the edges.
SplitPlan MakeSplit(const ComparisonGraph& graph, int n_test, uint64_t seed);

struct GrowthTargets {
  double degree_mean = 0.0;
  double avg_clustering = 0.0;
};

struct GrownSubgraph {
  size_t requested_size = 0;
  std::vector<ComparisonEdge> edges;
  double degree_mean = 0.0;
  double avg_clustering = 0.0;
  bool within_tolerance = true;
  std::string violation;  // non-empty iff a constraint could not be met
};

struct GrowthOptions {
  double degree_tolerance = 0.10;
  double clustering_tolerance = 0.15;
  std::optional<GrowthTargets> targets;  // default: fixed from smallest size
};

// Greedily grows nested edge subsets of the requested (ascending) sizes,
// keeping average degree and average clustering close to fixed shared
// targets. Infeasible constraints yield a best-effort subgraph with a
// violation report, never a silent failure.
std::vector<GrownSubgraph> GrowEdgeSequence(const ComparisonGraph& graph,
                                            const std::vector<size_t>& sizes,
                                            uint64_t seed,
                                            const GrowthOptions& options = {});

}  // namespace textscale

#endif  // TEXTSCALE_GRAPH_HPP_
