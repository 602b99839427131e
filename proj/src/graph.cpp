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

#include "textscale/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "textscale/error.hpp"
#include "textscale/rng.hpp"

namespace textscale {
namespace {

// Index-based view of the collapsed undirected simple graph.
struct SimpleGraph {
  std::vector<std::string> ids;                    // sorted
  std::unordered_map<std::string, int> index_of;
  std::vector<std::vector<int>> adj;               // sorted neighbor lists
  size_t num_distinct_pairs = 0;
};

SimpleGraph Collapse(const ComparisonGraph& graph) {
  SimpleGraph g;
  g.ids.reserve(graph.items().size());
  for (const auto& [id, item] : graph.items()) g.ids.push_back(id);
  for (size_t i = 0; i < g.ids.size(); ++i) g.index_of[g.ids[i]] = static_cast<int>(i);
  g.adj.resize(g.ids.size());
  std::set<std::pair<int, int>> pairs;
  for (const auto& e : graph.edges()) {
    int a = g.index_of.at(e.left);
    int b = g.index_of.at(e.right);
    if (a > b) std::swap(a, b);
    pairs.emplace(a, b);
  }
  g.num_distinct_pairs = pairs.size();
  for (const auto& [a, b] : pairs) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

bool IsConnected(const SimpleGraph& g) {
  const int n = static_cast<int>(g.ids.size());
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::deque<int> queue = {0};
  seen[0] = 1;
  int visited = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        queue.push_back(v);
      }
    }
  }
  return visited == n;
}

// Unit-capacity max-flow for local vertex connectivity. Each vertex u is
// split into u_in -> u_out with capacity 1; undirected edges become a pair
// of infinite-capacity arcs between the out/in copies.
class VertexFlow {
 public:
  explicit VertexFlow(const SimpleGraph& g) : g_(g) {
    const int n = static_cast<int>(g.ids.size());
    head_.assign(2 * n, std::vector<int>{});
    for (int u = 0; u < n; ++u) AddArc(In(u), Out(u), 1);
    for (int u = 0; u < n; ++u) {
      for (int v : g.adj[u]) {
        if (u < v) {
          AddArc(Out(u), In(v), kInf);
          AddArc(Out(v), In(u), kInf);
        }
      }
    }
    base_cap_ = cap_;
  }

  // Max number of internally vertex-disjoint s-t paths, but stops early
  // once `bound` is reached (callers only need the minimum over pairs).
  int LocalConnectivity(int s, int t, int bound) {
    cap_ = base_cap_;
    int flow = 0;
    while (flow < bound && Augment(Out(s), In(t))) ++flow;
    return flow;
  }

 private:
  static constexpr int kInf = std::numeric_limits<int>::max() / 2;

  static int In(int u) { return 2 * u; }
  static int Out(int u) { return 2 * u + 1; }

  void AddArc(int from, int to, int capacity) {
    head_[from].push_back(static_cast<int>(to_.size()));
    to_.push_back(to);
    cap_.push_back(capacity);
    head_[to].push_back(static_cast<int>(to_.size()));
    to_.push_back(from);
    cap_.push_back(0);
  }

  bool Augment(int source, int sink) {
    std::vector<int> prev_arc(head_.size(), -1);
    std::deque<int> queue = {source};
    prev_arc[source] = -2;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      if (u == sink) break;
      for (int arc : head_[u]) {
        int v = to_[arc];
        if (cap_[arc] > 0 && prev_arc[v] == -1) {
          prev_arc[v] = arc;
          queue.push_back(v);
        }
      }
    }
    if (prev_arc[sink] == -1) return false;
    for (int v = sink; v != source;) {
      int arc = prev_arc[v];
      cap_[arc] -= 1;
      cap_[arc ^ 1] += 1;
      v = to_[arc ^ 1];
    }
    return true;
  }

  const SimpleGraph& g_;
  std::vector<std::vector<int>> head_;
  std::vector<int> to_;
  std::vector<int> cap_;
  std::vector<int> base_cap_;
};

bool Adjacent(const SimpleGraph& g, int u, int v) {
  const auto& nbrs = g.adj[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

// Exact vertex connectivity via Even's scheme: fix a minimum-degree vertex
// v; the connectivity is the minimum cut over {v} x non-neighbors plus all
// non-adjacent pairs of v's neighbors.
int ExactConnectivity(const SimpleGraph& g) {
  const int n = static_cast<int>(g.ids.size());
  if (n <= 1) return 0;
  if (!IsConnected(g)) return 0;
  int v = 0;
  for (int u = 1; u < n; ++u) {
    if (g.adj[u].size() < g.adj[v].size()) v = u;
  }
  size_t total_pairs = 0;
  for (const auto& nbrs : g.adj) total_pairs += nbrs.size();
  if (total_pairs / 2 == static_cast<size_t>(n) * (n - 1) / 2) {
    return n - 1;  // complete graph: no cut exists
  }
  int best = static_cast<int>(g.adj[v].size());
  VertexFlow flow(g);
  for (int w = 0; w < n && best > 0; ++w) {
    if (w == v || Adjacent(g, v, w)) continue;
    best = std::min(best, flow.LocalConnectivity(v, w, best));
  }
  const auto& nbrs = g.adj[v];
  for (size_t i = 0; i < nbrs.size() && best > 0; ++i) {
    for (size_t j = i + 1; j < nbrs.size() && best > 0; ++j) {
      if (Adjacent(g, nbrs[i], nbrs[j])) continue;
      best = std::min(best, flow.LocalConnectivity(nbrs[i], nbrs[j], best));
    }
  }
  return best;
}

// Sampled estimate for large graphs: minimum cut over randomly sampled
// non-adjacent pairs. Upper-bounds the exact value.
int SampledConnectivity(const SimpleGraph& g, int samples, uint64_t seed) {
  const int n = static_cast<int>(g.ids.size());
  if (n <= 1 || !IsConnected(g)) return 0;
  int best = n - 1;
  for (int u = 0; u < n; ++u) {
    best = std::min(best, static_cast<int>(g.adj[u].size()));
  }
  VertexFlow flow(g);
  Rng rng(seed);
  for (int k = 0; k < samples && best > 0; ++k) {
    int s = static_cast<int>(rng.NextBelow(n));
    int t = static_cast<int>(rng.NextBelow(n));
    if (s == t || Adjacent(g, s, t)) continue;
    best = std::min(best, flow.LocalConnectivity(s, t, best));
  }
  return best;
}

double LocalClustering(const SimpleGraph& g, int u) {
  const auto& nbrs = g.adj[u];
  const size_t d = nbrs.size();
  if (d < 2) return 0.0;
  long long closed = 0;
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = i + 1; j < d; ++j) {
      if (Adjacent(g, nbrs[i], nbrs[j])) ++closed;
    }
  }
  return 2.0 * static_cast<double>(closed) / (static_cast<double>(d) * (d - 1));
}

}  // namespace

std::string OutcomeToken(ComparisonOutcome o) {
  switch (o) {
    case ComparisonOutcome::kFirstWins: return "1";
    case ComparisonOutcome::kSecondWins: return "2";
    case ComparisonOutcome::kTie: return "tie";
  }
  return "?";
}

ComparisonOutcome OutcomeFromToken(const std::string& token) {
  if (token == "1") return ComparisonOutcome::kFirstWins;
  if (token == "2") return ComparisonOutcome::kSecondWins;
  if (token == "tie" || token == "0") return ComparisonOutcome::kTie;
  throw ValidationError("unknown comparison outcome token: '" + token + "'");
}

ComparisonGraph ComparisonGraph::Build(std::vector<Item> items,
                                       std::vector<ComparisonEdge> edges) {
  ComparisonGraph g;
  std::vector<std::string> problems;
  for (auto& item : items) {
    std::string id = item.id;
    if (id.empty()) problems.push_back("item with empty id");
    if (item.text.empty()) problems.push_back("item '" + id + "' has empty text");
    if (!g.items_.emplace(id, std::move(item)).second)
      problems.push_back("duplicate item id '" + id + "'");
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.left == e.right)
      problems.push_back("edge " + std::to_string(i) + " is a self-loop on '" +
                         e.left + "'");
    if (!g.items_.count(e.left))
      problems.push_back("edge " + std::to_string(i) + " references unknown id '" +
                         e.left + "'");
    if (!g.items_.count(e.right))
      problems.push_back("edge " + std::to_string(i) + " references unknown id '" +
                         e.right + "'");
    if (e.count < 1)
      problems.push_back("edge " + std::to_string(i) + " has non-positive count");
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid comparison graph (" << problems.size() << " problems):";
    for (const auto& p : problems) msg << "\n  - " << p;
    throw ValidationError(msg.str());
  }
  g.edges_ = std::move(edges);
  return g;
}

std::set<std::pair<std::string, std::string>> ComparisonGraph::CollapsedPairs()
    const {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& e : edges_) {
    auto p = std::minmax(e.left, e.right);
    pairs.emplace(p.first, p.second);
  }
  return pairs;
}

GraphStats ComputeStats(const ComparisonGraph& graph,
                        const StatsOptions& options) {
  if (graph.empty()) throw ValidationError("cannot compute stats of an empty graph");
  SimpleGraph g = Collapse(graph);
  GraphStats stats;
  const int n = static_cast<int>(g.ids.size());
  stats.num_items = n;
  for (const auto& e : graph.edges()) stats.num_pairs += e.count;

  double possible = static_cast<double>(n) * (n - 1) / 2.0;
  stats.density = possible > 0
                      ? static_cast<double>(g.num_distinct_pairs) / possible
                      : 0.0;

  double deg_sum = 0.0, deg_sq_sum = 0.0;
  for (int u = 0; u < n; ++u) {
    double d = static_cast<double>(g.adj[u].size());
    deg_sum += d;
    deg_sq_sum += d * d;
  }
  stats.degree_mean = deg_sum / n;
  double var = deg_sq_sum / n - stats.degree_mean * stats.degree_mean;
  stats.degree_std = std::sqrt(std::max(0.0, var));

  double clustering_sum = 0.0;
  for (int u = 0; u < n; ++u) clustering_sum += LocalClustering(g, u);
  stats.avg_clustering = clustering_sum / n;

  stats.connected = IsConnected(g);
  if (n > options.exact_connectivity_max_items) {
    stats.vertex_connectivity = SampledConnectivity(
        g, options.connectivity_samples, options.sample_seed);
    stats.connectivity_is_estimate = true;
  } else {
    stats.vertex_connectivity = ExactConnectivity(g);
  }
  return stats;
}

SplitPlan MakeSplit(const ComparisonGraph& graph, int n_test, uint64_t seed) {
  const int n = static_cast<int>(graph.items().size());
  if (n_test >= n) {
    throw ValidationError("n_test (" + std::to_string(n_test) +
                          ") must be smaller than the number of items (" +
                          std::to_string(n) + ")");
  }
  if (n_test < 0) throw ValidationError("n_test must be non-negative");
  SimpleGraph g = Collapse(graph);

  // Order candidates by degree descending, degree ties broken by a seeded
  // shuffle and then id order.
  std::vector<int> order(g.ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<size_t> shuffle_rank(g.ids.size());
  {
    std::vector<int> shuffled = order;
    Rng rng(seed);
    rng.Shuffle(&shuffled);
    for (size_t pos = 0; pos < shuffled.size(); ++pos)
      shuffle_rank[shuffled[pos]] = pos;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.adj[a].size() != g.adj[b].size())
      return g.adj[a].size() > g.adj[b].size();
    if (shuffle_rank[a] != shuffle_rank[b])
      return shuffle_rank[a] < shuffle_rank[b];
    return g.ids[a] < g.ids[b];
  });

  SplitPlan plan;
  plan.seed = seed;
  for (int i = 0; i < n_test; ++i) plan.test_items.insert(g.ids[order[i]]);
  for (const auto& [id, item] : graph.items()) {
    if (!plan.test_items.count(id)) plan.train_items.insert(id);
  }
  for (const auto& e : graph.edges()) {
    if (plan.test_items.count(e.left) || plan.test_items.count(e.right)) {
      plan.eval_edges.push_back(e);
    } else {
      plan.train_edges.push_back(e);
    }
  }
  return plan;
}

namespace {

// Incremental statistics of a growing edge subset. Average degree and
// clustering are computed over vertices incident to at least one selected
// edge.
class GrowthState {
 public:
  explicit GrowthState(int n) : adj_(n), degree_(n, 0), triangles_(n, 0) {}

  double degree_mean() const {
    return active_ == 0 ? 0.0 : 2.0 * pairs_ / active_;
  }
  double avg_clustering() const {
    return active_ == 0 ? 0.0 : clustering_sum_ / active_;
  }
  bool Contains(int u, int v) const { return adj_[u].count(v) > 0; }

  void Add(int u, int v) {
    std::vector<int> common;
    for (int w : adj_[u])
      if (adj_[v].count(w)) common.push_back(w);
    if (degree_[u] == 0) ++active_;
    if (degree_[v] == 0) ++active_;
    clustering_sum_ -= Local(u) + Local(v);
    for (int w : common) clustering_sum_ -= Local(w);
    adj_[u].insert(v);
    adj_[v].insert(u);
    ++degree_[u];
    ++degree_[v];
    ++pairs_;
    for (int w : common) {
      ++triangles_[u];
      ++triangles_[v];
      ++triangles_[w];
    }
    clustering_sum_ += Local(u) + Local(v);
    for (int w : common) clustering_sum_ += Local(w);
  }

  // Statistics as they would be after adding (u, v), without mutating.
  std::pair<double, double> Preview(int u, int v) const {
    int common = 0;
    const auto& small = adj_[u].size() < adj_[v].size() ? adj_[u] : adj_[v];
    const auto& large = adj_[u].size() < adj_[v].size() ? adj_[v] : adj_[u];
    double delta_c = 0.0;
    for (int w : small) {
      if (large.count(w)) {
        ++common;
        delta_c += LocalWith(w, degree_[w], triangles_[w] + 1) - Local(w);
      }
    }
    int active = active_ + (degree_[u] == 0) + (degree_[v] == 0);
    double c_sum = clustering_sum_ + delta_c - Local(u) - Local(v) +
                   LocalWith(u, degree_[u] + 1, triangles_[u] + common) +
                   LocalWith(v, degree_[v] + 1, triangles_[v] + common);
    double deg_mean = 2.0 * (pairs_ + 1) / active;
    return {deg_mean, c_sum / active};
  }

 private:
  double Local(int u) const { return LocalWith(u, degree_[u], triangles_[u]); }
  static double LocalWith(int /*u*/, int degree, long long triangles) {
    if (degree < 2) return 0.0;
    return 2.0 * static_cast<double>(triangles) /
           (static_cast<double>(degree) * (degree - 1));
  }

  std::vector<std::unordered_set<int>> adj_;
  std::vector<int> degree_;
  std::vector<long long> triangles_;
  long long pairs_ = 0;
  int active_ = 0;
  double clustering_sum_ = 0.0;
};

}  // namespace

std::vector<GrownSubgraph> GrowEdgeSequence(const ComparisonGraph& graph,
                                            const std::vector<size_t>& sizes,
                                            uint64_t seed,
                                            const GrowthOptions& options) {
  if (sizes.empty()) return {};
  for (size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] < sizes[i - 1])
      throw ValidationError("grow_edge_sequence sizes must be ascending");
  }
  if (sizes.back() > graph.edges().size()) {
    throw ValidationError("requested subset size " + std::to_string(sizes.back()) +
                          " exceeds edge count " +
                          std::to_string(graph.edges().size()));
  }

  SimpleGraph g = Collapse(graph);
  const size_t num_edges = graph.edges().size();

  // Targets: supplied, or the full graph's statistics provisionally, fixed
  // to the achieved statistics of the smallest prefix afterwards.
  GrowthTargets target;
  bool fix_from_smallest = !options.targets.has_value();
  if (options.targets) {
    target = *options.targets;
  } else {
    GraphStats full = ComputeStats(graph);
    target.degree_mean = full.degree_mean;
    target.avg_clustering = full.avg_clustering;
  }

  Rng rng(seed);
  std::vector<double> priority(num_edges);
  for (auto& p : priority) p = rng.NextDouble();

  GrowthState state(static_cast<int>(g.ids.size()));
  std::vector<char> used(num_edges, 0);
  std::vector<ComparisonEdge> selected;
  selected.reserve(sizes.back());

  auto score_candidate = [&](size_t e) {
    const auto& edge = graph.edges()[e];
    int u = g.index_of.at(edge.left);
    int v = g.index_of.at(edge.right);
    // Duplicate annotations of an already-selected pair leave the collapsed
    // statistics unchanged.
    auto [dm, cl] = state.Contains(u, v)
                        ? std::make_pair(state.degree_mean(), state.avg_clustering())
                        : state.Preview(u, v);
    double dev_d = target.degree_mean > 0
                       ? std::abs(dm - target.degree_mean) / target.degree_mean
                       : std::abs(dm);
    double dev_c = target.avg_clustering > 0
                       ? std::abs(cl - target.avg_clustering) / target.avg_clustering
                       : std::abs(cl);
    return std::max(dev_d / options.degree_tolerance,
                    dev_c / options.clustering_tolerance);
  };

  std::vector<GrownSubgraph> results;
  for (size_t size : sizes) {
    while (selected.size() < size) {
      double best_score = std::numeric_limits<double>::infinity();
      double best_priority = 2.0;
      size_t best = num_edges;
      for (size_t e = 0; e < num_edges; ++e) {
        if (used[e]) continue;
        double s = score_candidate(e);
        if (s < best_score ||
            (s == best_score && priority[e] < best_priority)) {
          best_score = s;
          best_priority = priority[e];
          best = e;
        }
      }
      const auto& edge = graph.edges()[best];
      used[best] = 1;
      int u = g.index_of.at(edge.left);
      int v = g.index_of.at(edge.right);
      if (!state.Contains(u, v)) state.Add(u, v);
      selected.push_back(edge);
    }

    GrownSubgraph out;
    out.requested_size = size;
    out.edges = selected;
    out.degree_mean = state.degree_mean();
    out.avg_clustering = state.avg_clustering();
    if (fix_from_smallest && results.empty()) {
      target.degree_mean = out.degree_mean;
      target.avg_clustering = out.avg_clustering;
    }
    double dev_d = target.degree_mean > 0
                       ? std::abs(out.degree_mean - target.degree_mean) /
                             target.degree_mean
                       : std::abs(out.degree_mean);
    double dev_c =
        target.avg_clustering > 0
            ? std::abs(out.avg_clustering - target.avg_clustering) /
                  target.avg_clustering
            : std::abs(out.avg_clustering);
    std::ostringstream violation;
    if (dev_d > options.degree_tolerance) {
      violation << "average degree " << out.degree_mean << " deviates "
                << dev_d * 100 << "% from target " << target.degree_mean << "; ";
    }
    if (dev_c > options.clustering_tolerance) {
      violation << "average clustering " << out.avg_clustering << " deviates "
                << dev_c * 100 << "% from target " << target.avg_clustering;
    }
    out.violation = violation.str();
    out.within_tolerance = out.violation.empty();
    results.push_back(std::move(out));
  }
  return results;
}

}  // namespace textscale
