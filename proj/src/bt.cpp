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

#include "textscale/bt.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "textscale/error.hpp"

namespace textscale {
namespace {

struct WinData {
  std::vector<std::string> ids;  // sorted
  std::unordered_map<std::string, int> index_of;
  // Sparse data win counts for ordered pairs that actually occur.
  std::unordered_map<int64_t, double> wins;  // key i * n + j -> wins of i over j
  std::vector<double> total_wins;            // data wins per item

  int64_t Key(int i, int j) const {
    return static_cast<int64_t>(i) * ids.size() + j;
  }
};

WinData BuildWinData(const std::vector<ComparisonEdge>& edges,
                     TiePolicy tie_policy) {
  if (edges.empty()) throw ValidationError("cannot fit Bradley-Terry on an empty edge list");
  WinData data;
  {
    std::set<std::string> ids;
    for (const auto& e : edges) {
      ids.insert(e.left);
      ids.insert(e.right);
    }
    data.ids.assign(ids.begin(), ids.end());
  }
  for (size_t i = 0; i < data.ids.size(); ++i)
    data.index_of[data.ids[i]] = static_cast<int>(i);
  data.total_wins.assign(data.ids.size(), 0.0);

  std::vector<double> effective(data.ids.size(), 0.0);
  auto add_win = [&](int i, int j, double w) {
    data.wins[data.Key(i, j)] += w;
    data.total_wins[i] += w;
    effective[i] += w;
    effective[j] += w;
  };
  for (const auto& e : edges) {
    int i = data.index_of.at(e.left);
    int j = data.index_of.at(e.right);
    double c = e.count;
    switch (e.outcome) {
      case ComparisonOutcome::kFirstWins: add_win(i, j, c); break;
      case ComparisonOutcome::kSecondWins: add_win(j, i, c); break;
      case ComparisonOutcome::kTie:
        if (tie_policy == TiePolicy::kHalfWinEach) {
          add_win(i, j, 0.5 * c);
          add_win(j, i, 0.5 * c);
        }
        break;
    }
  }
  std::vector<std::string> orphans;
  for (size_t i = 0; i < data.ids.size(); ++i) {
    if (effective[i] == 0.0) orphans.push_back(data.ids[i]);
  }
  if (!orphans.empty()) {
    std::ostringstream msg;
    msg << "items with zero effective comparisons after tie handling:";
    for (const auto& id : orphans) msg << " '" << id << "'";
    throw ValidationError(msg.str());
  }
  return data;
}

void Identify(std::vector<double>* gamma, const BtIdentification& ident,
              const WinData& data) {
  const size_t n = gamma->size();
  if (ident.kind == BtIdentification::Kind::kReferenceItem) {
    auto it = data.index_of.find(ident.reference_id);
    if (it == data.index_of.end()) {
      throw ValidationError("reference item '" + ident.reference_id +
                            "' does not appear in the edges");
    }
    double ref = (*gamma)[it->second];
    for (auto& g : *gamma) g /= ref;
  } else {
    // Geometric mean 1  <=>  sum of lambdas 0.
    double log_sum = 0.0;
    for (double g : *gamma) log_sum += std::log(g);
    double scale = std::exp(log_sum / static_cast<double>(n));
    for (auto& g : *gamma) g /= scale;
  }
}

}  // namespace

BtScores FitBradleyTerry(const std::vector<ComparisonEdge>& edges,
                         const BtConfig& config) {
  if (config.tol <= 0) throw ValidationError("tol must be positive");
  if (config.max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (config.regularization < 0)
    throw ValidationError("regularization must be non-negative");

  WinData data = BuildWinData(edges, config.tie_policy);
  const size_t n = data.ids.size();
  const double eps = config.regularization;

  std::vector<double> gamma(n, 1.0), next(n, 0.0), lambda(n, 0.0);
  Identify(&gamma, config.identification, data);
  for (size_t i = 0; i < n; ++i) lambda[i] = std::log(gamma[i]);

  // n_ij = w_ij + w_ji, kept sparse over the pairs that occur in the data.
  std::vector<std::unordered_map<int, double>> n_ij(n);
  for (const auto& [key, w] : data.wins) {
    int i = static_cast<int>(key / static_cast<int64_t>(n));
    int j = static_cast<int>(key % static_cast<int64_t>(n));
    n_ij[i][j] += w;
    n_ij[j][i] += w;
  }

  BtScores scores;
  int iter = 0;
  bool converged = false;
  for (; iter < config.max_iter; ++iter) {
    // Hunter's MM step: gamma_i <- W_i / sum_j n_ij / (gamma_i + gamma_j),
    // with the epsilon pseudo-count contributing eps to every ordered pair.
    for (size_t i = 0; i < n; ++i) {
      double denom = 0.0;
      for (const auto& [j, w] : n_ij[i]) {
        denom += w / (gamma[i] + gamma[j]);
      }
      double wins_i = data.total_wins[i];
      if (eps > 0.0) {
        wins_i += eps * static_cast<double>(n - 1);
        for (size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          denom += 2.0 * eps / (gamma[i] + gamma[j]);
        }
      }
      next[i] = denom > 0 ? wins_i / denom : gamma[i];
      next[i] = std::clamp(next[i], 1e-300, 1e300);
    }
    Identify(&next, config.identification, data);
    double max_delta = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double l = std::log(next[i]);
      max_delta = std::max(max_delta, std::abs(l - lambda[i]));
      lambda[i] = l;
    }
    gamma.swap(next);
    if (max_delta < config.tol) {
      converged = true;
      ++iter;
      break;
    }
  }

  scores.iterations = iter;
  scores.converged = converged;
  scores.tie_policy = config.tie_policy;
  for (size_t i = 0; i < n; ++i) scores.lambda[data.ids[i]] = lambda[i];
  scores.score01 = RescaleUnitInterval(scores.lambda);
  scores.loglik = LogLikelihood(scores.lambda, edges, config.tie_policy);
  return scores;
}

double WinProbability(const BtScores& scores, const std::string& i,
                      const std::string& j) {
  auto it_i = scores.lambda.find(i);
  auto it_j = scores.lambda.find(j);
  if (it_i == scores.lambda.end())
    throw ValidationError("unknown item id '" + i + "'");
  if (it_j == scores.lambda.end())
    throw ValidationError("unknown item id '" + j + "'");
  double diff = it_i->second - it_j->second;
  return 1.0 / (1.0 + std::exp(-diff));
}

double LogLikelihood(const std::map<std::string, double>& lambda,
                     const std::vector<ComparisonEdge>& edges,
                     TiePolicy tie_policy) {
  auto log_p = [&](const std::string& winner, const std::string& loser) {
    auto it_w = lambda.find(winner);
    auto it_l = lambda.find(loser);
    if (it_w == lambda.end())
      throw ValidationError("unknown item id '" + winner + "'");
    if (it_l == lambda.end())
      throw ValidationError("unknown item id '" + loser + "'");
    double diff = it_w->second - it_l->second;
    // log sigma(diff), stable for large |diff|.
    return diff >= 0 ? -std::log1p(std::exp(-diff))
                     : diff - std::log1p(std::exp(diff));
  };
  double total = 0.0;
  for (const auto& e : edges) {
    double c = e.count;
    switch (e.outcome) {
      case ComparisonOutcome::kFirstWins: total += c * log_p(e.left, e.right); break;
      case ComparisonOutcome::kSecondWins: total += c * log_p(e.right, e.left); break;
      case ComparisonOutcome::kTie:
        if (tie_policy == TiePolicy::kHalfWinEach) {
          total += 0.5 * c * (log_p(e.left, e.right) + log_p(e.right, e.left));
        }
        break;
    }
  }
  return total;
}

std::map<std::string, double> RescaleUnitInterval(
    const std::map<std::string, double>& lambda) {
  if (lambda.empty()) throw ValidationError("cannot rescale an empty score map");
  double lo = lambda.begin()->second, hi = lambda.begin()->second;
  for (const auto& [id, v] : lambda) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::map<std::string, double> out;
  if (hi == lo) {
    // Degenerate spread: every item sits at the midpoint.
    for (const auto& [id, v] : lambda) out[id] = 0.5;
    return out;
  }
  for (const auto& [id, v] : lambda) out[id] = (v - lo) / (hi - lo);
  return out;
}

}  // namespace textscale
