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

#ifndef TEXTSCALE_BT_HPP_
#define TEXTSCALE_BT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "textscale/graph.hpp"

namespace textscale {

enum class TiePolicy { kDropTies, kHalfWinEach };

struct BtIdentification {
  enum class Kind { kSumZero, kReferenceItem };
  Kind kind = Kind::kSumZero;
  std::string reference_id;  // used when kind == kReferenceItem

  static BtIdentification SumZero() { return {}; }
  static BtIdentification Reference(std::string id) {
    return {Kind::kReferenceItem, std::move(id)};
  }
};

struct BtConfig {
  // Pseudo-count added to every ordered pair's win count. Keeps the
  // maximizer finite under separation (undefeated items).
  double regularization = 0.01;
  double tol = 1e-8;  // convergence threshold on max |delta lambda|
  int max_iter = 10000;
  TiePolicy tie_policy = TiePolicy::kHalfWinEach;
  BtIdentification identification;
};

struct BtScores {
  std::map<std::string, double> lambda;   // identified per config
  std::map<std::string, double> score01;  // min-max rescaled lambda
  double loglik = 0.0;                    // data log-likelihood (no smoothing)
  int iterations = 0;
  bool converged = false;
  TiePolicy tie_policy = TiePolicy::kHalfWinEach;
};

// Maximum-likelihood Bradley-Terry fit via Hunter's minorization-
// maximization iteration. Deterministic: identical edges and config yield
// bitwise-identical scores. Reaching max_iter sets converged = false rather
// than raising.
BtScores FitBradleyTerry(const std::vector<ComparisonEdge>& edges,
                         const BtConfig& config = {});

// Logistic of lambda_i - lambda_j. P(i>j) + P(j>i) == 1.
double WinProbability(const BtScores& scores, const std::string& i,
                      const std::string& j);

// Sum of log win probabilities over the edges. Ties contribute per the
// policy: dropped, or half a win in each direction.
double LogLikelihood(const std::map<std::string, double>& lambda,
                     const std::vector<ComparisonEdge>& edges,
                     TiePolicy tie_policy = TiePolicy::kHalfWinEach);

// (lambda - min) / (max - min). All-equal input maps every item to 0.5.
std::map<std::string, double> RescaleUnitInterval(
    const std::map<std::string, double>& lambda);

}  // namespace textscale

#endif  // TEXTSCALE_BT_HPP_
