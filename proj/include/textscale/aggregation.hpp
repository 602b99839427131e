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

#ifndef TEXTSCALE_AGGREGATION_HPP_
#define TEXTSCALE_AGGREGATION_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textscale/graph.hpp"

namespace textscale {

// Pairwise labels from multiple annotators; cells may be missing.
struct AnnotationMatrix {
  std::vector<std::string> pair_ids;
  std::vector<std::string> annotator_ids;
  // labels[pair][annotator]
  std::vector<std::vector<std::optional<ComparisonOutcome>>> labels;

  void Validate() const;  // every row needs >= 1 label
};

enum class AggregateLabel { kFirst, kSecond, kTie, kInvalid };

std::string AggregateLabelToken(AggregateLabel label);
AggregateLabel AggregateLabelFromToken(const std::string& token);

// Strict majority (> 50% of the present labels); anything else is Invalid.
AggregateLabel MajorityVote(
    const std::vector<std::optional<ComparisonOutcome>>& row);

struct DsConfig {
  int max_iter = 500;
  double tol = 1e-7;        // max posterior change
  double smoothing = 0.01;  // additive smoothing in the M-step
  uint64_t seed = 0;        // recorded; the EM itself is deterministic
};

struct DsEstimate {
  std::array<double, 3> class_priors{};  // First, Second, Tie
  // Row-stochastic 3x3 confusion matrix per annotator: [true][reported].
  std::map<std::string, std::array<std::array<double, 3>, 3>> confusion;
  std::vector<std::array<double, 3>> posteriors;  // per pair
  std::vector<double> posterior_entropy;          // natural log, in [0, log 3]
  std::map<std::string, double> annotator_ability;  // mean confusion diagonal
  std::vector<AggregateLabel> map_labels;           // argmax posterior per pair
  std::vector<double> loglik_trace;  // observed-data loglik per iteration
  int iterations = 0;
  bool converged = false;
};

// Dawid-Skene per-annotator model fitted with EM. Posteriors initialize
// from per-row label frequencies; the M-step re-estimates priors and
// confusion matrices with additive smoothing.
DsEstimate FitDawidSkene(const AnnotationMatrix& matrix,
                         const DsConfig& config = {});

enum class AlphaLevel { kNominal, kOrdinal, kInterval };

// Krippendorff's alpha via the coincidence-matrix formulation; missing
// values are handled by pairable-value weighting. Ratings are numeric
// (nominal categories compare by exact value).
double KrippendorffAlpha(
    const std::vector<std::vector<std::optional<double>>>& ratings,
    AlphaLevel level);

}  // namespace textscale

#endif  // TEXTSCALE_AGGREGATION_HPP_
