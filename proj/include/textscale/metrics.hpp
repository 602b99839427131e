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

#ifndef TEXTSCALE_METRICS_HPP_
#define TEXTSCALE_METRICS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "textscale/aggregation.hpp"
#include "textscale/graph.hpp"

namespace textscale {

struct PredictedComparison {
  std::string left;
  std::string right;
  ComparisonOutcome outcome = ComparisonOutcome::kFirstWins;
};

struct AccuracyResult {
  double accuracy = 0.0;
  int used = 0;           // reference edges that entered the fraction
  int excluded_ties = 0;  // reference ties skipped by the default policy
  std::vector<std::string> uncovered;  // reference pairs without a prediction
};

// Exact-match fraction over non-tie reference edges. A prediction for
// (i, j) also covers (j, i) with the outcome flipped. Reference ties are
// excluded unless include_reference_ties is set.
AccuracyResult PairwiseAccuracy(
    const std::vector<PredictedComparison>& predictions,
    const std::vector<ComparisonEdge>& reference,
    bool include_reference_ties = false);

// Spearman rank correlation over the ids shared by both maps, with
// average-rank tie correction. Requires >= 3 shared ids and non-constant
// vectors.
double SpearmanRho(const std::map<std::string, double>& a,
                   const std::map<std::string, double>& b);
double SpearmanRho(const std::vector<double>& a, const std::vector<double>& b);

// Root mean squared error after min-max rescaling each vector to [0, 1]
// independently (a constant vector maps to 0.5 everywhere).
double Rmse(const std::map<std::string, double>& a,
            const std::map<std::string, double>& b);
double Rmse(const std::vector<double>& a, const std::vector<double>& b);

struct BootstrapSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over the resamples
  int resamples = 0;
  int redraws = 0;  // resamples redrawn because the metric was undefined
};

// Resamples unit indices with replacement and summarizes the metric over B
// resamples. The metric receives the resampled indices; if it throws, the
// resample is redrawn a bounded number of times. Deterministic under seed.
BootstrapSummary Bootstrap(
    const std::function<double(const std::vector<size_t>&)>& metric,
    size_t num_units, int num_resamples, uint64_t seed);

struct MetricReport {
  double accuracy = 0.0;
  double spearman_rho = 0.0;
  double rmse = 0.0;
  BootstrapSummary accuracy_boot;
  BootstrapSummary rho_boot;
  BootstrapSummary rmse_boot;
  int bootstrap_resamples = 25;
  uint64_t bootstrap_seed = 0;
};

struct DisagreementRecord {
  std::string left;
  std::string right;
  double d_first;   // score difference under the first method (reference)
  double d_second;  // score difference under the second method
  double magnitude;  // d_first - d_second
  int bin = 0;       // percentile bin of magnitude
};

struct DisagreementConfig {
  int num_bins = 10;
  int sample_per_extreme_bin = 30;
  uint64_t seed = 0;
  double tie_band = 0.0;
  double length_percentile_lo = 0.10;
  double length_percentile_hi = 0.90;
};

struct DisagreementSelection {
  std::vector<DisagreementRecord> sampled;
  size_t items_retained = 0;
  size_t candidate_pairs = 0;
  size_t qualifying_pairs = 0;
  std::string note;
};

// Selects pairs on which two score vectors induce contradicting non-tie
// choices: items filtered to the central text-length percentile band,
// candidate pairs restricted to equal length deciles, qualifying pairs
// binned by the difference-of-differences and sampled from the two extreme
// bins.
DisagreementSelection SelectDisagreementPairs(
    const std::map<std::string, double>& first_scores,
    const std::map<std::string, double>& second_scores,
    const std::map<std::string, Item>& items,
    const DisagreementConfig& config = {});

struct WinRateReport {
  int method_a_wins = 0;
  int neither = 0;
  int method_b_wins = 0;
  int total = 0;
  double share_a = 0.0;
  double share_neither = 0.0;
  double share_b = 0.0;
};

// Per pair, the method whose choice matches the aggregated label wins;
// aggregated ties and invalid labels count as "neither". All pairs present
// in `aggregated` must be covered by both methods.
WinRateReport WinRate(const std::map<std::string, AggregateLabel>& aggregated,
                      const std::map<std::string, ComparisonOutcome>& method_a,
                      const std::map<std::string, ComparisonOutcome>& method_b);

// "0.75±0.01" strings in an aligned text table, one row per method. The
// best value per column is marked '*' and values within one bootstrap
// standard deviation of the best are marked '~'.
struct MethodMetricsRow {
  std::string name;
  MetricReport report;
};
std::string FormatMetricTable(const std::vector<MethodMetricsRow>& rows);

}  // namespace textscale

#endif  // TEXTSCALE_METRICS_HPP_
