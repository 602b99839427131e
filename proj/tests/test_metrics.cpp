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

#include "textscale/metrics.hpp"

#include <cmath>

#include "doctest.h"
#include "textscale/error.hpp"
#include "textscale/rng.hpp"

using namespace textscale;

namespace {

ComparisonEdge Edge(const std::string& l, const std::string& r,
                    ComparisonOutcome o) {
  ComparisonEdge e;
  e.left = l;
  e.right = r;
  e.outcome = o;
  return e;
}

}  // namespace

TEST_CASE("accuracy: identical, inverted, and partial") {
  std::vector<ComparisonEdge> reference = {
      Edge("a", "b", ComparisonOutcome::kFirstWins),
      Edge("b", "c", ComparisonOutcome::kSecondWins),
      Edge("c", "d", ComparisonOutcome::kFirstWins),
      Edge("a", "d", ComparisonOutcome::kFirstWins)};
  std::vector<PredictedComparison> same;
  for (const auto& e : reference) same.push_back({e.left, e.right, e.outcome});
  CHECK(PairwiseAccuracy(same, reference).accuracy == doctest::Approx(1.0));

  std::vector<PredictedComparison> inverted;
  for (const auto& e : reference) {
    inverted.push_back({e.left, e.right,
                        e.outcome == ComparisonOutcome::kFirstWins
                            ? ComparisonOutcome::kSecondWins
                            : ComparisonOutcome::kFirstWins});
  }
  CHECK(PairwiseAccuracy(inverted, reference).accuracy == doctest::Approx(0.0));

  auto three_of_four = same;
  three_of_four[3].outcome = ComparisonOutcome::kSecondWins;
  CHECK(PairwiseAccuracy(three_of_four, reference).accuracy ==
        doctest::Approx(0.75));
}

TEST_CASE("accuracy respects pair orientation") {
  std::vector<ComparisonEdge> reference = {
      Edge("a", "b", ComparisonOutcome::kFirstWins)};
  // Prediction stated with the pair flipped.
  std::vector<PredictedComparison> flipped = {
      {"b", "a", ComparisonOutcome::kSecondWins}};
  CHECK(PairwiseAccuracy(flipped, reference).accuracy == doctest::Approx(1.0));
}

TEST_CASE("accuracy excludes reference ties by default and reports coverage") {
  std::vector<ComparisonEdge> reference = {
      Edge("a", "b", ComparisonOutcome::kFirstWins),
      Edge("b", "c", ComparisonOutcome::kTie),
      Edge("x", "y", ComparisonOutcome::kFirstWins)};
  std::vector<PredictedComparison> predictions = {
      {"a", "b", ComparisonOutcome::kFirstWins}};
  auto result = PairwiseAccuracy(predictions, reference);
  CHECK(result.used == 1);
  CHECK(result.excluded_ties == 1);
  REQUIRE(result.uncovered.size() == 1);
  CHECK(result.uncovered[0] == "x/y");

  std::vector<ComparisonEdge> all_ties = {Edge("a", "b", ComparisonOutcome::kTie)};
  CHECK_THROWS_AS(PairwiseAccuracy(predictions, all_ties), ValidationError);
}

TEST_CASE("accuracy antisymmetry on tie-free references") {
  Rng rng(14);
  std::vector<ComparisonEdge> reference;
  std::vector<PredictedComparison> predictions, inverted;
  for (int i = 0; i < 40; ++i) {
    std::string a = "n" + std::to_string(2 * i);
    std::string b = "n" + std::to_string(2 * i + 1);
    reference.push_back(Edge(a, b,
                             rng.NextDouble() < 0.5
                                 ? ComparisonOutcome::kFirstWins
                                 : ComparisonOutcome::kSecondWins));
    auto guess = rng.NextDouble() < 0.5 ? ComparisonOutcome::kFirstWins
                                        : ComparisonOutcome::kSecondWins;
    auto anti = guess == ComparisonOutcome::kFirstWins
                    ? ComparisonOutcome::kSecondWins
                    : ComparisonOutcome::kFirstWins;
    predictions.push_back({a, b, guess});
    inverted.push_back({a, b, anti});
  }
  double acc = PairwiseAccuracy(predictions, reference).accuracy;
  double anti_acc = PairwiseAccuracy(inverted, reference).accuracy;
  CHECK(acc + anti_acc == doctest::Approx(1.0));
}

TEST_CASE("spearman basics and the hand-computed 0.8 case") {
  std::map<std::string, double> a = {{"w", 1}, {"x", 2}, {"y", 3}, {"z", 4}};
  std::map<std::string, double> b = {{"w", 1}, {"x", 3}, {"y", 2}, {"z", 4}};
  CHECK(SpearmanRho(a, a) == doctest::Approx(1.0));
  std::map<std::string, double> neg;
  for (const auto& [k, v] : a) neg[k] = -v;
  CHECK(SpearmanRho(a, neg) == doctest::Approx(-1.0));
  CHECK(SpearmanRho(a, b) == doctest::Approx(0.8));
  std::map<std::string, double> constant = {{"w", 2}, {"x", 2}, {"y", 2}, {"z", 2}};
  CHECK_THROWS_AS(SpearmanRho(a, constant), ValidationError);
}

TEST_CASE("spearman applies average-rank tie correction") {
  // a = (1, 2, 2, 4) has ranks (1, 2.5, 2.5, 4); against (1, 2, 3, 4) the
  // Pearson correlation of the ranks is 4.5 / sqrt(4.5 * 5).
  std::vector<double> a = {1, 2, 2, 4};
  std::vector<double> b = {1, 2, 3, 4};
  CHECK(SpearmanRho(a, b) ==
        doctest::Approx(4.5 / std::sqrt(22.5)).epsilon(1e-12));
}

TEST_CASE("spearman is invariant under monotone transforms") {
  Rng rng(8);
  std::map<std::string, double> a, b;
  for (int i = 0; i < 30; ++i) {
    std::string id = "i" + std::to_string(i);
    a[id] = rng.NextUniform(-2, 2);
    b[id] = rng.NextUniform(-2, 2);
  }
  double base = SpearmanRho(a, b);
  std::map<std::string, double> warped;
  for (const auto& [id, v] : a) warped[id] = std::exp(3.0 * v);  // monotone
  CHECK(SpearmanRho(warped, b) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("rmse rescales both sides to the unit interval") {
  std::map<std::string, double> a = {{"p", 0.0}, {"q", 1.0}};
  CHECK(Rmse(a, a) == doctest::Approx(0.0));
  std::map<std::string, double> b = {{"p", 1.0}, {"q", 0.0}};
  CHECK(Rmse(a, b) == doctest::Approx(1.0));
  std::map<std::string, double> x = {{"p", 0.0}, {"q", 0.5}, {"r", 1.0}};
  std::map<std::string, double> y = {{"p", 0.0}, {"q", 1.0}, {"r", 1.0}};
  CHECK(Rmse(x, y) == doctest::Approx(std::sqrt(0.25 / 3.0)));
  // Shared affine transforms wash out in the rescale.
  std::map<std::string, double> scaled;
  for (const auto& [k, v] : x) scaled[k] = 42.0 + 7.0 * v;
  CHECK(Rmse(scaled, y) == doctest::Approx(Rmse(x, y)).epsilon(1e-12));
}

TEST_CASE("bootstrap determinism and degenerate spread") {
  std::vector<double> units = {1.0, 2.0, 3.0, 4.0, 5.0};
  auto metric = [&](const std::vector<size_t>& idx) {
    double sum = 0.0;
    for (size_t i : idx) sum += units[i];
    return sum / idx.size();
  };
  auto a = Bootstrap(metric, units.size(), 25, 99);
  auto b = Bootstrap(metric, units.size(), 25, 99);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);
  auto constant = Bootstrap([](const std::vector<size_t>&) { return 0.7; },
                            units.size(), 25, 1);
  CHECK(constant.mean == doctest::Approx(0.7));
  CHECK(constant.stddev == doctest::Approx(0.0));
  CHECK_THROWS_AS(Bootstrap(metric, units.size(), 1, 0), ValidationError);
}

TEST_CASE("bootstrap redraws resamples when the metric is undefined") {
  // The metric rejects resamples that miss index 0; with 3 units this
  // happens often, so redraws must kick in and be counted.
  int calls = 0;
  auto metric = [&](const std::vector<size_t>& idx) -> double {
    ++calls;
    for (size_t i : idx) {
      if (i == 0) return 1.0;
    }
    throw ValidationError("resample rejected");
  };
  auto summary = Bootstrap(metric, 3, 25, 5);
  CHECK(summary.mean == doctest::Approx(1.0));
  CHECK(summary.redraws > 0);
  CHECK(calls == 25 + summary.redraws);
}

TEST_CASE("bootstrap mean tracks the point estimate") {
  Rng rng(2);
  std::vector<double> units;
  for (int i = 0; i < 200; ++i) units.push_back(rng.NextDouble() < 0.7 ? 1.0 : 0.0);
  auto metric = [&](const std::vector<size_t>& idx) {
    double sum = 0.0;
    for (size_t i : idx) sum += units[i];
    return sum / idx.size();
  };
  double point = metric([&] {
    std::vector<size_t> all(units.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }());
  auto summary = Bootstrap(metric, units.size(), 25, 31);
  CHECK(std::abs(summary.mean - point) <= 3.0 * std::max(summary.stddev, 1e-6));
}

TEST_CASE("win rate: exact agreement and tie handling") {
  std::map<std::string, AggregateLabel> aggregated;
  std::map<std::string, ComparisonOutcome> a, b;
  for (int i = 0; i < 60; ++i) {
    std::string id = "p" + std::to_string(i);
    aggregated[id] = AggregateLabel::kFirst;
    a[id] = ComparisonOutcome::kFirstWins;
    b[id] = ComparisonOutcome::kSecondWins;
  }
  auto report = WinRate(aggregated, a, b);
  CHECK(report.method_a_wins == 60);
  CHECK(report.neither == 0);
  CHECK(report.method_b_wins == 0);
  CHECK(report.share_a == doctest::Approx(1.0));

  aggregated["p0"] = AggregateLabel::kTie;
  aggregated["p1"] = AggregateLabel::kInvalid;
  report = WinRate(aggregated, a, b);
  CHECK(report.method_a_wins == 58);
  CHECK(report.neither == 2);
}

TEST_CASE("win rate rejects coverage gaps") {
  std::map<std::string, AggregateLabel> aggregated = {
      {"p0", AggregateLabel::kFirst}};
  std::map<std::string, ComparisonOutcome> a = {
      {"p0", ComparisonOutcome::kFirstWins}};
  std::map<std::string, ComparisonOutcome> empty;
  CHECK_THROWS_AS(WinRate(aggregated, a, empty), ValidationError);
}

TEST_CASE("disagreement selection: no disagreement means empty result") {
  std::map<std::string, Item> items;
  std::map<std::string, double> scores;
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    std::string id = "i" + std::to_string(i);
    items[id] = {id, std::string(20 + i % 7, 'x'), {}};
    scores[id] = rng.NextDouble();
  }
  auto selection = SelectDisagreementPairs(scores, scores, items, {});
  CHECK(selection.sampled.empty());
  CHECK(selection.qualifying_pairs == 0);
}

TEST_CASE("disagreement selection picks contradicting same-decile pairs") {
  std::map<std::string, Item> items;
  std::map<std::string, double> bt, llm;
  // Same text length for everyone: one decile, all pairs eligible.
  for (int i = 0; i < 12; ++i) {
    std::string id = "i" + std::to_string(i);
    items[id] = {id, std::string(30, 'a' + i), {}};
    bt[id] = i / 11.0;
    llm[id] = 1.0 - i / 11.0;  // fully reversed ranking
  }
  DisagreementConfig config;
  config.sample_per_extreme_bin = 5;
  auto selection = SelectDisagreementPairs(bt, llm, items, config);
  CHECK(selection.qualifying_pairs > 0);
  CHECK(!selection.sampled.empty());
  for (const auto& rec : selection.sampled) {
    // Choices really contradict.
    CHECK(rec.d_first * rec.d_second < 0);
    // Sampled from the extreme bins only.
    CHECK((rec.bin == 0 || rec.bin == config.num_bins - 1));
  }
}

TEST_CASE("disagreement sampling concentrates on heavy tails") {
  std::map<std::string, Item> items;
  std::map<std::string, double> bt, llm;
  Rng rng(10);
  for (int i = 0; i < 60; ++i) {
    std::string id = (i < 10 ? "i0" : "i") + std::to_string(i);
    items[id] = {id, std::string(25, 'q'), {}};
    double z = rng.NextDouble();
    bt[id] = z;
    // Mild disagreement for most, wild for a few.
    llm[id] = i % 7 == 0 ? 1.0 - z : z + rng.NextUniform(-0.15, 0.15);
  }
  DisagreementConfig config;
  config.sample_per_extreme_bin = 4;
  auto selection = SelectDisagreementPairs(bt, llm, items, config);
  for (const auto& rec : selection.sampled) {
    CHECK((rec.bin == 0 || rec.bin == 9));
  }
}

TEST_CASE("metric table formats mean±std strings with best markers") {
  MethodMetricsRow a;
  a.name = "pointwise";
  a.report.accuracy_boot = {0.75, 0.01, 25, 0};
  a.report.rho_boot = {0.81, 0.03, 25, 0};
  a.report.rmse_boot = {0.26, 0.01, 25, 0};
  MethodMetricsRow b;
  b.name = "pairwise";
  b.report.accuracy_boot = {0.73, 0.01, 25, 0};
  b.report.rho_boot = {0.81, 0.03, 25, 0};
  b.report.rmse_boot = {0.21, 0.01, 25, 0};
  auto table = FormatMetricTable({a, b});
  CHECK(table.find("0.75\xC2\xB1") != std::string::npos);
  CHECK(table.find("pointwise") != std::string::npos);
  CHECK(table.find("*") != std::string::npos);
}
