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

#include "textscale/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "textscale/error.hpp"

namespace textscale {
namespace {

constexpr int kClasses = 3;

int ClassIndex(ComparisonOutcome o) {
  switch (o) {
    case ComparisonOutcome::kFirstWins: return 0;
    case ComparisonOutcome::kSecondWins: return 1;
    case ComparisonOutcome::kTie: return 2;
  }
  return 2;
}

AggregateLabel ClassLabel(int index) {
  switch (index) {
    case 0: return AggregateLabel::kFirst;
    case 1: return AggregateLabel::kSecond;
    default: return AggregateLabel::kTie;
  }
}

}  // namespace

void AnnotationMatrix::Validate() const {
  if (labels.size() != pair_ids.size()) {
    throw ValidationError("annotation matrix row count does not match pair ids");
  }
  for (size_t p = 0; p < labels.size(); ++p) {
    if (labels[p].size() != annotator_ids.size()) {
      throw ValidationError("annotation row '" + pair_ids[p] +
                            "' has the wrong number of cells");
    }
    bool any = false;
    for (const auto& cell : labels[p]) any = any || cell.has_value();
    if (!any) {
      throw ValidationError("annotation row '" + pair_ids[p] +
                            "' has no labels at all");
    }
  }
}

std::string AggregateLabelToken(AggregateLabel label) {
  switch (label) {
    case AggregateLabel::kFirst: return "1";
    case AggregateLabel::kSecond: return "2";
    case AggregateLabel::kTie: return "tie";
    case AggregateLabel::kInvalid: return "invalid";
  }
  return "?";
}

AggregateLabel AggregateLabelFromToken(const std::string& token) {
  if (token == "1") return AggregateLabel::kFirst;
  if (token == "2") return AggregateLabel::kSecond;
  if (token == "tie" || token == "0") return AggregateLabel::kTie;
  if (token == "invalid") return AggregateLabel::kInvalid;
  throw ValidationError("unknown aggregate label token: '" + token + "'");
}

AggregateLabel MajorityVote(
    const std::vector<std::optional<ComparisonOutcome>>& row) {
  int counts[kClasses] = {0, 0, 0};
  int present = 0;
  for (const auto& cell : row) {
    if (!cell) continue;
    ++counts[ClassIndex(*cell)];
    ++present;
  }
  if (present == 0) throw ValidationError("majority vote over an empty row");
  for (int c = 0; c < kClasses; ++c) {
    if (2 * counts[c] > present) return ClassLabel(c);
  }
  return AggregateLabel::kInvalid;
}

DsEstimate FitDawidSkene(const AnnotationMatrix& matrix, const DsConfig& config) {
  matrix.Validate();
  if (matrix.pair_ids.empty()) throw ValidationError("empty annotation matrix");
  const size_t num_pairs = matrix.pair_ids.size();
  const size_t num_annotators = matrix.annotator_ids.size();
  const double s = config.smoothing;

  // Posteriors initialized from per-row label frequencies.
  std::vector<std::array<double, 3>> post(num_pairs, {0.0, 0.0, 0.0});
  for (size_t p = 0; p < num_pairs; ++p) {
    int present = 0;
    for (const auto& cell : matrix.labels[p]) {
      if (!cell) continue;
      post[p][ClassIndex(*cell)] += 1.0;
      ++present;
    }
    for (int c = 0; c < kClasses; ++c) post[p][c] /= present;
  }

  std::array<double, 3> priors{};
  std::vector<std::array<std::array<double, 3>, 3>> confusion(num_annotators);
  DsEstimate est;
  int iter = 0;
  bool converged = false;

  for (; iter < config.max_iter; ++iter) {
    // M-step.
    double post_total = 0.0;
    std::array<double, 3> post_sum{};
    for (size_t p = 0; p < num_pairs; ++p) {
      for (int c = 0; c < kClasses; ++c) post_sum[c] += post[p][c];
    }
    for (int c = 0; c < kClasses; ++c) post_total += post_sum[c];
    for (int c = 0; c < kClasses; ++c) {
      priors[c] = (post_sum[c] + s) / (post_total + kClasses * s);
    }
    for (size_t a = 0; a < num_annotators; ++a) {
      std::array<std::array<double, 3>, 3> counts{};
      for (size_t p = 0; p < num_pairs; ++p) {
        const auto& cell = matrix.labels[p][a];
        if (!cell) continue;
        int reported = ClassIndex(*cell);
        for (int c = 0; c < kClasses; ++c) counts[c][reported] += post[p][c];
      }
      for (int c = 0; c < kClasses; ++c) {
        double row_sum = 0.0;
        for (int k = 0; k < kClasses; ++k) row_sum += counts[c][k];
        for (int k = 0; k < kClasses; ++k) {
          confusion[a][c][k] = (counts[c][k] + s) / (row_sum + kClasses * s);
        }
      }
    }

    // Observed-data log-likelihood at the new parameters, then the E-step.
    std::vector<std::array<double, 3>> joint(num_pairs);
    double loglik = 0.0;
    for (size_t p = 0; p < num_pairs; ++p) {
      for (int c = 0; c < kClasses; ++c) joint[p][c] = priors[c];
      for (size_t a = 0; a < num_annotators; ++a) {
        const auto& cell = matrix.labels[p][a];
        if (!cell) continue;
        int reported = ClassIndex(*cell);
        for (int c = 0; c < kClasses; ++c)
          joint[p][c] *= confusion[a][c][reported];
      }
      loglik += std::log(joint[p][0] + joint[p][1] + joint[p][2]);
    }
    // Stop once the data likelihood no longer improves. With degenerate
    // data (e.g. a single annotator) the likelihood is flat along a
    // parameter ridge and the smoothing would otherwise walk the
    // posteriors toward uniform without improving the fit; the
    // non-improving update is discarded.
    if (!est.loglik_trace.empty() && loglik - est.loglik_trace.back() < 1e-9) {
      converged = true;
      ++iter;
      break;
    }
    est.loglik_trace.push_back(loglik);
    double max_change = 0.0;
    for (size_t p = 0; p < num_pairs; ++p) {
      double total = joint[p][0] + joint[p][1] + joint[p][2];
      for (int c = 0; c < kClasses; ++c) {
        double updated = joint[p][c] / total;
        max_change = std::max(max_change, std::abs(updated - post[p][c]));
        post[p][c] = updated;
      }
    }
    if (max_change < config.tol) {
      converged = true;
      ++iter;
      break;
    }
  }

  est.class_priors = priors;
  est.posteriors = post;
  est.iterations = iter;
  est.converged = converged;
  for (size_t a = 0; a < num_annotators; ++a) {
    est.confusion[matrix.annotator_ids[a]] = confusion[a];
    double diag = 0.0;
    for (int c = 0; c < kClasses; ++c) diag += confusion[a][c][c];
    est.annotator_ability[matrix.annotator_ids[a]] = diag / kClasses;
  }
  est.posterior_entropy.resize(num_pairs);
  est.map_labels.resize(num_pairs);
  for (size_t p = 0; p < num_pairs; ++p) {
    double h = 0.0;
    int best = 0;
    for (int c = 0; c < kClasses; ++c) {
      if (post[p][c] > 0) h -= post[p][c] * std::log(post[p][c]);
      if (post[p][c] > post[p][best]) best = c;
    }
    est.posterior_entropy[p] = h;
    est.map_labels[p] = ClassLabel(best);
  }
  return est;
}

double KrippendorffAlpha(
    const std::vector<std::vector<std::optional<double>>>& ratings,
    AlphaLevel level) {
  // Distinct values define the coincidence-matrix categories.
  std::vector<double> values;
  for (const auto& unit : ratings) {
    for (const auto& cell : unit) {
      if (cell) values.push_back(*cell);
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const int k = static_cast<int>(values.size());
  auto value_index = [&](double v) {
    return static_cast<int>(std::lower_bound(values.begin(), values.end(), v) -
                            values.begin());
  };

  std::vector<std::vector<double>> coincidence(k, std::vector<double>(k, 0.0));
  double n_pairable = 0.0;
  for (const auto& unit : ratings) {
    std::vector<int> present;
    for (const auto& cell : unit) {
      if (cell) present.push_back(value_index(*cell));
    }
    const int m = static_cast<int>(present.size());
    if (m < 2) continue;  // unpairable unit
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        coincidence[present[i]][present[j]] += 1.0 / (m - 1);
      }
    }
    n_pairable += m;
  }
  if (n_pairable < 2.0) {
    throw ValidationError("Krippendorff's alpha needs at least 2 pairable values");
  }

  std::vector<double> marginal(k, 0.0);
  for (int c = 0; c < k; ++c) {
    for (int g = 0; g < k; ++g) marginal[c] += coincidence[c][g];
  }

  // Squared difference per level, using the coincidence marginals for the
  // ordinal metric.
  std::vector<double> cumulative(k + 1, 0.0);
  for (int c = 0; c < k; ++c) cumulative[c + 1] = cumulative[c] + marginal[c];
  auto delta_sq = [&](int c, int g) {
    if (c == g) return 0.0;
    switch (level) {
      case AlphaLevel::kNominal:
        return 1.0;
      case AlphaLevel::kInterval: {
        double d = values[c] - values[g];
        return d * d;
      }
      case AlphaLevel::kOrdinal: {
        int lo = std::min(c, g), hi = std::max(c, g);
        double between = cumulative[hi + 1] - cumulative[lo];
        double d = between - (marginal[c] + marginal[g]) / 2.0;
        return d * d;
      }
    }
    return 0.0;
  };

  double observed = 0.0;
  for (int c = 0; c < k; ++c) {
    for (int g = 0; g < k; ++g) observed += coincidence[c][g] * delta_sq(c, g);
  }
  double expected = 0.0;
  for (int c = 0; c < k; ++c) {
    for (int g = 0; g < k; ++g) {
      if (c == g) continue;
      expected += marginal[c] * marginal[g] * delta_sq(c, g);
    }
  }
  expected /= (n_pairable - 1.0);
  if (expected == 0.0) {
    // No expected disagreement: perfect agreement on a single category.
    return 1.0;
  }
  return 1.0 - observed / expected;
}

}  // namespace textscale
