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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "textscale/error.hpp"
#include "textscale/rng.hpp"

namespace textscale {
namespace {

// Normalized key and outcome for an unordered pair.
std::pair<std::string, ComparisonOutcome> NormalizePair(const std::string& left,
                                                        const std::string& right,
                                                        ComparisonOutcome o) {
  if (left <= right) return {left + "\x1f" + right, o};
  ComparisonOutcome flipped = o;
  if (o == ComparisonOutcome::kFirstWins) flipped = ComparisonOutcome::kSecondWins;
  if (o == ComparisonOutcome::kSecondWins) flipped = ComparisonOutcome::kFirstWins;
  return {right + "\x1f" + left, flipped};
}

std::vector<double> AverageRanks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ValidationError("correlation undefined for a constant vector");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> Rescale01(const std::vector<double>& v) {
  double lo = v[0], hi = v[0];
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<double> out(v.size());
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) / (hi - lo);
  return out;
}

void SharedValues(const std::map<std::string, double>& a,
                  const std::map<std::string, double>& b,
                  std::vector<double>* va, std::vector<double>* vb) {
  for (const auto& [id, x] : a) {
    auto it = b.find(id);
    if (it == b.end()) continue;
    va->push_back(x);
    vb->push_back(it->second);
  }
}

}  // namespace

AccuracyResult PairwiseAccuracy(
    const std::vector<PredictedComparison>& predictions,
    const std::vector<ComparisonEdge>& reference, bool include_reference_ties) {
  std::map<std::string, ComparisonOutcome> predicted;
  for (const auto& p : predictions) {
    auto [key, outcome] = NormalizePair(p.left, p.right, p.outcome);
    predicted[key] = outcome;
  }
  AccuracyResult result;
  int correct = 0;
  for (const auto& e : reference) {
    if (e.outcome == ComparisonOutcome::kTie && !include_reference_ties) {
      ++result.excluded_ties;
      continue;
    }
    auto [key, outcome] = NormalizePair(e.left, e.right, e.outcome);
    auto it = predicted.find(key);
    if (it == predicted.end()) {
      result.uncovered.push_back(e.left + "/" + e.right);
      continue;
    }
    ++result.used;
    if (it->second == outcome) ++correct;
  }
  if (result.used == 0) {
    throw ValidationError("no usable reference pairs for accuracy");
  }
  result.accuracy = static_cast<double>(correct) / result.used;
  return result;
}

double SpearmanRho(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ValidationError("vector size mismatch");
  if (a.size() < 3) {
    throw ValidationError("Spearman correlation needs at least 3 shared values");
  }
  return Pearson(AverageRanks(a), AverageRanks(b));
}

double SpearmanRho(const std::map<std::string, double>& a,
                   const std::map<std::string, double>& b) {
  std::vector<double> va, vb;
  SharedValues(a, b, &va, &vb);
  return SpearmanRho(va, vb);
}

double Rmse(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ValidationError("vector size mismatch");
  if (a.empty()) throw ValidationError("RMSE of empty vectors");
  auto ra = Rescale01(a);
  auto rb = Rescale01(b);
  double sum = 0.0;
  for (size_t i = 0; i < ra.size(); ++i) {
    double d = ra[i] - rb[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(ra.size()));
}

double Rmse(const std::map<std::string, double>& a,
            const std::map<std::string, double>& b) {
  std::vector<double> va, vb;
  SharedValues(a, b, &va, &vb);
  return Rmse(va, vb);
}

BootstrapSummary Bootstrap(
    const std::function<double(const std::vector<size_t>&)>& metric,
    size_t num_units, int num_resamples, uint64_t seed) {
  if (num_resamples < 2) throw ValidationError("bootstrap needs B >= 2");
  if (num_units == 0) throw ValidationError("bootstrap over zero units");
  constexpr int kMaxRetries = 10;
  BootstrapSummary summary;
  summary.resamples = num_resamples;
  std::vector<double> estimates;
  estimates.reserve(num_resamples);
  for (int b = 0; b < num_resamples; ++b) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxRetries && !done; ++attempt) {
      Rng rng(DeriveSeed(seed, "resample-" + std::to_string(b) + "-" +
                                   std::to_string(attempt)));
      std::vector<size_t> indices(num_units);
      for (auto& idx : indices) idx = rng.NextBelow(num_units);
      try {
        estimates.push_back(metric(indices));
        done = true;
      } catch (const Error&) {
        ++summary.redraws;
      }
    }
    if (!done) {
      throw Error("bootstrap metric undefined after " +
                  std::to_string(kMaxRetries) + " redraws of resample " +
                  std::to_string(b));
    }
  }
  double mean = 0.0;
  for (double v : estimates) mean += v;
  mean /= estimates.size();
  double ss = 0.0;
  for (double v : estimates) ss += (v - mean) * (v - mean);
  summary.mean = mean;
  summary.stddev = std::sqrt(ss / (estimates.size() - 1));
  return summary;
}

DisagreementSelection SelectDisagreementPairs(
    const std::map<std::string, double>& first_scores,
    const std::map<std::string, double>& second_scores,
    const std::map<std::string, Item>& items, const DisagreementConfig& config) {
  DisagreementSelection out;

  // Items scored by both methods, filtered to the central length band.
  std::vector<std::pair<std::string, size_t>> lengths;  // id, chars
  for (const auto& [id, item] : items) {
    if (first_scores.count(id) && second_scores.count(id)) {
      lengths.emplace_back(id, item.text.size());
    }
  }
  if (lengths.empty()) {
    out.note = "no items scored by both methods";
    return out;
  }
  std::vector<size_t> sorted_lengths;
  for (const auto& [id, len] : lengths) sorted_lengths.push_back(len);
  std::sort(sorted_lengths.begin(), sorted_lengths.end());
  auto percentile = [&](double q) {
    size_t rank = static_cast<size_t>(
        std::ceil(q * static_cast<double>(sorted_lengths.size())));
    rank = std::clamp<size_t>(rank, 1, sorted_lengths.size());
    return sorted_lengths[rank - 1];
  };
  size_t lo = percentile(config.length_percentile_lo);
  size_t hi = percentile(config.length_percentile_hi);
  std::vector<std::pair<std::string, size_t>> retained;
  for (const auto& [id, len] : lengths) {
    if (len >= lo && len <= hi) retained.emplace_back(id, len);
  }
  out.items_retained = retained.size();

  // Length deciles by rank within the retained set.
  std::sort(retained.begin(), retained.end(),
            [](const auto& a, const auto& b) {
              return a.second != b.second ? a.second < b.second : a.first < b.first;
            });
  std::map<std::string, int> decile;
  for (size_t r = 0; r < retained.size(); ++r) {
    decile[retained[r].first] =
        static_cast<int>(r * 10 / std::max<size_t>(1, retained.size()));
  }

  auto choice = [&](double si, double sj) {
    if (si - sj > config.tie_band) return ComparisonOutcome::kFirstWins;
    if (sj - si > config.tie_band) return ComparisonOutcome::kSecondWins;
    return ComparisonOutcome::kTie;
  };

  std::vector<std::string> ids;
  for (const auto& [id, len] : retained) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  std::vector<DisagreementRecord> qualifying;
  for (size_t i = 0; i < ids.size(); ++i) {
    for (size_t j = i + 1; j < ids.size(); ++j) {
      if (decile.at(ids[i]) != decile.at(ids[j])) continue;
      ++out.candidate_pairs;
      double f_i = first_scores.at(ids[i]), f_j = first_scores.at(ids[j]);
      double s_i = second_scores.at(ids[i]), s_j = second_scores.at(ids[j]);
      auto c_first = choice(f_i, f_j);
      auto c_second = choice(s_i, s_j);
      if (c_first == c_second) continue;
      if (c_first == ComparisonOutcome::kTie || c_second == ComparisonOutcome::kTie)
        continue;
      DisagreementRecord rec;
      rec.left = ids[i];
      rec.right = ids[j];
      rec.d_first = f_i - f_j;
      rec.d_second = s_i - s_j;
      rec.magnitude = rec.d_first - rec.d_second;
      qualifying.push_back(rec);
    }
  }
  out.qualifying_pairs = qualifying.size();
  if (qualifying.empty()) {
    out.note = "no qualifying disagreement pairs";
    return out;
  }

  std::sort(qualifying.begin(), qualifying.end(),
            [](const DisagreementRecord& a, const DisagreementRecord& b) {
              return a.magnitude != b.magnitude ? a.magnitude < b.magnitude
                                                : a.left < b.left;
            });
  for (size_t r = 0; r < qualifying.size(); ++r) {
    qualifying[r].bin = static_cast<int>(r * config.num_bins / qualifying.size());
  }

  auto sample_bin = [&](int bin, const std::string& tag) {
    std::vector<DisagreementRecord> members;
    for (const auto& q : qualifying) {
      if (q.bin == bin) members.push_back(q);
    }
    Rng rng(DeriveSeed(config.seed, "disagreement-" + tag));
    rng.Shuffle(&members);
    size_t take = std::min<size_t>(config.sample_per_extreme_bin, members.size());
    for (size_t k = 0; k < take; ++k) out.sampled.push_back(members[k]);
  };
  sample_bin(0, "low");
  sample_bin(config.num_bins - 1, "high");
  return out;
}

WinRateReport WinRate(const std::map<std::string, AggregateLabel>& aggregated,
                      const std::map<std::string, ComparisonOutcome>& method_a,
                      const std::map<std::string, ComparisonOutcome>& method_b) {
  std::vector<std::string> missing;
  for (const auto& [pair_id, label] : aggregated) {
    if (!method_a.count(pair_id) || !method_b.count(pair_id))
      missing.push_back(pair_id);
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "win-rate coverage mismatch; pairs missing from a method:";
    for (const auto& id : missing) msg << " '" << id << "'";
    throw ValidationError(msg.str());
  }
  WinRateReport report;
  for (const auto& [pair_id, label] : aggregated) {
    ++report.total;
    if (label == AggregateLabel::kTie || label == AggregateLabel::kInvalid) {
      ++report.neither;
      continue;
    }
    ComparisonOutcome target = label == AggregateLabel::kFirst
                                   ? ComparisonOutcome::kFirstWins
                                   : ComparisonOutcome::kSecondWins;
    bool a_match = method_a.at(pair_id) == target;
    bool b_match = method_b.at(pair_id) == target;
    if (a_match && !b_match) {
      ++report.method_a_wins;
    } else if (b_match && !a_match) {
      ++report.method_b_wins;
    } else {
      // Both or neither match: no winner between the methods.
      ++report.neither;
    }
  }
  if (report.total > 0) {
    report.share_a = static_cast<double>(report.method_a_wins) / report.total;
    report.share_neither = static_cast<double>(report.neither) / report.total;
    report.share_b = static_cast<double>(report.method_b_wins) / report.total;
  }
  return report;
}

std::string FormatMetricTable(const std::vector<MethodMetricsRow>& rows) {
  auto cell = [](double mean, double std) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << mean << "\xC2\xB1" << std;
    return s.str();
  };
  // Best per column: highest accuracy and rho, lowest RMSE.
  double best_acc = -1.0, best_rho = -2.0, best_rmse = 1e300;
  double best_acc_sd = 0.0, best_rho_sd = 0.0, best_rmse_sd = 0.0;
  for (const auto& row : rows) {
    if (row.report.accuracy_boot.mean > best_acc) {
      best_acc = row.report.accuracy_boot.mean;
      best_acc_sd = row.report.accuracy_boot.stddev;
    }
    if (row.report.rho_boot.mean > best_rho) {
      best_rho = row.report.rho_boot.mean;
      best_rho_sd = row.report.rho_boot.stddev;
    }
    if (row.report.rmse_boot.mean < best_rmse) {
      best_rmse = row.report.rmse_boot.mean;
      best_rmse_sd = row.report.rmse_boot.stddev;
    }
  }
  std::ostringstream out;
  out << std::left << std::setw(24) << "method" << std::setw(14) << "Acc"
      << std::setw(14) << "rho" << std::setw(14) << "RMSE" << "\n";
  for (const auto& row : rows) {
    auto mark = [&](double mean, double best, double best_sd, bool higher) {
      double diff = higher ? best - mean : mean - best;
      if (diff <= 0.0) return std::string("*");
      if (diff <= best_sd) return std::string("~");
      return std::string(" ");
    };
    out << std::left << std::setw(24) << row.name;
    out << std::setw(14)
        << cell(row.report.accuracy_boot.mean, row.report.accuracy_boot.stddev) +
               mark(row.report.accuracy_boot.mean, best_acc, best_acc_sd, true);
    out << std::setw(14)
        << cell(row.report.rho_boot.mean, row.report.rho_boot.stddev) +
               mark(row.report.rho_boot.mean, best_rho, best_rho_sd, true);
    out << std::setw(14)
        << cell(row.report.rmse_boot.mean, row.report.rmse_boot.stddev) +
               mark(row.report.rmse_boot.mean, best_rmse, best_rmse_sd, false);
    out << "\n";
  }
  return out.str();
}

}  // namespace textscale
