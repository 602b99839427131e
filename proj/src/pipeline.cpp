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

#include "textscale/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "textscale/bt.hpp"
#include "textscale/error.hpp"
#include "textscale/io.hpp"
#include "textscale/pairwise.hpp"
#include "textscale/pointwise.hpp"
#include "textscale/reward.hpp"
#include "textscale/rng.hpp"

namespace textscale {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string OutPath(const RunConfig& config, const std::string& name) {
  return (fs::path(config.output_dir) / name).string();
}

void EnsureOutputDir(const RunConfig& config) {
  fs::create_directories(config.output_dir);
}

ComparisonGraph LoadGraph(const RunConfig& config) {
  return ComparisonGraph::Build(ReadItems(config.items_path),
                                ReadPairs(config.pairs_path));
}

std::map<std::string, double> ReadLatentsCsv(const std::string& path) {
  CsvTable table = ReadCsv(path);
  int id_col = table.RequiredColumn("id");
  int latent_col = table.RequiredColumn("latent");
  std::map<std::string, double> latents;
  for (const auto& row : table.rows)
    latents[row.at(id_col)] = std::stod(row.at(latent_col));
  return latents;
}

std::vector<Exemplar> ReadExemplarPool(const std::string& path) {
  CsvTable table = ReadCsv(path);
  int text_col = table.RequiredColumn("text");
  int answer_col = table.RequiredColumn("answer");
  std::vector<Exemplar> pool;
  for (const auto& row : table.rows)
    pool.push_back({row.at(text_col), row.at(answer_col)});
  return pool;
}

struct SplitFile {
  int n_test = 0;
  uint64_t seed = 0;
  std::set<std::string> test_items;
};

void WriteSplitJson(const SplitPlan& plan, int n_test, const std::string& path) {
  json obj;
  obj["n_test"] = n_test;
  obj["seed"] = plan.seed;
  obj["test_items"] = json::array();
  for (const auto& id : plan.test_items) obj["test_items"].push_back(id);
  obj["train_items"] = plan.train_items.size();
  obj["train_edges"] = plan.train_edges.size();
  obj["eval_edges"] = plan.eval_edges.size();
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << obj.dump(2) << "\n";
}

SplitFile ReadSplitJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open split file: " + path);
  json obj = json::parse(in);
  SplitFile split;
  split.n_test = obj.at("n_test").get<int>();
  split.seed = obj.at("seed").get<uint64_t>();
  for (const auto& id : obj.at("test_items"))
    split.test_items.insert(id.get<std::string>());
  return split;
}

ScaleSpec ScaleFromConfig(const RunConfig& config) {
  return ScaleSpec::IntegerRange(config.scale_lo, config.scale_hi);
}

// Exemplars drawn once per run from the pool; the pool must not leak
// evaluation items.
std::unique_ptr<ExemplarSet> MaybeExemplars(const RunConfig& config,
                                            const std::vector<Item>& items,
                                            StageResult* result) {
  if (config.shots == 0) return nullptr;
  if (config.shots != 5) {
    result->warnings.push_back("shots=" + std::to_string(config.shots) +
                               " is unusual; 0 or 5 expected");
  }
  auto pool = ReadExemplarPool(config.exemplar_pool_path);
  std::set<std::string> item_texts;
  for (const auto& item : items) item_texts.insert(item.text);
  for (const auto& ex : pool) {
    if (item_texts.count(ex.text)) {
      throw ValidationError(
          "exemplar pool overlaps the evaluation items (text: '" +
          ex.text.substr(0, 40) + "...')");
    }
  }
  auto set = std::make_unique<ExemplarSet>(
      DrawExemplars(pool, config.shots, config.StageSeed("exemplars")));
  return set;
}

std::vector<PredictedComparison> InduceChoices(
    const std::map<std::string, double>& scores,
    const std::vector<ComparisonEdge>& pairs, double tie_band) {
  std::vector<PredictedComparison> predictions;
  for (const auto& e : pairs) {
    auto left = scores.find(e.left);
    auto right = scores.find(e.right);
    if (left == scores.end() || right == scores.end()) continue;
    PredictedComparison p;
    p.left = e.left;
    p.right = e.right;
    double diff = left->second - right->second;
    if (diff > tie_band) {
      p.outcome = ComparisonOutcome::kFirstWins;
    } else if (diff < -tie_band) {
      p.outcome = ComparisonOutcome::kSecondWins;
    } else {
      p.outcome = ComparisonOutcome::kTie;
    }
    predictions.push_back(std::move(p));
  }
  return predictions;
}

MetricReport ReadMetricReportJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open metric report: " + path);
  json obj = json::parse(in);
  MetricReport report;
  report.accuracy = obj.value("accuracy", 0.0);
  report.spearman_rho = obj.value("spearman_rho", 0.0);
  report.rmse = obj.value("rmse", 0.0);
  auto boot = [&](const char* key) {
    BootstrapSummary b;
    if (obj.contains(key)) {
      b.mean = obj[key].value("mean", 0.0);
      b.stddev = obj[key].value("stddev", 0.0);
      b.resamples = obj[key].value("resamples", 0);
      b.redraws = obj[key].value("redraws", 0);
    }
    return b;
  };
  report.accuracy_boot = boot("accuracy_bootstrap");
  report.rho_boot = boot("spearman_rho_bootstrap");
  report.rmse_boot = boot("rmse_bootstrap");
  report.bootstrap_resamples = obj.value("bootstrap_resamples", 0);
  report.bootstrap_seed = obj.value("bootstrap_seed", uint64_t{0});
  return report;
}

std::map<std::string, std::string> FlattenConfig(const RunConfig& c) {
  std::map<std::string, std::string> flat;
  flat["task"] = c.task;
  flat["items_path"] = c.items_path;
  flat["pairs_path"] = c.pairs_path;
  flat["template_path"] = c.template_path;
  flat["shots"] = std::to_string(c.shots);
  flat["exemplar_pool_path"] = c.exemplar_pool_path;
  flat["scale_lo"] = std::to_string(c.scale_lo);
  flat["scale_hi"] = std::to_string(c.scale_hi);
  flat["judge"] = c.judge;
  flat["mock_latents_path"] = c.mock_latents_path;
  flat["mock_tau"] = std::to_string(c.mock_tau);
  flat["mock_heaping"] = std::to_string(c.mock_heaping);
  flat["mock_beta"] = std::to_string(c.mock_beta);
  flat["mock_position_bias"] = std::to_string(c.mock_position_bias);
  flat["mock_noise"] = std::to_string(c.mock_noise);
  flat["http_base_url"] = c.http_base_url;
  flat["http_model"] = c.http_model;
  flat["credentials_env"] = c.credentials_env;
  flat["cache_path"] = c.cache_path;
  flat["n_test"] = std::to_string(c.n_test);
  flat["bootstrap_resamples"] = std::to_string(c.bootstrap_resamples);
  flat["tie_band"] = std::to_string(c.tie_band);
  flat["objective"] = c.objective;
  flat["learning_rate"] = std::to_string(c.learning_rate);
  flat["epochs"] = std::to_string(c.epochs);
  flat["minibatch"] = std::to_string(c.minibatch);
  flat["l2"] = std::to_string(c.l2);
  flat["reference_scores_path"] = c.reference_scores_path;
  flat["method_scores_path"] = c.method_scores_path;
  flat["predictions_path"] = c.predictions_path;
  flat["split_path"] = c.split_path;
  flat["eval_pairs_path"] = c.eval_pairs_path;
  flat["train_pairs_path"] = c.train_pairs_path;
  flat["disagreement_samples"] = std::to_string(c.disagreement_samples);
  flat["root_seed"] = std::to_string(c.root_seed);
  flat["output_dir"] = c.output_dir;
  return flat;
}

void UpdateManifest(const std::string& command, const RunConfig& config,
                    int64_t started, int64_t finished) {
  std::string path = OutPath(config, "manifest.json");
  json manifest;
  manifest["stages"] = json::array();
  if (fs::exists(path)) {
    std::ifstream in(path);
    json existing = json::parse(in, nullptr, false);
    if (!existing.is_discarded() && existing.contains("stages")) {
      manifest["stages"] = existing["stages"];
    }
  }
  json stage;
  stage["command"] = command;
  stage["code_version"] = kCodeVersion;
  stage["started_unix"] = started;
  stage["finished_unix"] = finished;
  stage["config"] = FlattenConfig(config);
  static const char* kStages[] = {"split",    "exemplars", "bootstrap",
                                  "train",    "disagreement"};
  stage["seeds"] = json::object();
  stage["seeds"]["root"] = config.root_seed;
  for (const char* s : kStages) stage["seeds"][s] = config.StageSeed(s);
  stage["inputs"] = json::object();
  for (const std::string& input :
       {config.items_path, config.pairs_path, config.template_path,
        config.exemplar_pool_path, config.mock_latents_path,
        config.reference_scores_path, config.method_scores_path,
        config.predictions_path, config.split_path, config.eval_pairs_path,
        config.train_pairs_path}) {
    if (!input.empty() && fs::exists(input)) {
      stage["inputs"][input] = FileDigest(input);
    }
  }
  manifest["stages"].push_back(std::move(stage));

  // Every file in the output directory gets a digest.
  manifest["outputs"] = json::object();
  for (const auto& entry : fs::recursive_directory_iterator(config.output_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string rel = fs::relative(entry.path(), config.output_dir).string();
    if (rel == "manifest.json") continue;
    manifest["outputs"][rel] = FileDigest(entry.path().string());
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest: " + path);
  out << manifest.dump(2) << "\n";
}

}  // namespace

uint64_t RunConfig::StageSeed(const std::string& stage) const {
  return DeriveSeed(root_seed, stage);
}

void ValidateConfig(const RunConfig& config,
                    const std::vector<std::string>& required_files) {
  std::vector<std::string> problems;
  for (const auto& path : required_files) {
    if (path.empty()) {
      problems.push_back("a required input path is not set");
    } else if (!fs::exists(path)) {
      problems.push_back("missing input file: " + path);
    }
  }
  if (config.judge != "mock" && config.judge != "replay" && config.judge != "http")
    problems.push_back("unknown judge kind '" + config.judge + "'");
  if (config.judge == "replay" && config.cache_path.empty())
    problems.push_back("replay judge requires cache_path");
  if (config.judge == "http" && config.http_base_url.empty())
    problems.push_back("http judge requires http_base_url");
  if (config.scale_lo >= config.scale_hi)
    problems.push_back("scale_lo must be below scale_hi");
  if (config.bootstrap_resamples < 2)
    problems.push_back("bootstrap_resamples must be >= 2");
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "configuration invalid (" << problems.size() << " problems):";
    for (const auto& p : problems) msg << "\n  - " << p;
    throw ValidationError(msg.str());
  }
}

std::shared_ptr<Judge> MakeJudge(const RunConfig& config,
                                 const std::vector<Item>& items) {
  std::shared_ptr<Judge> judge;
  if (config.judge == "replay") {
    auto cache = std::make_shared<ResponseCache>(config.cache_path);
    return std::make_shared<ReplayJudge>(cache);
  }
  if (config.judge == "mock") {
    MockJudgeConfig mock;
    mock.tau = config.mock_tau;
    mock.heaping = config.mock_heaping;
    mock.beta = config.mock_beta;
    mock.position_bias = config.mock_position_bias;
    mock.noise = config.mock_noise;
    mock.seed = config.StageSeed("mock");
    auto latents = ReadLatentsCsv(config.mock_latents_path);
    for (const auto& item : items) {
      auto it = latents.find(item.id);
      if (it != latents.end()) mock.latent_by_text[item.text] = it->second;
    }
    judge = std::make_shared<MockJudge>(std::move(mock));
  } else if (config.judge == "http") {
    HttpJudgeConfig http;
    http.base_url = config.http_base_url;
    http.model = config.http_model;
    http.api_key_env = config.credentials_env;
    judge = std::make_shared<HttpJudge>(http);
  } else {
    throw ValidationError("unknown judge kind '" + config.judge + "'");
  }
  if (!config.cache_path.empty()) {
    auto cache = std::make_shared<ResponseCache>(config.cache_path);
    judge = std::make_shared<CachingJudge>(judge, cache);
  }
  return judge;
}

StageResult CmdIngest(const RunConfig& config) {
  ValidateConfig(config, {config.items_path, config.pairs_path});
  EnsureOutputDir(config);
  auto graph = LoadGraph(config);
  StageResult result;
  std::vector<Item> items;
  for (const auto& [id, item] : graph.items()) items.push_back(item);
  WriteItemsJsonl(items, OutPath(config, "items.jsonl"));
  WritePairsCsv(graph.edges(), OutPath(config, "pairs.csv"));
  result.outputs = {"items.jsonl", "pairs.csv"};
  return result;
}

StageResult CmdStats(const RunConfig& config) {
  ValidateConfig(config, {config.items_path, config.pairs_path});
  EnsureOutputDir(config);
  auto graph = LoadGraph(config);
  auto stats = ComputeStats(graph);
  WriteStatsJson(stats, OutPath(config, "stats.json"));
  StageResult result;
  result.outputs = {"stats.json"};
  if (!stats.connected)
    result.warnings.push_back("comparison graph is not connected");
  return result;
}

StageResult CmdSplit(const RunConfig& config) {
  ValidateConfig(config, {config.items_path, config.pairs_path});
  EnsureOutputDir(config);
  auto graph = LoadGraph(config);
  StageResult result;
  auto stats = ComputeStats(graph);
  if (!stats.connected)
    result.warnings.push_back("splitting a disconnected graph");
  auto plan = MakeSplit(graph, config.n_test, config.StageSeed("split"));
  WriteSplitJson(plan, config.n_test, OutPath(config, "split.json"));
  WritePairsCsv(plan.train_edges, OutPath(config, "train_pairs.csv"));
  WritePairsCsv(plan.eval_edges, OutPath(config, "eval_pairs.csv"));
  result.outputs = {"split.json", "train_pairs.csv", "eval_pairs.csv"};
  return result;
}

StageResult CmdFitBt(const RunConfig& config) {
  ValidateConfig(config, {config.pairs_path});
  EnsureOutputDir(config);
  auto edges = ReadPairs(config.pairs_path);
  auto scores = FitBradleyTerry(edges);
  WriteBtScoresCsv(scores, OutPath(config, "bt_scores.csv"));
  WriteBtReportJson(scores, OutPath(config, "bt_report.json"));
  StageResult result;
  result.outputs = {"bt_scores.csv", "bt_report.json"};
  if (!scores.converged)
    result.warnings.push_back("BT fit did not converge within max_iter");
  return result;
}

StageResult CmdScorePointwise(const RunConfig& config) {
  std::vector<std::string> required = {config.items_path, config.template_path};
  if (config.shots > 0) required.push_back(config.exemplar_pool_path);
  if (config.judge == "mock") required.push_back(config.mock_latents_path);
  ValidateConfig(config, required);
  EnsureOutputDir(config);

  auto items = ReadItems(config.items_path);
  auto tmpl = PromptTemplate::FromFile(config.template_path);
  auto scale = ScaleFromConfig(config);
  StageResult result;
  auto exemplars = MaybeExemplars(config, items, &result);
  auto judge = MakeJudge(config, items);
  auto batch = ScoreItems(*judge, items, tmpl, scale, exemplars.get());
  WriteScoreDetailsCsv(batch, OutPath(config, "scores_pointwise.csv"));
  std::vector<std::vector<std::string>> skipped;
  for (const auto& s : batch.skipped) skipped.push_back({s.item_id, s.reason});
  WriteCsv(OutPath(config, "scores_pointwise_skipped.csv"), {"id", "reason"},
           skipped);
  result.outputs = {"scores_pointwise.csv", "scores_pointwise_skipped.csv"};
  if (!batch.skipped.empty()) {
    result.warnings.push_back(std::to_string(batch.skipped.size()) +
                              " items skipped (zero scale mass)");
  }
  return result;
}

StageResult CmdJudgePairwise(const RunConfig& config) {
  std::string pairs_path = config.eval_pairs_path.empty() ? config.pairs_path
                                                          : config.eval_pairs_path;
  std::vector<std::string> required = {config.items_path, config.template_path,
                                       pairs_path};
  if (config.shots > 0) required.push_back(config.exemplar_pool_path);
  if (config.judge == "mock") required.push_back(config.mock_latents_path);
  ValidateConfig(config, required);
  EnsureOutputDir(config);

  auto items = ReadItems(config.items_path);
  std::map<std::string, Item> by_id;
  for (const auto& item : items) by_id[item.id] = item;
  auto edges = ReadPairs(pairs_path);
  auto tmpl = PromptTemplate::FromFile(config.template_path);
  StageResult result;
  auto exemplars = MaybeExemplars(config, items, &result);
  auto judge = MakeJudge(config, items);

  std::vector<PairTask> tasks;
  for (size_t i = 0; i < edges.size(); ++i) {
    auto left = by_id.find(edges[i].left);
    auto right = by_id.find(edges[i].right);
    if (left == by_id.end() || right == by_id.end()) {
      throw ValidationError("pair file references an item missing from items: " +
                            edges[i].left + "/" + edges[i].right);
    }
    std::ostringstream pair_id;
    pair_id << "p" << std::setw(5) << std::setfill('0') << i;
    tasks.push_back({pair_id.str(), left->second, right->second});
  }
  auto judged = JudgePairs(*judge, tasks, tmpl, exemplars.get(), config.tie_band);
  WriteJudgedPairsCsv(judged, OutPath(config, "judgments.csv"));

  std::vector<ComparisonEdge> predicted;
  int failed = 0;
  for (const auto& jp : judged) {
    if (!jp.error.empty()) {
      ++failed;
      continue;
    }
    ComparisonEdge e;
    e.left = jp.left_id;
    e.right = jp.right_id;
    e.outcome = jp.judgment.choice;
    predicted.push_back(std::move(e));
  }
  WritePairsCsv(predicted, OutPath(config, "predicted_pairs.csv"));
  result.outputs = {"judgments.csv", "predicted_pairs.csv"};
  if (failed > 0) {
    result.warnings.push_back(std::to_string(failed) + " pairs failed entirely");
  }
  return result;
}

StageResult CmdTrain(const RunConfig& config) {
  std::string pairs_path = config.train_pairs_path.empty()
                               ? config.pairs_path
                               : config.train_pairs_path;
  ValidateConfig(config, {config.items_path, pairs_path});
  EnsureOutputDir(config);

  auto items = ReadItems(config.items_path);
  std::map<std::string, Item> by_id;
  for (const auto& item : items) by_id[item.id] = item;
  auto edges = ReadPairs(pairs_path);

  TrainConfig train;
  train.learning_rate = config.learning_rate;
  train.epochs = config.epochs;
  train.minibatch = config.minibatch;
  train.l2 = config.l2;
  train.seed = config.StageSeed("train");

  TrainResult trained;
  if (config.objective == "pairwise") {
    train.objective = TrainObjective::kPairwise;
    trained = TrainPairwise(by_id, edges, train);
  } else if (config.objective == "regression") {
    train.objective = TrainObjective::kRegression;
    // Targets are unit-rescaled BT scores fitted to the training pairs.
    auto bt = FitBradleyTerry(edges);
    std::vector<std::pair<std::string, double>> targets;
    for (const auto& [id, score] : bt.score01) {
      auto it = by_id.find(id);
      if (it != by_id.end()) targets.emplace_back(it->second.text, score);
    }
    trained = TrainRegression(targets, train);
  } else {
    throw ValidationError("unknown objective '" + config.objective + "'");
  }

  SaveModel(trained.model, OutPath(config, "model.json"));
  std::vector<std::vector<std::string>> log_rows;
  for (size_t e = 0; e < trained.log.epoch_loss.size(); ++e) {
    std::ostringstream loss;
    loss << std::setprecision(17) << trained.log.epoch_loss[e];
    log_rows.push_back({std::to_string(e), loss.str()});
  }
  WriteCsv(OutPath(config, "training_log.csv"), {"epoch", "loss"}, log_rows);

  std::map<std::string, double> scored;
  for (const auto& item : items)
    scored[item.id] = ModelScore(trained.model, item.text);
  WriteScoreVectorCsv(scored, OutPath(config, "scores_reward.csv"));

  StageResult result;
  result.outputs = {"model.json", "training_log.csv", "scores_reward.csv"};
  if (trained.log.skipped_ties > 0) {
    result.warnings.push_back(std::to_string(trained.log.skipped_ties) +
                              " tie annotations skipped in pairwise training");
  }
  return result;
}

StageResult CmdEvaluate(const RunConfig& config) {
  ValidateConfig(config,
                 {config.reference_scores_path, config.method_scores_path,
                  config.split_path, config.eval_pairs_path});
  EnsureOutputDir(config);

  auto reference = ReadScoreVectorCsv(config.reference_scores_path);
  auto method = ReadScoreVectorCsv(config.method_scores_path);
  auto split = ReadSplitJson(config.split_path);
  auto eval_edges = ReadPairs(config.eval_pairs_path);

  std::vector<PredictedComparison> predictions;
  if (!config.predictions_path.empty()) {
    for (const auto& e : ReadPairs(config.predictions_path)) {
      predictions.push_back({e.left, e.right, e.outcome});
    }
  } else {
    predictions = InduceChoices(method, eval_edges, config.tie_band);
  }

  MetricReport report;
  report.bootstrap_resamples = config.bootstrap_resamples;
  report.bootstrap_seed = config.StageSeed("bootstrap");

  auto accuracy_result = PairwiseAccuracy(predictions, eval_edges);
  report.accuracy = accuracy_result.accuracy;

  // Score metrics are computed on the held-out items only.
  std::vector<double> ref_test, method_test;
  for (const auto& id : split.test_items) {
    auto r = reference.find(id);
    auto m = method.find(id);
    if (r == reference.end() || m == method.end()) continue;
    ref_test.push_back(r->second);
    method_test.push_back(m->second);
  }
  if (ref_test.size() < 3) {
    throw ValidationError(
        "fewer than 3 held-out items carry both reference and method scores; "
        "did score-pointwise or fit-bt run?");
  }
  report.spearman_rho = SpearmanRho(method_test, ref_test);
  report.rmse = Rmse(method_test, ref_test);

  // Bootstrap units: eval edges for accuracy, test items for rho/RMSE.
  report.accuracy_boot = Bootstrap(
      [&](const std::vector<size_t>& indices) {
        std::vector<ComparisonEdge> resampled;
        resampled.reserve(indices.size());
        for (size_t idx : indices) resampled.push_back(eval_edges[idx]);
        return PairwiseAccuracy(predictions, resampled).accuracy;
      },
      eval_edges.size(), config.bootstrap_resamples,
      DeriveSeed(report.bootstrap_seed, "accuracy"));
  report.rho_boot = Bootstrap(
      [&](const std::vector<size_t>& indices) {
        std::vector<double> a, b;
        for (size_t idx : indices) {
          a.push_back(method_test[idx]);
          b.push_back(ref_test[idx]);
        }
        return SpearmanRho(a, b);
      },
      ref_test.size(), config.bootstrap_resamples,
      DeriveSeed(report.bootstrap_seed, "rho"));
  report.rmse_boot = Bootstrap(
      [&](const std::vector<size_t>& indices) {
        std::vector<double> a, b;
        for (size_t idx : indices) {
          a.push_back(method_test[idx]);
          b.push_back(ref_test[idx]);
        }
        return Rmse(a, b);
      },
      ref_test.size(), config.bootstrap_resamples,
      DeriveSeed(report.bootstrap_seed, "rmse"));

  WriteMetricReportJson(report, OutPath(config, "metric_report.json"));
  StageResult result;
  result.outputs = {"metric_report.json"};
  if (!accuracy_result.uncovered.empty()) {
    result.warnings.push_back(std::to_string(accuracy_result.uncovered.size()) +
                              " reference pairs had no prediction");
  }
  return result;
}

StageResult CmdDisagreement(const RunConfig& config) {
  ValidateConfig(config, {config.reference_scores_path,
                          config.method_scores_path, config.items_path});
  EnsureOutputDir(config);
  auto items_list = ReadItems(config.items_path);
  std::map<std::string, Item> items;
  for (const auto& item : items_list) items[item.id] = item;
  auto first = RescaleUnitInterval(ReadScoreVectorCsv(config.reference_scores_path));
  auto second = RescaleUnitInterval(ReadScoreVectorCsv(config.method_scores_path));

  DisagreementConfig dc;
  dc.sample_per_extreme_bin = config.disagreement_samples;
  dc.seed = config.StageSeed("disagreement");
  dc.tie_band = config.tie_band;
  auto selection = SelectDisagreementPairs(first, second, items, dc);

  std::vector<std::vector<std::string>> rows;
  for (const auto& rec : selection.sampled) {
    std::ostringstream d1, d2, dd;
    d1 << std::setprecision(17) << rec.d_first;
    d2 << std::setprecision(17) << rec.d_second;
    dd << std::setprecision(17) << rec.magnitude;
    rows.push_back({rec.left, rec.right, d1.str(), d2.str(), dd.str(),
                    std::to_string(rec.bin)});
  }
  WriteCsv(OutPath(config, "disagreement.csv"),
           {"left_id", "right_id", "d_reference", "d_method", "D", "bin"}, rows);
  StageResult result;
  result.outputs = {"disagreement.csv"};
  if (!selection.note.empty()) result.warnings.push_back(selection.note);
  result.warnings.push_back(
      "qualifying pairs: " + std::to_string(selection.qualifying_pairs) +
      " of " + std::to_string(selection.candidate_pairs) + " candidates");
  return result;
}

StageResult CmdReport(const RunConfig& config) {
  EnsureOutputDir(config);
  std::vector<MethodMetricsRow> rows;
  std::vector<fs::path> report_files;
  for (const auto& entry : fs::directory_iterator(config.output_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.rfind("metric_report", 0) == 0 && entry.path().extension() == ".json") {
      report_files.push_back(entry.path());
    }
  }
  std::sort(report_files.begin(), report_files.end());
  if (report_files.empty()) {
    throw ValidationError("no metric_report*.json found in " + config.output_dir +
                          "; run evaluate first");
  }
  for (const auto& path : report_files) {
    MethodMetricsRow row;
    row.name = path.stem().string();
    row.report = ReadMetricReportJson(path.string());
    rows.push_back(std::move(row));
  }
  std::ofstream out(OutPath(config, "report.txt"));
  out << FormatMetricTable(rows);
  out.close();

  StageResult result;
  result.outputs = {"report.txt"};
  // Scatter data for score-vs-score plots when both score files are given.
  if (!config.reference_scores_path.empty() &&
      !config.method_scores_path.empty() &&
      fs::exists(config.reference_scores_path) &&
      fs::exists(config.method_scores_path)) {
    auto reference = ReadScoreVectorCsv(config.reference_scores_path);
    auto method = ReadScoreVectorCsv(config.method_scores_path);
    std::vector<std::vector<std::string>> scatter;
    for (const auto& [id, r] : reference) {
      auto m = method.find(id);
      if (m == method.end()) continue;
      std::ostringstream rs, ms;
      rs << std::setprecision(17) << r;
      ms << std::setprecision(17) << m->second;
      scatter.push_back({id, rs.str(), ms.str()});
    }
    WriteCsv(OutPath(config, "scatter.csv"), {"id", "reference", "method"},
             scatter);
    result.outputs.push_back("scatter.csv");
  }
  return result;
}

StageResult RunCommand(const std::string& command, const RunConfig& config) {
  auto now = [] {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
  int64_t started = now();
  StageResult result;
  if (command == "ingest") {
    result = CmdIngest(config);
  } else if (command == "stats") {
    result = CmdStats(config);
  } else if (command == "split") {
    result = CmdSplit(config);
  } else if (command == "fit-bt") {
    result = CmdFitBt(config);
  } else if (command == "score-pointwise") {
    result = CmdScorePointwise(config);
  } else if (command == "judge-pairwise") {
    result = CmdJudgePairwise(config);
  } else if (command == "train") {
    result = CmdTrain(config);
  } else if (command == "evaluate") {
    result = CmdEvaluate(config);
  } else if (command == "disagreement") {
    result = CmdDisagreement(config);
  } else if (command == "report") {
    result = CmdReport(config);
  } else {
    throw ValidationError("unknown command '" + command + "'");
  }
  UpdateManifest(command, config, started, now());
  return result;
}

}  // namespace textscale
