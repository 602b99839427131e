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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "textscale/error.hpp"
#include "textscale/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"textscale - scalar construct measurement from pairwise and "
               "pointwise judgments"};
  app.set_config("--config", "", "Key-value config file; flags override it");
  app.require_subcommand(1);

  textscale::RunConfig config;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--task", config.task, "Task identifier");
    cmd->add_option("--out", config.output_dir, "Output directory");
    cmd->add_option("--seed", config.root_seed, "Root seed for all stages");
    cmd->add_option("--items", config.items_path, "Items file (CSV or JSONL)");
    cmd->add_option("--pairs", config.pairs_path, "Pairs file (CSV or JSONL)");
  };
  auto add_judge = [&](CLI::App* cmd) {
    cmd->add_option("--judge", config.judge, "Judge kind: mock | replay | http");
    cmd->add_option("--cache", config.cache_path,
                    "Response cache (JSONL); enables replay");
    cmd->add_option("--mock-latents", config.mock_latents_path,
                    "CSV id,latent driving the mock judge");
    cmd->add_option("--mock-tau", config.mock_tau, "Mock pointwise spread");
    cmd->add_option("--mock-heaping", config.mock_heaping, "Mock heaping share");
    cmd->add_option("--mock-beta", config.mock_beta, "Mock pairwise softness");
    cmd->add_option("--mock-position-bias", config.mock_position_bias,
                    "Mock position bias (log-odds)");
    cmd->add_option("--mock-noise", config.mock_noise, "Mock latent jitter");
    cmd->add_option("--http-base-url", config.http_base_url, "Judge endpoint");
    cmd->add_option("--http-model", config.http_model, "Model name");
    cmd->add_option("--credentials-env", config.credentials_env,
                    "Environment variable holding the API key");
    cmd->add_option("--template", config.template_path, "Prompt template file");
    cmd->add_option("--shots", config.shots, "Few-shot exemplar count (0 or 5)");
    cmd->add_option("--exemplars", config.exemplar_pool_path,
                    "Exemplar pool CSV (text,answer)");
    cmd->add_option("--scale-lo", config.scale_lo, "Lowest scale integer");
    cmd->add_option("--scale-hi", config.scale_hi, "Highest scale integer");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate and normalize a dataset");
  add_common(ingest);
  auto* stats = app.add_subcommand("stats", "Comparison-graph statistics");
  add_common(stats);
  auto* split = app.add_subcommand("split", "High-degree held-out split");
  add_common(split);
  split->add_option("--n-test", config.n_test, "Held-out item count");
  auto* fit_bt = app.add_subcommand("fit-bt", "Fit the Bradley-Terry model");
  add_common(fit_bt);
  auto* score_pw = app.add_subcommand("score-pointwise",
                                      "Probability-weighted pointwise scoring");
  add_common(score_pw);
  add_judge(score_pw);
  auto* judge_pw = app.add_subcommand("judge-pairwise",
                                      "Debiased pairwise judging");
  add_common(judge_pw);
  add_judge(judge_pw);
  judge_pw->add_option("--eval-pairs", config.eval_pairs_path,
                       "Pairs to judge (defaults to --pairs)");
  judge_pw->add_option("--tie-band", config.tie_band, "Tie band around 0.5");
  auto* train = app.add_subcommand("train", "Train the linear reward model");
  add_common(train);
  train->add_option("--objective", config.objective, "pairwise | regression");
  train->add_option("--train-pairs", config.train_pairs_path,
                    "Training pairs (defaults to --pairs)");
  train->add_option("--learning-rate", config.learning_rate, "Learning rate");
  train->add_option("--epochs", config.epochs, "Epochs");
  train->add_option("--minibatch", config.minibatch, "Minibatch size; 0 = full");
  train->add_option("--l2", config.l2, "L2 penalty");
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy / Spearman / RMSE");
  add_common(evaluate);
  evaluate->add_option("--reference-scores", config.reference_scores_path,
                       "Ground-truth scores CSV (fit-bt output)");
  evaluate->add_option("--method-scores", config.method_scores_path,
                       "Method scores CSV");
  evaluate->add_option("--predictions", config.predictions_path,
                       "Predicted pairs CSV (else induced from scores)");
  evaluate->add_option("--split", config.split_path, "split.json from split");
  evaluate->add_option("--eval-pairs", config.eval_pairs_path,
                       "Evaluation pairs CSV");
  evaluate->add_option("--bootstrap", config.bootstrap_resamples,
                       "Bootstrap resamples");
  evaluate->add_option("--tie-band", config.tie_band, "Tie band for induced choices");
  auto* disagreement = app.add_subcommand(
      "disagreement", "Sample pairs where two scorings contradict");
  add_common(disagreement);
  disagreement->add_option("--reference-scores", config.reference_scores_path,
                           "First score vector CSV");
  disagreement->add_option("--method-scores", config.method_scores_path,
                           "Second score vector CSV");
  disagreement->add_option("--samples", config.disagreement_samples,
                           "Pairs sampled per extreme bin");
  disagreement->add_option("--tie-band", config.tie_band, "Tie band");
  auto* report = app.add_subcommand("report", "Aggregate metric reports");
  add_common(report);
  report->add_option("--reference-scores", config.reference_scores_path,
                     "Reference scores for the scatter CSV");
  report->add_option("--method-scores", config.method_scores_path,
                     "Method scores for the scatter CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    std::string command = app.get_subcommands().front()->get_name();
    auto result = textscale::RunCommand(command, config);
    for (const auto& warning : result.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    for (const auto& output : result.outputs) {
      std::cout << config.output_dir << "/" << output << "\n";
    }
    return 0;
  } catch (const textscale::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
