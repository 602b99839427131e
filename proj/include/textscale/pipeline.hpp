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

#ifndef TEXTSCALE_PIPELINE_HPP_
#define TEXTSCALE_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "textscale/judge.hpp"
#include "textscale/metrics.hpp"

namespace textscale {

inline constexpr char kCodeVersion[] = "0.1.0";

struct RunConfig {
  std::string task = "demo";

  // Data inputs.
  std::string items_path;
  std::string pairs_path;

  // Prompting.
  std::string template_path;
  int shots = 0;  // 0 or 5 expected; other values warn
  std::string exemplar_pool_path;  // CSV text,answer
  int scale_lo = 1;
  int scale_hi = 9;

  // Judge selection.
  std::string judge = "mock";  // mock | replay | http
  std::string mock_latents_path;  // CSV id,latent
  double mock_tau = 0.5;
  double mock_heaping = 0.0;
  double mock_beta = 1.0;
  double mock_position_bias = 0.0;
  double mock_noise = 0.0;
  std::string http_base_url;
  std::string http_model;
  std::string credentials_env = "TEXTSCALE_API_KEY";  // name only, never the value
  std::string cache_path;

  // Splitting / evaluation.
  int n_test = 100;
  int bootstrap_resamples = 25;
  double tie_band = 0.0;

  // Training.
  std::string objective = "pairwise";  // pairwise | regression
  double learning_rate = 0.1;
  int epochs = 10;
  int minibatch = 16;
  double l2 = 0.0;

  // Evaluate / disagreement inputs (files produced by earlier stages).
  std::string reference_scores_path;
  std::string method_scores_path;
  std::string predictions_path;
  std::string split_path;
  std::string eval_pairs_path;
  std::string train_pairs_path;
  int disagreement_samples = 30;

  // Run control.
  uint64_t root_seed = 7;
  std::string output_dir = "out";

  // Every stage's randomness is derived from the root seed and the stage
  // name; recorded in the manifest.
  uint64_t StageSeed(const std::string& stage) const;
};

// Aggregated validation: every problem is reported, not just the first.
void ValidateConfig(const RunConfig& config,
                    const std::vector<std::string>& required_files);

// Builds the judge stack per config, wrapping with the response cache when
// cache_path is set (mock/http are cached; replay reads the cache only).
std::shared_ptr<Judge> MakeJudge(const RunConfig& config,
                                 const std::vector<Item>& items);

struct StageResult {
  std::vector<std::string> outputs;   // files written, relative to output_dir
  std::vector<std::string> warnings;
};

StageResult CmdIngest(const RunConfig& config);
StageResult CmdStats(const RunConfig& config);
StageResult CmdSplit(const RunConfig& config);
StageResult CmdFitBt(const RunConfig& config);
StageResult CmdScorePointwise(const RunConfig& config);
StageResult CmdJudgePairwise(const RunConfig& config);
StageResult CmdTrain(const RunConfig& config);
StageResult CmdEvaluate(const RunConfig& config);
StageResult CmdDisagreement(const RunConfig& config);
StageResult CmdReport(const RunConfig& config);

// Runs a command by name, then writes/updates the manifest: config
// snapshot, code version, stage seeds, input digests, and a digest for
// every file present in the output directory.
StageResult RunCommand(const std::string& command, const RunConfig& config);

}  // namespace textscale

#endif  // TEXTSCALE_PIPELINE_HPP_
