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

#ifndef TEXTSCALE_JUDGE_HPP_
#define TEXTSCALE_JUDGE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "textscale/graph.hpp"

namespace textscale {

// Ordered answer-token candidates and their integer values. Integers must
// be strictly increasing along the token list.
struct ScaleSpec {
  std::vector<std::string> tokens;
  std::map<std::string, int> to_int;

  static ScaleSpec IntegerRange(int lo, int hi);  // single-token integers
  static ScaleSpec Default19() { return IntegerRange(1, 9); }
  void Validate() const;
};

enum class PromptMode { kPointwise, kPairwise };

struct PromptTemplate {
  std::string task_id;
  PromptMode mode = PromptMode::kPointwise;
  std::string body;  // contains exactly one {text} slot

  void Validate() const;
  static PromptTemplate FromFile(const std::string& path);  // front-matter + body
};

struct Exemplar {
  std::string text;
  std::string answer;
};

struct ExemplarSet {
  int k = 5;
  uint64_t seed = 0;
  std::vector<Exemplar> entries;
};

// Draws k exemplars from the pool without replacement, seeded.
ExemplarSet DrawExemplars(const std::vector<Exemplar>& pool, int k,
                          uint64_t seed);

// Probability mass over candidate answer tokens as reported by a judge.
// Probabilities are raw provider values: non-negative, total at most 1
// (plus float slack); candidates the provider did not report stay at 0 and
// set the partial flag.
struct TokenDistribution {
  std::map<std::string, double> probs;
  std::string source;
  bool partial = false;

  double Total() const;
  void Validate() const;
};

// Which of the two items carries the label "Text 1" and which is presented
// first. The four (swap, reverse) combinations cover every arrangement.
struct AugmentationVariant {
  bool swap_labels = false;
  bool reverse_order = false;
};

std::string RenderPrompt(const PromptTemplate& tmpl, const std::string& text,
                         const ExemplarSet* exemplars = nullptr);
std::string RenderPrompt(const PromptTemplate& tmpl, const std::string& first,
                         const std::string& second,
                         const ExemplarSet* exemplars = nullptr);
std::string RenderPairVariant(const PromptTemplate& tmpl,
                              const std::string& item1_text,
                              const std::string& item2_text,
                              AugmentationVariant variant,
                              const ExemplarSet* exemplars = nullptr);

// Any system answering prompts with a distribution over candidate tokens.
// Implementations must be safe for concurrent Query calls.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual TokenDistribution Query(const std::string& prompt,
                                  const std::vector<std::string>& candidates) = 0;
  virtual std::string Name() const = 0;
};

// Deterministic stand-in for an LLM judge, driven by latent item scores
// keyed by item text.
//
// Pointwise: probabilities proportional to exp(-(n(s) - s*)^2 / (2 tau^2))
// over the scale; the heaping parameter h reallocates mass
// p' = (1 - h) p + h at the modal token.
//
// Pairwise: the unbiased preference for the first-position item is
// q0 = sigma((s_first - s_second) / beta). Position bias delta (log-odds
// units) adds a first-position boost of (2 sigma(delta) - 1) *
// min(q0, 1 - q0) in probability space, which keeps q in [0, 1] for any
// delta and cancels exactly under the four-variant averaging.
struct MockJudgeConfig {
  std::map<std::string, double> latent_by_text;
  double tau = 0.5;
  double heaping = 0.0;
  double beta = 1.0;
  double position_bias = 0.0;
  double noise = 0.0;  // seeded per-prompt jitter on the latent score
  uint64_t seed = 0;
};

class MockJudge : public Judge {
 public:
  explicit MockJudge(MockJudgeConfig config) : config_(std::move(config)) {}
  TokenDistribution Query(const std::string& prompt,
                          const std::vector<std::string>& candidates) override;
  std::string Name() const override { return "mock"; }

 private:
  MockJudgeConfig config_;
};

// Append-only JSON Lines response cache. Concurrent readers, serialized
// writers.
class ResponseCache {
 public:
  explicit ResponseCache(std::string path);
  std::optional<TokenDistribution> Lookup(const std::string& request_hash) const;
  void Store(const std::string& request_hash, const std::string& prompt_digest,
             const std::vector<std::string>& candidates,
             const TokenDistribution& dist);
  size_t size() const;

  static std::string RequestHash(const std::string& prompt,
                                 const std::vector<std::string>& candidates);

 private:
  std::string path_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, TokenDistribution> entries_;
};

// Serves queries from a cache only; a miss is an error.
class ReplayJudge : public Judge {
 public:
  explicit ReplayJudge(std::shared_ptr<ResponseCache> cache)
      : cache_(std::move(cache)) {}
  TokenDistribution Query(const std::string& prompt,
                          const std::vector<std::string>& candidates) override;
  std::string Name() const override { return "replay"; }

 private:
  std::shared_ptr<ResponseCache> cache_;
};

// Wraps a judge with read-through caching keyed by content hash.
class CachingJudge : public Judge {
 public:
  CachingJudge(std::shared_ptr<Judge> inner, std::shared_ptr<ResponseCache> cache)
      : inner_(std::move(inner)), cache_(std::move(cache)) {}
  TokenDistribution Query(const std::string& prompt,
                          const std::vector<std::string>& candidates) override;
  std::string Name() const override { return inner_->Name(); }

 private:
  std::shared_ptr<Judge> inner_;
  std::shared_ptr<ResponseCache> cache_;
};

// OpenAI-compatible chat-completions judge requesting token logprobs.
// Logprobs are exponentiated without renormalizing across candidates; the
// pointwise scale mass handles normalization downstream.
struct HttpJudgeConfig {
  std::string base_url;   // e.g. "http://localhost:8080"
  std::string model;
  std::string api_key_env;  // credentials only ever come from this env var
  int top_logprobs = 20;
  int max_attempts = 3;
  int backoff_ms = 250;
  int max_in_flight = 4;
  int timeout_s = 60;
};

class HttpJudge : public Judge {
 public:
  explicit HttpJudge(HttpJudgeConfig config);
  ~HttpJudge() override;
  TokenDistribution Query(const std::string& prompt,
                          const std::vector<std::string>& candidates) override;
  std::string Name() const override { return "http:" + config_.model; }

 private:
  struct Impl;
  HttpJudgeConfig config_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace textscale

#endif  // TEXTSCALE_JUDGE_HPP_
