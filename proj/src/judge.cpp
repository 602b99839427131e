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

#include "textscale/judge.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "textscale/error.hpp"
#include "textscale/rng.hpp"

namespace textscale {
namespace {

using nlohmann::json;

constexpr char kTextSlot[] = "{text}";

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string ExemplarBlock(const ExemplarSet& exemplars) {
  std::ostringstream block;
  for (const auto& ex : exemplars.entries) {
    block << "Input: " << ex.text << "\nResponse: " << ex.answer << "\n\n";
  }
  return block.str();
}

// Replaces the single {text} slot with the payload; the exemplar block, if
// any, goes immediately before the line holding the slot.
std::string Render(const PromptTemplate& tmpl, const std::string& payload,
                   const ExemplarSet* exemplars) {
  tmpl.Validate();
  size_t slot = tmpl.body.find(kTextSlot);
  std::string out = tmpl.body;
  if (exemplars != nullptr && !exemplars->entries.empty()) {
    size_t line_start = tmpl.body.rfind('\n', slot);
    line_start = line_start == std::string::npos ? 0 : line_start + 1;
    out = tmpl.body.substr(0, line_start) + ExemplarBlock(*exemplars) +
          tmpl.body.substr(line_start);
    slot = out.find(kTextSlot);
  }
  return out.substr(0, slot) + payload + out.substr(slot + sizeof(kTextSlot) - 1);
}

}  // namespace

ScaleSpec ScaleSpec::IntegerRange(int lo, int hi) {
  ScaleSpec spec;
  for (int v = lo; v <= hi; ++v) {
    spec.tokens.push_back(std::to_string(v));
    spec.to_int[std::to_string(v)] = v;
  }
  spec.Validate();
  return spec;
}

void ScaleSpec::Validate() const {
  if (tokens.empty()) throw ValidationError("scale has no tokens");
  std::set<std::string> seen_tokens;
  std::set<int> seen_ints;
  int prev = 0;
  bool first = true;
  for (const auto& t : tokens) {
    if (!seen_tokens.insert(t).second)
      throw ValidationError("duplicate scale token '" + t + "'");
    auto it = to_int.find(t);
    if (it == to_int.end())
      throw ValidationError("scale token '" + t + "' has no integer mapping");
    if (!seen_ints.insert(it->second).second)
      throw ValidationError("scale integer mapping is not injective");
    if (!first && it->second <= prev)
      throw ValidationError("scale integers must be strictly increasing");
    prev = it->second;
    first = false;
  }
}

void PromptTemplate::Validate() const {
  size_t first = body.find(kTextSlot);
  if (first == std::string::npos)
    throw ValidationError("template '" + task_id + "' is missing the {text} slot");
  if (body.find(kTextSlot, first + 1) != std::string::npos)
    throw ValidationError("template '" + task_id + "' has more than one {text} slot");
}

PromptTemplate PromptTemplate::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open template file: " + path);
  PromptTemplate tmpl;
  std::string line;
  bool in_front_matter = true;
  std::ostringstream body;
  bool first_body_line = true;
  while (std::getline(in, line)) {
    if (in_front_matter) {
      if (Trim(line) == "---") {
        in_front_matter = false;
        continue;
      }
      size_t colon = line.find(':');
      if (colon == std::string::npos) {
        throw ValidationError("bad front-matter line in " + path + ": " + line);
      }
      std::string key = Trim(line.substr(0, colon));
      std::string value = Trim(line.substr(colon + 1));
      if (key == "task") {
        tmpl.task_id = value;
      } else if (key == "mode") {
        if (value == "pointwise") {
          tmpl.mode = PromptMode::kPointwise;
        } else if (value == "pairwise") {
          tmpl.mode = PromptMode::kPairwise;
        } else {
          throw ValidationError("unknown template mode '" + value + "' in " + path);
        }
      } else {
        throw ValidationError("unknown front-matter key '" + key + "' in " + path);
      }
    } else {
      if (!first_body_line) body << "\n";
      body << line;
      first_body_line = false;
    }
  }
  if (in_front_matter) {
    throw ValidationError("template file " + path + " has no '---' separator");
  }
  tmpl.body = body.str();
  tmpl.Validate();
  return tmpl;
}

ExemplarSet DrawExemplars(const std::vector<Exemplar>& pool, int k,
                          uint64_t seed) {
  if (k < 0) throw ValidationError("exemplar count must be non-negative");
  if (static_cast<size_t>(k) > pool.size()) {
    throw ValidationError("exemplar pool smaller than requested k=" +
                          std::to_string(k));
  }
  ExemplarSet set;
  set.k = k;
  set.seed = seed;
  std::vector<size_t> order(pool.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(&order);
  for (int i = 0; i < k; ++i) set.entries.push_back(pool[order[i]]);
  return set;
}

double TokenDistribution::Total() const {
  double t = 0.0;
  for (const auto& [tok, p] : probs) t += p;
  return t;
}

void TokenDistribution::Validate() const {
  for (const auto& [tok, p] : probs) {
    if (p < 0.0 || !std::isfinite(p))
      throw ValidationError("negative or non-finite probability for token '" +
                            tok + "'");
  }
  if (Total() > 1.0 + 1e-6)
    throw ValidationError("token probabilities exceed 1");
}

std::string RenderPrompt(const PromptTemplate& tmpl, const std::string& text,
                         const ExemplarSet* exemplars) {
  if (tmpl.mode != PromptMode::kPointwise)
    throw ValidationError("single-text payload requires a pointwise template");
  return Render(tmpl, text, exemplars);
}

std::string RenderPrompt(const PromptTemplate& tmpl, const std::string& first,
                         const std::string& second,
                         const ExemplarSet* exemplars) {
  return RenderPairVariant(tmpl, first, second, AugmentationVariant{}, exemplars);
}

std::string RenderPairVariant(const PromptTemplate& tmpl,
                              const std::string& item1_text,
                              const std::string& item2_text,
                              AugmentationVariant variant,
                              const ExemplarSet* exemplars) {
  if (tmpl.mode != PromptMode::kPairwise)
    throw ValidationError("pair payload requires a pairwise template");
  // reverse_order flips which item is presented first; swap_labels gives
  // the first position the label "Text 2".
  const std::string& first = variant.reverse_order ? item2_text : item1_text;
  const std::string& second = variant.reverse_order ? item1_text : item2_text;
  int first_label = variant.swap_labels ? 2 : 1;
  int second_label = variant.swap_labels ? 1 : 2;
  std::ostringstream payload;
  payload << "Text " << first_label << ": " << first << "\n"
          << "Text " << second_label << ": " << second;
  return Render(tmpl, payload.str(), exemplars);
}

TokenDistribution MockJudge::Query(const std::string& prompt,
                                   const std::vector<std::string>& candidates) {
  if (candidates.empty()) throw ValidationError("no candidate tokens");

  // The actual input block comes after any exemplars, so the relevant
  // occurrences are the last ones.
  auto last_labeled_text = [&](const std::string& label)
      -> std::optional<std::string> {
    size_t pos = prompt.rfind(label);
    if (pos == std::string::npos) return std::nullopt;
    size_t start = pos + label.size();
    size_t end = prompt.find('\n', start);
    if (end == std::string::npos) end = prompt.size();
    return prompt.substr(start, end - start);
  };

  auto latent_of = [&](const std::string& text) {
    auto it = config_.latent_by_text.find(text);
    if (it == config_.latent_by_text.end()) {
      throw ValidationError("mock judge has no latent score for a presented text");
    }
    double value = it->second;
    if (config_.noise > 0.0) {
      Rng rng(SplitMix64(Fnv1a64(prompt) ^ config_.seed));
      value += rng.NextUniform(-config_.noise, config_.noise);
    }
    return value;
  };

  auto text1 = last_labeled_text("Text 1: ");
  auto text2 = last_labeled_text("Text 2: ");
  TokenDistribution dist;
  dist.source = Name();

  if (text1 && text2) {
    // Pairwise. Position order determines where the bias lands.
    size_t pos1 = prompt.rfind("Text 1: ");
    size_t pos2 = prompt.rfind("Text 2: ");
    const std::string& first_text = pos1 < pos2 ? *text1 : *text2;
    const std::string& second_text = pos1 < pos2 ? *text2 : *text1;
    int label_of_first = pos1 < pos2 ? 1 : 2;
    double q0 = Sigmoid((latent_of(first_text) - latent_of(second_text)) /
                        config_.beta);
    double boost = (2.0 * Sigmoid(config_.position_bias) - 1.0) *
                   std::min(q0, 1.0 - q0);
    double q_first = q0 + boost;
    double p_token1 = label_of_first == 1 ? q_first : 1.0 - q_first;
    for (const auto& tok : candidates) {
      if (tok == "1") {
        dist.probs[tok] = p_token1;
      } else if (tok == "2") {
        dist.probs[tok] = 1.0 - p_token1;
      } else {
        dist.probs[tok] = 0.0;
      }
    }
    return dist;
  }

  // Pointwise: the known text occurring last in the prompt is the input.
  std::string matched;
  size_t best_pos = std::string::npos;
  for (const auto& [text, score] : config_.latent_by_text) {
    size_t pos = prompt.rfind(text);
    if (pos != std::string::npos &&
        (best_pos == std::string::npos || pos > best_pos)) {
      best_pos = pos;
      matched = text;
    }
  }
  if (best_pos == std::string::npos) {
    throw ValidationError("mock judge found no known text in the prompt");
  }
  double target = latent_of(matched);
  std::vector<double> weights(candidates.size(), 0.0);
  double total = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    int value = 0;
    try {
      value = std::stoi(candidates[i]);
    } catch (...) {
      weights[i] = 0.0;
      continue;
    }
    double d = value - target;
    weights[i] = std::exp(-d * d / (2.0 * config_.tau * config_.tau));
    total += weights[i];
  }
  if (total <= 0.0) {
    throw ValidationError("mock judge cannot place mass on any candidate");
  }
  size_t modal = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    weights[i] /= total;
    if (weights[i] > weights[modal]) modal = i;
  }
  if (config_.heaping > 0.0) {
    for (size_t i = 0; i < weights.size(); ++i)
      weights[i] *= 1.0 - config_.heaping;
    weights[modal] += config_.heaping;
  }
  for (size_t i = 0; i < candidates.size(); ++i)
    dist.probs[candidates[i]] = weights[i];
  return dist;
}

ResponseCache::ResponseCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // a missing cache file is an empty cache
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    json record = json::parse(line);
    TokenDistribution dist;
    dist.source = record.value("source", "");
    dist.partial = record.value("partial", false);
    for (const auto& [tok, p] : record.at("probs").items()) {
      dist.probs[tok] = p.get<double>();
    }
    entries_[record.at("request_hash").get<std::string>()] = std::move(dist);
  }
}

std::string ResponseCache::RequestHash(const std::string& prompt,
                                       const std::vector<std::string>& candidates) {
  std::string keyed = prompt;
  for (const auto& c : candidates) {
    keyed.push_back('\x1f');
    keyed += c;
  }
  std::ostringstream hex;
  hex << std::hex << Fnv1a64(keyed) << "-" << std::hex
      << Fnv1a64(keyed, 0x5bd1e995u);
  return hex.str();
}

std::optional<TokenDistribution> ResponseCache::Lookup(
    const std::string& request_hash) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(request_hash);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::Store(const std::string& request_hash,
                          const std::string& prompt_digest,
                          const std::vector<std::string>& candidates,
                          const TokenDistribution& dist) {
  std::unique_lock lock(mutex_);
  if (entries_.count(request_hash)) return;
  entries_[request_hash] = dist;
  json record;
  record["request_hash"] = request_hash;
  record["prompt_digest"] = prompt_digest;
  record["candidates"] = candidates;
  record["probs"] = json::object();
  for (const auto& [tok, p] : dist.probs) record["probs"][tok] = p;
  record["source"] = dist.source;
  record["partial"] = dist.partial;
  record["timestamp"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  std::ofstream out(path_, std::ios::app);
  out << record.dump() << "\n";
}

size_t ResponseCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

TokenDistribution ReplayJudge::Query(const std::string& prompt,
                                     const std::vector<std::string>& candidates) {
  auto hash = ResponseCache::RequestHash(prompt, candidates);
  auto hit = cache_->Lookup(hash);
  if (!hit) {
    throw CacheMissError("replay cache has no record for request " + hash);
  }
  return *hit;
}

TokenDistribution CachingJudge::Query(const std::string& prompt,
                                      const std::vector<std::string>& candidates) {
  auto hash = ResponseCache::RequestHash(prompt, candidates);
  auto hit = cache_->Lookup(hash);
  if (hit) return *hit;
  TokenDistribution dist = inner_->Query(prompt, candidates);
  std::ostringstream digest;
  digest << std::hex << Fnv1a64(prompt);
  cache_->Store(hash, digest.str(), candidates, dist);
  return dist;
}

struct HttpJudge::Impl {
  std::mutex mutex;
  std::condition_variable slot_free;
  int in_flight = 0;
};

HttpJudge::HttpJudge(HttpJudgeConfig config)
    : config_(std::move(config)), impl_(new Impl) {}

HttpJudge::~HttpJudge() = default;

TokenDistribution HttpJudge::Query(const std::string& prompt,
                                   const std::vector<std::string>& candidates) {
  if (candidates.empty()) throw ValidationError("no candidate tokens");
  {
    std::unique_lock lock(impl_->mutex);
    impl_->slot_free.wait(lock, [&] {
      return impl_->in_flight < config_.max_in_flight;
    });
    ++impl_->in_flight;
  }
  struct SlotGuard {
    Impl* impl;
    ~SlotGuard() {
      std::lock_guard lock(impl->mutex);
      --impl->in_flight;
      impl->slot_free.notify_one();
    }
  } guard{impl_.get()};

  json body;
  body["model"] = config_.model;
  body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
  body["max_tokens"] = 1;
  body["temperature"] = 0;
  body["logprobs"] = true;
  body["top_logprobs"] = config_.top_logprobs;

  std::string api_key;
  if (!config_.api_key_env.empty()) {
    const char* env = std::getenv(config_.api_key_env.c_str());
    if (env != nullptr) api_key = env;
  }

  std::string last_error;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    httplib::Client client(config_.base_url);
    client.set_read_timeout(config_.timeout_s, 0);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
    auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                           "application/json");
    if (!res) {
      last_error = "connection failure: " + httplib::to_string(res.error());
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "retryable status " + std::to_string(res->status);
    } else if (res->status != 200) {
      throw TransportError("judge endpoint returned status " +
                               std::to_string(res->status) + ": " + res->body,
                           attempt);
    } else {
      json reply = json::parse(res->body, nullptr, false);
      if (reply.is_discarded()) {
        last_error = "unparseable response body";
      } else {
        TokenDistribution dist;
        dist.source = Name();
        try {
          const auto& top = reply.at("choices").at(0).at("logprobs")
                                .at("content").at(0).at("top_logprobs");
          std::map<std::string, double> reported;
          for (const auto& entry : top) {
            reported[entry.at("token").get<std::string>()] =
                std::exp(entry.at("logprob").get<double>());
          }
          bool any = false;
          for (const auto& tok : candidates) {
            auto it = reported.find(tok);
            if (it != reported.end()) {
              dist.probs[tok] = it->second;
              any = true;
            } else {
              dist.probs[tok] = 0.0;
              dist.partial = true;
            }
          }
          if (!any) {
            throw CandidatesUnobservableError(
                "no candidate token appears among the provider's top-" +
                std::to_string(config_.top_logprobs) + " logprobs");
          }
          dist.Validate();
          return dist;
        } catch (const json::exception& e) {
          last_error = std::string("malformed logprobs payload: ") + e.what();
        }
      }
    }
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.backoff_ms * attempt));
    }
  }
  throw TransportError("judge query failed after " +
                           std::to_string(config_.max_attempts) +
                           " attempts: " + last_error,
                       config_.max_attempts);
}

}  // namespace textscale
