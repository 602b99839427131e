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

// Regenerates everything under fixtures/. All randomness is seeded, so the
// files are reproducible; expected statistics are written from closed-form
// derivations, independent of the library's own computations.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "textscale/graph.hpp"
#include "textscale/io.hpp"
#include "textscale/rng.hpp"
#include "textscale/synthetic.hpp"

namespace fs = std::filesystem;
using namespace textscale;

namespace {

std::string PairId(int i) {  // 1-based, zero padded
  std::ostringstream s;
  s << "p" << std::setw(2) << std::setfill('0') << i;
  return s.str();
}

// 60 disagreement pairs engineered so that:
//   - majority votes tally 21 first / 21 second / 13 tie / 5 invalid,
//   - with the method choices below, the majority win rate is 41/18/1,
//   - the bundled Dawid-Skene labels cover 51 pairs tallying 35/15/1.
void WriteWinRateFixture(const std::string& dir) {
  fs::create_directories(dir);
  std::vector<std::vector<std::string>> annotations;
  auto add_row = [&](int pair, std::initializer_list<const char*> labels) {
    int a = 0;
    for (const char* label : labels) {
      annotations.push_back({PairId(pair), "ann" + std::to_string(a++), label});
    }
  };
  for (int i = 1; i <= 21; ++i) add_row(i, {"1", "1", "1", "2"});
  for (int i = 22; i <= 42; ++i) add_row(i, {"2", "2", "2", "tie"});
  for (int i = 43; i <= 55; ++i) add_row(i, {"tie", "tie", "tie", "1"});
  for (int i = 56; i <= 60; ++i) add_row(i, {"1", "1", "2", "tie"});
  WriteCsv(dir + "/annotations.csv", {"pair_id", "annotator_id", "label"},
           annotations);

  std::vector<std::vector<std::string>> llm, bt;
  for (int i = 1; i <= 60; ++i) {
    bool llm_first = i <= 21 || i == 42 || i >= 43;
    if (i >= 22 && i <= 41) llm_first = false;
    llm.push_back({PairId(i), llm_first ? "1" : "2"});
    bt.push_back({PairId(i), llm_first ? "2" : "1"});
  }
  WriteCsv(dir + "/llm_choices.csv", {"pair_id", "choice"}, llm);
  WriteCsv(dir + "/bt_choices.csv", {"pair_id", "choice"}, bt);

  std::vector<std::vector<std::string>> ds;
  for (int i = 1; i <= 18; ++i) ds.push_back({PairId(i), "1"});
  for (int i = 22; i <= 38; ++i) ds.push_back({PairId(i), "2"});
  ds.push_back({PairId(42), "2"});
  for (int i = 43; i <= 57; ++i) ds.push_back({PairId(i), "tie"});
  WriteCsv(dir + "/ds_labels.csv", {"pair_id", "label"}, ds);
}

// Two overlapping cliques: K12 and K13 sharing 4 vertices. Every statistic
// has a closed form; the vertex connectivity equals the overlap size.
void WriteStatsFixture(const std::string& dir) {
  fs::create_directories(dir);
  std::vector<std::string> shared, left, right;
  for (int i = 0; i < 4; ++i) shared.push_back("s" + std::to_string(i));
  for (int i = 0; i < 8; ++i) left.push_back("a" + std::to_string(i));
  for (int i = 0; i < 9; ++i) right.push_back("b" + std::to_string(i));

  std::vector<std::vector<std::string>> items;
  auto add_item = [&](const std::string& id) {
    items.push_back({id, "fixture text for vertex " + id});
  };
  for (const auto& id : shared) add_item(id);
  for (const auto& id : left) add_item(id);
  for (const auto& id : right) add_item(id);
  WriteCsv(dir + "/items.csv", {"id", "text"}, items);

  std::vector<std::string> clique_a = shared, clique_b = shared;
  clique_a.insert(clique_a.end(), left.begin(), left.end());
  clique_b.insert(clique_b.end(), right.begin(), right.end());

  std::vector<std::vector<std::string>> pairs;
  Rng rng(2024);
  auto add_clique = [&](const std::vector<std::string>& members,
                        bool skip_shared_pairs) {
    for (size_t i = 0; i < members.size(); ++i) {
      for (size_t j = i + 1; j < members.size(); ++j) {
        if (skip_shared_pairs && members[i][0] == 's' && members[j][0] == 's')
          continue;
        const char* outcome = rng.NextDouble() < 0.1 ? "tie"
                              : rng.NextDouble() < 0.5 ? "1" : "2";
        pairs.push_back({members[i], members[j], outcome, "ann0", "1"});
      }
    }
  };
  add_clique(clique_a, false);
  add_clique(clique_b, true);  // shared-shared pairs already present
  // 12 duplicate annotations of existing pairs: collapse for statistics,
  // count for num_pairs.
  for (int d = 0; d < 12; ++d) {
    auto base = pairs[rng.NextBelow(pairs.size())];
    pairs.push_back({base[0], base[1], "1", "ann1", "1"});
  }
  WriteCsv(dir + "/pairs.csv",
           {"left_id", "right_id", "outcome", "annotator", "count"}, pairs);

  // Closed forms. n = 21; distinct pairs = C(12,2)+C(13,2)-C(4,2) = 138.
  // Degrees: 8 vertices of 11, 9 of 12, 4 shared of 20.
  const double n = 21, distinct = 138;
  const double mean = 2.0 * distinct / n;
  const double var =
      (8 * std::pow(11 - mean, 2) + 9 * std::pow(12 - mean, 2) +
       4 * std::pow(20 - mean, 2)) / n;
  // Clustering: clique-only vertices have coefficient 1; each shared vertex
  // sees C(11,2)+C(12,2)-C(3,2) = 118 edges among its 20 neighbors.
  const double shared_c = 118.0 / 190.0;
  const double clustering = (17.0 * 1.0 + 4.0 * shared_c) / n;
  std::ofstream expected(dir + "/expected_stats.json");
  expected << std::setprecision(17);
  expected << "{\n"
           << "  \"num_items\": 21,\n"
           << "  \"num_pairs\": " << pairs.size() << ",\n"
           << "  \"vertex_connectivity\": 4,\n"
           << "  \"density\": " << distinct / (n * (n - 1) / 2) << ",\n"
           << "  \"degree_mean\": " << mean << ",\n"
           << "  \"degree_std\": " << std::sqrt(var) << ",\n"
           << "  \"avg_clustering\": " << clustering << ",\n"
           << "  \"connected\": true\n"
           << "}\n";
}

// Small synthetic world for the end-to-end pipeline: items, BT-law pairs,
// mock latents on the 1-9 scale, and a disjoint exemplar pool.
void WriteEndToEndFixture(const std::string& dir) {
  fs::create_directories(dir);
  const int kItems = 40;
  Rng rng(4242);
  std::vector<std::vector<std::string>> items, latents;
  std::map<std::string, double> lambda;
  std::vector<std::string> ids;
  const char* kTopics[] = {"rivers", "bridges", "markets", "harbors",
                           "orchards", "railways", "libraries", "gardens"};
  for (int i = 0; i < kItems; ++i) {
    std::ostringstream id;
    id << "t" << std::setw(3) << std::setfill('0') << i;
    double latent = 1.0 + 8.0 * rng.NextDouble();  // scale units
    std::ostringstream text;
    text << "statement " << i << " about " << kTopics[i % 8]
         << " with intensity marker " << std::setprecision(3) << latent;
    items.push_back({id.str(), text.str()});
    std::ostringstream lat;
    lat << std::setprecision(17) << latent;
    latents.push_back({id.str(), lat.str()});
    lambda[id.str()] = (latent - 5.0) / 2.0;  // latent strengths for the BT law
    ids.push_back(id.str());
  }
  WriteCsv(dir + "/items.csv", {"id", "text"}, items);
  WriteCsv(dir + "/mock_latents.csv", {"id", "latent"}, latents);

  auto schedule = RandomPairSchedule(ids, 12, 777);
  auto edges = SimulateComparisons(lambda, schedule, 778);
  WritePairsCsv(edges, dir + "/pairs.csv");

  std::vector<std::vector<std::string>> exemplars;
  for (int i = 0; i < 8; ++i) {
    std::ostringstream text;
    text << "exemplar statement " << i << " kept apart from the data";
    exemplars.push_back({text.str(), std::to_string(1 + i)});
  }
  WriteCsv(dir + "/exemplars.csv", {"text", "answer"}, exemplars);

  // Golden world snapshot for regression tests of the generator.
  SaveWorldJsonl(GenScoredTexts(12, 321, 20), dir + "/golden_world.jsonl");
}

}  // namespace

int main(int argc, char** argv) {
  std::string root = argc > 1 ? argv[1] : "fixtures";
  WriteWinRateFixture(root + "/winrate");
  WriteStatsFixture(root + "/stats");
  WriteEndToEndFixture(root + "/e2e");
  std::cout << "fixtures written under " << root << "\n";
  return 0;
}
