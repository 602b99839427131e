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

#include "textscale/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "textscale/error.hpp"
#include "textscale/rng.hpp"

namespace textscale {
namespace {

using nlohmann::json;

bool HasSuffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool IsJsonl(const std::string& path) {
  return HasSuffix(path, ".jsonl") || HasSuffix(path, ".ndjson") ||
         HasSuffix(path, ".json");
}

std::string CsvEscape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

// Stateful parse of a whole CSV document; quoted fields may span lines.
std::vector<std::vector<std::string>> ParseCsvDocument(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool field_open = false;  // something seen since the last record break
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_open = true;
        break;
      case ',':
        fields.push_back(std::move(current));
        current.clear();
        field_open = true;
        break;
      case '\n':
        if (field_open || !current.empty() || !fields.empty()) {
          fields.push_back(std::move(current));
          current.clear();
          records.push_back(std::move(fields));
          fields.clear();
          field_open = false;
        }
        break;
      case '\r':
        break;
      default:
        current += c;
        field_open = true;
        break;
    }
  }
  if (field_open || !current.empty() || !fields.empty()) {
    fields.push_back(std::move(current));
    records.push_back(std::move(fields));
  }
  return records;
}

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return in;
}

std::string FormatDouble(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

int CsvTable::Column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int CsvTable::RequiredColumn(const std::string& name) const {
  int idx = Column(name);
  if (idx < 0) throw ValidationError("CSV is missing required column '" + name + "'");
  return idx;
}

CsvTable ReadCsv(const std::string& path) {
  auto in = OpenOrThrow(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto records = ParseCsvDocument(buffer.str());
  if (records.empty()) throw ValidationError("CSV file is empty: " + path);
  CsvTable table;
  table.header = std::move(records.front());
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

void WriteCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ",";
    out << CsvEscape(header[i]);
  }
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << CsvEscape(row[i]);
    }
    out << "\n";
  }
}

std::vector<Item> ReadItems(const std::string& path) {
  std::vector<Item> items;
  if (IsJsonl(path)) {
    auto in = OpenOrThrow(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json obj = json::parse(line);
      Item item;
      item.id = obj.at("id").get<std::string>();
      item.text = obj.at("text").get<std::string>();
      if (obj.contains("meta")) {
        for (const auto& [k, v] : obj["meta"].items())
          item.meta[k] = v.get<std::string>();
      }
      items.push_back(std::move(item));
    }
  } else {
    CsvTable table = ReadCsv(path);
    int id_col = table.RequiredColumn("id");
    int text_col = table.RequiredColumn("text");
    for (const auto& row : table.rows) {
      Item item;
      item.id = row.at(id_col);
      item.text = row.at(text_col);
      items.push_back(std::move(item));
    }
  }
  return items;
}

std::vector<ComparisonEdge> ReadPairs(const std::string& path) {
  std::vector<ComparisonEdge> edges;
  if (IsJsonl(path)) {
    auto in = OpenOrThrow(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json obj = json::parse(line);
      ComparisonEdge e;
      e.left = obj.at("left_id").get<std::string>();
      e.right = obj.at("right_id").get<std::string>();
      e.outcome = OutcomeFromToken(obj.at("outcome").is_string()
                                       ? obj["outcome"].get<std::string>()
                                       : std::to_string(obj["outcome"].get<int>()));
      if (obj.contains("annotator")) e.annotator = obj["annotator"].get<std::string>();
      if (obj.contains("count")) e.count = obj["count"].get<int>();
      edges.push_back(std::move(e));
    }
  } else {
    CsvTable table = ReadCsv(path);
    int left_col = table.RequiredColumn("left_id");
    int right_col = table.RequiredColumn("right_id");
    int outcome_col = table.RequiredColumn("outcome");
    int annotator_col = table.Column("annotator");
    int count_col = table.Column("count");
    for (const auto& row : table.rows) {
      ComparisonEdge e;
      e.left = row.at(left_col);
      e.right = row.at(right_col);
      e.outcome = OutcomeFromToken(row.at(outcome_col));
      if (annotator_col >= 0 && !row.at(annotator_col).empty())
        e.annotator = row.at(annotator_col);
      if (count_col >= 0 && !row.at(count_col).empty())
        e.count = std::stoi(row.at(count_col));
      edges.push_back(std::move(e));
    }
  }
  return edges;
}

void WriteItemsJsonl(const std::vector<Item>& items, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  for (const auto& item : items) {
    json obj;
    obj["id"] = item.id;
    obj["text"] = item.text;
    if (!item.meta.empty()) {
      obj["meta"] = json::object();
      for (const auto& [k, v] : item.meta) obj["meta"][k] = v;
    }
    out << obj.dump() << "\n";
  }
}

void WritePairsCsv(const std::vector<ComparisonEdge>& edges,
                   const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : edges) {
    rows.push_back({e.left, e.right, OutcomeToken(e.outcome), e.annotator,
                    std::to_string(e.count)});
  }
  WriteCsv(path, {"left_id", "right_id", "outcome", "annotator", "count"}, rows);
}

void WriteStatsJson(const GraphStats& stats, const std::string& path) {
  json obj;
  obj["num_items"] = stats.num_items;
  obj["num_pairs"] = stats.num_pairs;
  obj["vertex_connectivity"] = stats.vertex_connectivity;
  obj["connectivity_is_estimate"] = stats.connectivity_is_estimate;
  obj["density"] = stats.density;
  obj["degree_mean"] = stats.degree_mean;
  obj["degree_std"] = stats.degree_std;
  obj["avg_clustering"] = stats.avg_clustering;
  obj["connected"] = stats.connected;
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << obj.dump(2) << "\n";
}

void WriteBtScoresCsv(const BtScores& scores, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [id, lambda] : scores.lambda) {
    rows.push_back({id, FormatDouble(lambda), FormatDouble(scores.score01.at(id))});
  }
  WriteCsv(path, {"id", "lambda", "score01"}, rows);
}

void WriteBtReportJson(const BtScores& scores, const std::string& path) {
  json obj;
  obj["loglik"] = scores.loglik;
  obj["iterations"] = scores.iterations;
  obj["converged"] = scores.converged;
  obj["num_items"] = scores.lambda.size();
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << obj.dump(2) << "\n";
}

void WriteScoreDetailsCsv(const ScoreBatch& batch, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& d : batch.details) {
    rows.push_back({d.item_id, FormatDouble(d.weighted_mean),
                    FormatDouble(d.scale_mass), d.modal_token,
                    FormatDouble(d.modal_confidence)});
  }
  WriteCsv(path, {"id", "score", "p_s", "modal", "confidence"}, rows);
}

void WriteScoreVectorCsv(const std::map<std::string, double>& values,
                         const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [id, v] : values) rows.push_back({id, FormatDouble(v)});
  WriteCsv(path, {"id", "score"}, rows);
}

std::map<std::string, double> ReadScoreVectorCsv(const std::string& path) {
  CsvTable table = ReadCsv(path);
  int id_col = table.RequiredColumn("id");
  int score_col = table.Column("score");
  if (score_col < 0) score_col = table.Column("lambda");
  if (score_col < 0) throw ValidationError("no score or lambda column in " + path);
  std::map<std::string, double> values;
  for (const auto& row : table.rows)
    values[row.at(id_col)] = std::stod(row.at(score_col));
  return values;
}

void WriteJudgedPairsCsv(const std::vector<JudgedPair>& pairs,
                         const std::string& path) {
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string();
  };
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : pairs) {
    rows.push_back({p.pair_id, p.left_id, p.right_id, opt(p.raw.p00),
                    opt(p.raw.p10), opt(p.raw.p01), opt(p.raw.p11),
                    opt(p.aligned[0]), opt(p.aligned[1]), opt(p.aligned[2]),
                    opt(p.aligned[3]),
                    p.error.empty() ? FormatDouble(p.judgment.p_first) : "",
                    p.error.empty() ? OutcomeToken(p.judgment.choice) : "",
                    p.error});
  }
  WriteCsv(path,
           {"pair_id", "left_id", "right_id", "p00", "p10", "p01", "p11",
            "y00", "y10", "y01", "y11", "p_first", "choice", "error"},
           rows);
}

AnnotationMatrix ReadAnnotationsCsv(const std::string& path) {
  CsvTable table = ReadCsv(path);
  int pair_col = table.RequiredColumn("pair_id");
  int annotator_col = table.RequiredColumn("annotator_id");
  int label_col = table.RequiredColumn("label");

  AnnotationMatrix matrix;
  std::map<std::string, size_t> pair_index;
  std::map<std::string, size_t> annotator_index;
  std::vector<std::tuple<size_t, size_t, ComparisonOutcome>> cells;
  for (const auto& row : table.rows) {
    const auto& pair_id = row.at(pair_col);
    const auto& annotator_id = row.at(annotator_col);
    if (!pair_index.count(pair_id)) {
      pair_index[pair_id] = matrix.pair_ids.size();
      matrix.pair_ids.push_back(pair_id);
    }
    if (!annotator_index.count(annotator_id)) {
      annotator_index[annotator_id] = matrix.annotator_ids.size();
      matrix.annotator_ids.push_back(annotator_id);
    }
    cells.emplace_back(pair_index[pair_id], annotator_index[annotator_id],
                       OutcomeFromToken(row.at(label_col)));
  }
  matrix.labels.assign(matrix.pair_ids.size(),
                       std::vector<std::optional<ComparisonOutcome>>(
                           matrix.annotator_ids.size(), std::nullopt));
  for (const auto& [p, a, label] : cells) matrix.labels[p][a] = label;
  matrix.Validate();
  return matrix;
}

std::map<std::string, AggregateLabel> ReadAggregateLabelsCsv(
    const std::string& path) {
  CsvTable table = ReadCsv(path);
  int pair_col = table.RequiredColumn("pair_id");
  int label_col = table.RequiredColumn("label");
  std::map<std::string, AggregateLabel> labels;
  for (const auto& row : table.rows)
    labels[row.at(pair_col)] = AggregateLabelFromToken(row.at(label_col));
  return labels;
}

std::map<std::string, ComparisonOutcome> ReadChoicesCsv(const std::string& path) {
  CsvTable table = ReadCsv(path);
  int pair_col = table.RequiredColumn("pair_id");
  int choice_col = table.RequiredColumn("choice");
  std::map<std::string, ComparisonOutcome> choices;
  for (const auto& row : table.rows)
    choices[row.at(pair_col)] = OutcomeFromToken(row.at(choice_col));
  return choices;
}

void WriteDsReportJson(const DsEstimate& estimate, const AnnotationMatrix& matrix,
                       const std::string& path) {
  json obj;
  obj["class_priors"] = estimate.class_priors;
  obj["iterations"] = estimate.iterations;
  obj["converged"] = estimate.converged;
  obj["confusion"] = json::object();
  for (const auto& [annotator, conf] : estimate.confusion) {
    json m = json::array();
    for (const auto& row : conf) m.push_back(row);
    obj["confusion"][annotator] = std::move(m);
  }
  obj["annotator_ability"] = estimate.annotator_ability;
  obj["pairs"] = json::array();
  for (size_t p = 0; p < matrix.pair_ids.size(); ++p) {
    json entry;
    entry["pair_id"] = matrix.pair_ids[p];
    entry["posterior"] = estimate.posteriors[p];
    entry["entropy"] = estimate.posterior_entropy[p];
    entry["map_label"] = AggregateLabelToken(estimate.map_labels[p]);
    obj["pairs"].push_back(std::move(entry));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << obj.dump(2) << "\n";
}

void WriteMetricReportJson(const MetricReport& report, const std::string& path) {
  json obj;
  obj["accuracy"] = report.accuracy;
  obj["spearman_rho"] = report.spearman_rho;
  obj["rmse"] = report.rmse;
  auto boot = [](const BootstrapSummary& b) {
    return json{{"mean", b.mean},
                {"stddev", b.stddev},
                {"resamples", b.resamples},
                {"redraws", b.redraws}};
  };
  obj["accuracy_bootstrap"] = boot(report.accuracy_boot);
  obj["spearman_rho_bootstrap"] = boot(report.rho_boot);
  obj["rmse_bootstrap"] = boot(report.rmse_boot);
  obj["bootstrap_resamples"] = report.bootstrap_resamples;
  obj["bootstrap_seed"] = report.bootstrap_seed;
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << obj.dump(2) << "\n";
}

std::string FileDigest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for digest: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::ostringstream hex;
  hex << std::hex << std::setfill('0') << std::setw(16) << Fnv1a64(buffer.str());
  return hex.str();
}

}  // namespace textscale
