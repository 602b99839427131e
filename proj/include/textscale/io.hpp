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

#ifndef TEXTSCALE_IO_HPP_
#define TEXTSCALE_IO_HPP_

#include <map>
#include <string>
#include <vector>

#include "textscale/aggregation.hpp"
#include "textscale/bt.hpp"
#include "textscale/graph.hpp"
#include "textscale/metrics.hpp"
#include "textscale/pairwise.hpp"
#include "textscale/pointwise.hpp"

namespace textscale {

// Minimal quoted-field CSV. The first row is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int Column(const std::string& name) const;  // -1 if absent
  int RequiredColumn(const std::string& name) const;
};
CsvTable ReadCsv(const std::string& path);
void WriteCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

// Items: CSV columns id,text or JSON Lines {"id","text","meta"?}. Format
// picked by extension (.csv vs .jsonl/.ndjson/.json).
std::vector<Item> ReadItems(const std::string& path);
// Pairs: CSV columns left_id,right_id,outcome[,annotator][,count] with
// outcome in {1,2,tie}, or JSON Lines with the same fields.
std::vector<ComparisonEdge> ReadPairs(const std::string& path);

void WriteItemsJsonl(const std::vector<Item>& items, const std::string& path);
void WritePairsCsv(const std::vector<ComparisonEdge>& edges,
                   const std::string& path);

// JSON object mirroring the GraphStats field names.
void WriteStatsJson(const GraphStats& stats, const std::string& path);

// Scores: CSV with columns id,lambda,score01 (BT) or id,score,... generic.
void WriteBtScoresCsv(const BtScores& scores, const std::string& path);
void WriteBtReportJson(const BtScores& scores, const std::string& path);
void WriteScoreDetailsCsv(const ScoreBatch& batch, const std::string& path);
void WriteScoreVectorCsv(const std::map<std::string, double>& values,
                         const std::string& path);
std::map<std::string, double> ReadScoreVectorCsv(const std::string& path);

// Pairwise judgments: pair id, four raw probabilities, four aligned values,
// p_first, choice.
void WriteJudgedPairsCsv(const std::vector<JudgedPair>& pairs,
                         const std::string& path);

// Annotations: CSV pair_id,annotator_id,label with label in {1,2,tie}.
AnnotationMatrix ReadAnnotationsCsv(const std::string& path);
// pair_id,label with label in {1,2,tie,invalid}.
std::map<std::string, AggregateLabel> ReadAggregateLabelsCsv(
    const std::string& path);
// pair_id,choice with choice in {1,2,tie}.
std::map<std::string, ComparisonOutcome> ReadChoicesCsv(const std::string& path);

void WriteDsReportJson(const DsEstimate& estimate, const AnnotationMatrix& matrix,
                       const std::string& path);

void WriteMetricReportJson(const MetricReport& report, const std::string& path);

// FNV-64 content digest of a file, as fixed-width hex.
std::string FileDigest(const std::string& path);

}  // namespace textscale

#endif  // TEXTSCALE_IO_HPP_
