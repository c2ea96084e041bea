// Copyright 2026 The asymgauge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asymgauge/lm_conditionals.hpp"
#include "asymgauge/metrics.hpp"
#include "asymgauge/relations.hpp"

namespace asymgauge {

// One CAM column: resources `left` and `right` compared per relation.
struct CamColumn {
  std::string left;
  std::string right;

  std::string label() const { return left + "~" + right; }
};

struct CamCell {
  std::optional<Correlation> value;  // unset when undefined
  std::size_t n = 0;
  std::string note;  // why the value is missing
};

struct RelationRow {
  std::string relation;
  std::size_t pair_count = 0;                           // |S(r)| behind the CAM cells
  std::map<std::string, std::size_t> counts;            // per-resource |S_D(r)|, data reports
  std::map<std::string, std::optional<double>> alar;    // per resource
  std::vector<CamCell> cam;                             // parallel to MetricReport::cam_columns
  std::map<std::string, std::vector<double>> accuracy;  // per resource, parallel to gammas
};

// Weighted CAM over relations, weights |S(r)| / |S| among relations whose
// cell is defined. SR leaves out relatedTo.
struct SummaryRow {
  std::string name;
  std::vector<std::optional<double>> cam;  // parallel to cam_columns
  std::vector<double> weight_sum;          // 1 when any relation contributed
};

struct MetricReport {
  std::vector<std::string> resources;  // ALAR columns, in order
  std::vector<std::string> count_resources;
  std::vector<CamColumn> cam_columns;
  std::vector<std::string> accuracy_resources;
  std::vector<double> gammas;
  std::vector<RelationRow> rows;
  std::vector<SummaryRow> summary;

  // Header row plus one row per relation and summary; 17 significant digits,
  // "NA" for missing values.
  std::string to_tsv() const;
  // Aligned plain-text table, 4 decimals.
  std::string to_text() const;
};

// Rows sorted by descending pair count, then relation name.
void sort_rows(MetricReport &report);

// Adds the SA and SR rows.
void add_summary(MetricReport &report);

// Data-vs-data comparison. Per relation: each dataset's |S_D(r)| and ALAR
// over S_D(r), and CAM for every dataset pair over the ordered pairs shared
// by all datasets.
MetricReport data_report(const std::vector<std::string> &datasets,
                         const std::map<std::string, RelationPairSets> &pair_sets,
                         const std::map<std::string, LarMap> &lars);

// Embeddings vs one dataset over common pair sets S(r): ALAR of the data and
// each embedding, CAM(embedding, data), and directional accuracy per gamma.
MetricReport embedding_report(const RelationPairSets &pair_sets, const LarMap &data,
                              const std::vector<LarMap> &embeddings,
                              const std::vector<double> &gammas = kDefaultGammas);

// `relation,a,b,<resource>...` for every ordered pair in the sets; empty
// cells where a resource lacks the pair.
std::string lar_csv(const RelationPairSets &pair_sets, const std::vector<LarMap> &lars);

// `relation,resource,alar,signed_log_alar` with a per-resource scale
// (missing scale = 1).
std::string alar_csv(const MetricReport &report, const std::map<std::string, double> &scales);

// Bins of `factors` by population ("contexts") and mean distance
// ("distance"), scored by directional accuracy of `model` against `data` at
// each gamma: `factor,gamma,bin,mean_factor,accuracy,size`. Pairs missing
// from either LAR map, or with no contexts, are left out.
std::string bin_csv(const std::vector<FactorRecord> &factors, const LarMap &data,
                    const LarMap &model, const std::vector<double> &gammas, std::size_t bin_size);

}  // namespace asymgauge
