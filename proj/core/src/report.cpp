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

#include "asymgauge/report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "asymgauge/error.hpp"
#include "asymgauge/io.hpp"

namespace asymgauge {

namespace {

constexpr const char *kMissing = "NA";

std::string gamma_label(double gamma) { return fmt::format("{}", gamma); }

CamCell cam_cell(std::span<const WordPair> pairs, const LarMap &left, const LarMap &right) {
  CamCell cell;
  cell.n = pairs.size();
  try {
    cell.value = cam_test(pairs, left, right);
  } catch (const UndefinedCorrelationError &) {
    cell.note = "constant LAR vector";
  } catch (const DimensionError &) {
    cell.note = "fewer than two pairs";
  }
  return cell;
}

std::optional<double> maybe_alar(const LarMap &lars, std::span<const WordPair> pairs) {
  if (pairs.empty()) return std::nullopt;
  return alar(lars, pairs);
}

// LAR of the unordered pair in a fixed orientation, or nullopt.
std::optional<double> oriented(const LarMap &lars, const WordPair &pair) {
  if (auto v = lars.get(pair.first, pair.second)) return v;
  if (auto v = lars.get(pair.second, pair.first)) return -*v;
  return std::nullopt;
}

// Table cells as strings; `fmt_value` renders numbers.
template <typename Fmt>
std::vector<std::vector<std::string>> cells(const MetricReport &r, Fmt fmt_value) {
  auto opt = [&](const std::optional<double> &v) { return v ? fmt_value(*v) : std::string(kMissing); };
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> header = {"relation", "pairs"};
  for (const auto &d : r.count_resources) header.push_back("count:" + d);
  for (const auto &d : r.resources) header.push_back("alar:" + d);
  for (const auto &c : r.cam_columns) {
    header.push_back("cam:" + c.label());
    header.push_back("p:" + c.label());
    header.push_back("n:" + c.label());
  }
  for (const auto &e : r.accuracy_resources) {
    for (double g : r.gammas) header.push_back("acc:" + e + "@" + gamma_label(g));
  }
  out.push_back(std::move(header));

  for (const auto &row : r.rows) {
    std::vector<std::string> line = {row.relation, std::to_string(row.pair_count)};
    for (const auto &d : r.count_resources) {
      auto it = row.counts.find(d);
      line.push_back(it == row.counts.end() ? "0" : std::to_string(it->second));
    }
    for (const auto &d : r.resources) {
      auto it = row.alar.find(d);
      line.push_back(it == row.alar.end() ? std::string(kMissing) : opt(it->second));
    }
    for (const auto &cell : row.cam) {
      if (cell.value) {
        line.push_back(fmt_value(cell.value->rho));
        line.push_back(io::format_g17(cell.value->p_value));
      } else {
        line.push_back(kMissing);
        line.push_back(kMissing);
      }
      line.push_back(std::to_string(cell.n));
    }
    for (const auto &e : r.accuracy_resources) {
      auto it = row.accuracy.find(e);
      for (std::size_t g = 0; g < r.gammas.size(); ++g) {
        bool have = it != row.accuracy.end() && g < it->second.size();
        line.push_back(have ? fmt_value(it->second[g]) : std::string(kMissing));
      }
    }
    out.push_back(std::move(line));
  }

  for (const auto &s : r.summary) {
    std::vector<std::string> line = {s.name, kMissing};
    for (std::size_t i = 0; i < r.count_resources.size() + r.resources.size(); ++i) {
      line.push_back(kMissing);
    }
    for (const auto &v : s.cam) {
      line.push_back(opt(v));
      line.push_back(kMissing);
      line.push_back(kMissing);
    }
    for (std::size_t i = 0; i < r.accuracy_resources.size() * r.gammas.size(); ++i) {
      line.push_back(kMissing);
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace

std::string MetricReport::to_tsv() const {
  std::string out;
  for (const auto &line : cells(*this, [](double v) { return io::format_g17(v); })) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += '\t';
      out += line[i];
    }
    out += '\n';
  }
  return out;
}

std::string MetricReport::to_text() const {
  auto table = cells(*this, [](double v) { return io::format_fixed(v, 4); });
  // p-values keep full precision in the TSV; here they get scientific form.
  for (std::size_t r = 1; r < table.size(); ++r) {
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      if (table[0][c].rfind("p:", 0) == 0 && table[r][c] != kMissing) {
        double p = 0.0;
        io::parse_double(table[r][c], p);
        table[r][c] = fmt::format("{:.2e}", p);
      }
    }
  }
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto &line : table) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::string out;
  for (const auto &line : table) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c == 0) {
        text += fmt::format("{:<{}}", line[c], width[c]);
      } else {
        text += fmt::format("  {:>{}}", line[c], width[c]);
      }
    }
    out += text + '\n';
  }
  return out;
}

void sort_rows(MetricReport &report) {
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const RelationRow &l, const RelationRow &r) {
                     if (l.pair_count != r.pair_count) return l.pair_count > r.pair_count;
                     return l.relation < r.relation;
                   });
}

void add_summary(MetricReport &report) {
  report.summary.clear();
  for (bool include_related : {true, false}) {
    SummaryRow s;
    s.name = include_related ? "SA" : "SR";
    for (std::size_t c = 0; c < report.cam_columns.size(); ++c) {
      long double total = 0.0L;
      for (const auto &row : report.rows) {
        if (!include_related && row.relation == kRelatedTo) continue;
        if (row.cam[c].value) total += row.pair_count;
      }
      if (total == 0.0L) {
        s.cam.push_back(std::nullopt);
        s.weight_sum.push_back(0.0);
        continue;
      }
      long double value = 0.0L;
      long double weights = 0.0L;
      for (const auto &row : report.rows) {
        if (!include_related && row.relation == kRelatedTo) continue;
        if (!row.cam[c].value) continue;
        long double w = row.pair_count / total;
        weights += w;
        value += w * row.cam[c].value->rho;
      }
      s.cam.push_back(static_cast<double>(value));
      s.weight_sum.push_back(static_cast<double>(weights));
    }
    report.summary.push_back(std::move(s));
  }
}

MetricReport data_report(const std::vector<std::string> &datasets,
                         const std::map<std::string, RelationPairSets> &pair_sets,
                         const std::map<std::string, LarMap> &lars) {
  if (datasets.empty()) throw PreconditionError("data report needs at least one dataset");
  MetricReport report;
  report.resources = datasets;
  report.count_resources = datasets;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    for (std::size_t j = i + 1; j < datasets.size(); ++j) {
      report.cam_columns.push_back({datasets[i], datasets[j]});
    }
  }
  auto sets_of = [&](const std::string &d) -> const RelationPairSets & {
    auto it = pair_sets.find(d);
    if (it == pair_sets.end()) throw PreconditionError("no pair sets for dataset " + d);
    return it->second;
  };
  auto lars_of = [&](const std::string &d) -> const LarMap & {
    auto it = lars.find(d);
    if (it == lars.end()) throw PreconditionError("no LAR map for dataset " + d);
    return it->second;
  };

  std::set<std::string> relations;
  for (const auto &d : datasets) {
    for (const auto &[name, set] : sets_of(d)) relations.insert(name);
  }
  static const std::vector<WordPair> kNone;
  for (const auto &relation : relations) {
    RelationRow row;
    row.relation = relation;
    std::vector<const std::vector<WordPair> *> per_dataset;
    for (const auto &d : datasets) {
      const auto &sets = sets_of(d);
      auto it = sets.find(relation);
      const auto &pairs = it == sets.end() ? kNone : it->second.pairs;
      per_dataset.push_back(&pairs);
      row.counts[d] = pairs.size();
      row.alar[d] = maybe_alar(lars_of(d), pairs);
    }
    // Ordered pairs annotated with r in every dataset.
    std::vector<std::set<WordPair>> lookup;
    for (const auto *p : per_dataset) lookup.emplace_back(p->begin(), p->end());
    std::vector<WordPair> shared;
    for (const auto &pair : *per_dataset.front()) {
      bool everywhere = std::all_of(lookup.begin() + 1, lookup.end(),
                                    [&](const auto &s) { return s.count(pair) != 0; });
      if (everywhere) shared.push_back(pair);
    }
    row.pair_count = shared.size();
    for (const auto &col : report.cam_columns) {
      row.cam.push_back(cam_cell(shared, lars_of(col.left), lars_of(col.right)));
    }
    report.rows.push_back(std::move(row));
  }
  sort_rows(report);
  add_summary(report);
  return report;
}

MetricReport embedding_report(const RelationPairSets &pair_sets, const LarMap &data,
                              const std::vector<LarMap> &embeddings,
                              const std::vector<double> &gammas) {
  MetricReport report;
  report.resources.push_back(data.resource_id());
  for (const auto &e : embeddings) {
    report.resources.push_back(e.resource_id());
    report.cam_columns.push_back({e.resource_id(), data.resource_id()});
    report.accuracy_resources.push_back(e.resource_id());
  }
  report.gammas = gammas;

  for (const auto &[relation, set] : pair_sets) {
    RelationRow row;
    row.relation = relation;
    // Pairs every resource can score.
    std::vector<WordPair> covered;
    for (const auto &p : set.pairs) {
      bool ok = data.get(p.first, p.second).has_value();
      for (const auto &e : embeddings) ok = ok && e.get(p.first, p.second).has_value();
      if (ok) covered.push_back(p);
    }
    row.pair_count = covered.size();
    row.alar[data.resource_id()] = maybe_alar(data, covered);
    for (const auto &e : embeddings) {
      row.alar[e.resource_id()] = maybe_alar(e, covered);
      row.cam.push_back(cam_cell(covered, e, data));
      if (!covered.empty()) {
        auto &acc = row.accuracy[e.resource_id()];
        for (double g : gammas) acc.push_back(directional_accuracy(data, e, covered, g));
      }
    }
    report.rows.push_back(std::move(row));
  }
  sort_rows(report);
  add_summary(report);
  return report;
}

std::string lar_csv(const RelationPairSets &pair_sets, const std::vector<LarMap> &lars) {
  std::string out = "relation,a,b";
  for (const auto &l : lars) out += "," + l.resource_id();
  out += '\n';
  for (const auto &[relation, set] : pair_sets) {
    for (const auto &[a, b] : set.pairs) {
      out += relation + "," + a + "," + b;
      for (const auto &l : lars) {
        auto v = l.get(a, b);
        out += ",";
        if (v) out += io::format_g17(*v);
      }
      out += '\n';
    }
  }
  return out;
}

std::string alar_csv(const MetricReport &report, const std::map<std::string, double> &scales) {
  std::string out = "relation,resource,alar,signed_log_alar\n";
  for (const auto &row : report.rows) {
    for (const auto &resource : report.resources) {
      auto it = row.alar.find(resource);
      if (it == row.alar.end() || !it->second) continue;
      auto s = scales.find(resource);
      double scale = s == scales.end() ? 1.0 : s->second;
      out += fmt::format("{},{},{},{}\n", row.relation, resource, io::format_g17(*it->second),
                         io::format_g17(signed_log(*it->second, scale)));
    }
  }
  return out;
}

std::string bin_csv(const std::vector<FactorRecord> &factors, const LarMap &data,
                    const LarMap &model, const std::vector<double> &gammas, std::size_t bin_size) {
  std::map<WordPair, std::pair<double, double>> lars;
  std::vector<FactorEntry> by_contexts;
  std::vector<FactorEntry> by_distance;
  for (const auto &f : factors) {
    if (f.population == 0) continue;
    auto d = oriented(data, f.pair);
    auto m = oriented(model, f.pair);
    if (!d || !m) continue;
    lars[f.pair] = {*d, *m};
    by_contexts.push_back({f.pair, static_cast<double>(f.population)});
    by_distance.push_back({f.pair, f.mean_char_distance});
  }
  std::string out = "factor,gamma,bin,mean_factor,accuracy,size\n";
  for (const auto &[name, entries] :
       {std::pair{"contexts", &by_contexts}, std::pair{"distance", &by_distance}}) {
    for (double g : gammas) {
      auto agree = [&](const WordPair &p) {
        const auto &[d, m] = lars.at(p);
        return direction(d, g) == direction(m, g) ? 1.0 : 0.0;
      };
      auto bins = bin_analysis(*entries, agree, bin_size);
      for (std::size_t i = 0; i < bins.size(); ++i) {
        out += fmt::format("{},{},{},{},{},{}\n", name, gamma_label(g), i,
                           io::format_g17(bins[i].mean_factor), io::format_g17(bins[i].accuracy),
                           bins[i].size);
      }
    }
  }
  return out;
}

}  // namespace asymgauge
