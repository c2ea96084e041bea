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

#include "asymgauge/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "asymgauge/converters.hpp"
#include "asymgauge/corpus_index.hpp"
#include "asymgauge/error.hpp"
#include "asymgauge/evocation.hpp"
#include "asymgauge/io.hpp"
#include "asymgauge/lm_conditionals.hpp"
#include "asymgauge/metrics.hpp"
#include "asymgauge/relations.hpp"
#include "asymgauge/report.hpp"
#include "asymgauge/scoring.hpp"
#include "asymgauge/static_conditionals.hpp"

namespace asymgauge {

namespace {

namespace fs = std::filesystem;

template <typename... Args>
void log(fmt::format_string<Args...> format, Args &&...args) {
  fmt::print(stderr, "asymgauge: {}\n", fmt::format(format, std::forward<Args>(args)...));
}

struct Stage {
  const RunConfig &config;
  std::string name;
  fs::path out;
  std::string hash;

  fs::path evocation(const std::string &d) const { return out / "evocation" / (d + ".tsv"); }
  fs::path pairs_dir(const std::string &d) const { return out / "pairs" / d; }
  fs::path index_file() const { return out / "index" / "corpus.asyx"; }
  fs::path evoc_table(const std::string &d) const { return out / "cond" / "evoc" / (d + ".tsv"); }
  fs::path static_table(const std::string &e, const std::string &d) const {
    return out / "cond" / "static" / (e + "__" + d + ".tsv");
  }
  fs::path lm_table(const std::string &m, const std::string &d) const {
    return out / "cond" / "lm" / (m + "__" + d + ".tsv");
  }
  fs::path lm_file(const std::string &m, const std::string &d, const std::string &ext) const {
    return out / "lm" / (m + "__" + d + ext);
  }
  fs::path report(const std::string &file) const { return out / "report" / file; }

  std::string relative(const fs::path &p) const {
    return p.lexically_relative(out).generic_string();
  }
};

// crc32 of a file, or a digest of the sorted per-file checksums of a
// directory tree.
std::string input_digest(const fs::path &path) {
  if (fs::is_regular_file(path)) return "crc32:" + io::file_checksum(path);
  std::vector<std::string> parts;
  for (const auto &entry : fs::recursive_directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    parts.push_back(entry.path().lexically_relative(path).generic_string() + "=" +
                    io::file_checksum(entry.path()));
  }
  std::sort(parts.begin(), parts.end());
  std::string material;
  for (const auto &p : parts) material += p + "\n";
  return "tree:" + io::hex64(io::fnv1a64(material));
}

struct Input {
  std::string label;
  fs::path path;
};

std::string header(const Stage &stage, const std::vector<Input> &inputs) {
  std::string h = fmt::format("# asymgauge {}\n# subcommand: {}\n# config_hash: {}\n# seed: {}\n# cap: {}\n",
                              tool_version(), stage.name, stage.hash,
                              stage.config.get_int("seed", 0), stage.config.get_int("cap", 1000));
  for (const auto &in : inputs) h += fmt::format("# input: {} {}\n", in.label, input_digest(in.path));
  return h;
}

void write_output(const fs::path &path, const std::string &head, const std::string &body) {
  fs::create_directories(path.parent_path());
  io::write_file_atomic(path, head + body);
}

void require(const Stage &stage, const fs::path &path, const std::string &subcommand) {
  if (!fs::exists(path)) {
    throw DependencyError(fmt::format("{} not found; run `asymgauge {}` first",
                                      stage.relative(path), subcommand),
                          subcommand);
  }
}

std::vector<std::string> required_list(const RunConfig &config, const std::string &key) {
  auto items = config.get_list(key);
  if (items.empty()) throw ConfigError("config key '" + key + "' must list at least one name");
  return items;
}

EvocationDataset load_dataset(const Stage &stage, const std::string &d) {
  require(stage, stage.evocation(d), "ingest");
  std::ifstream in(stage.evocation(d));
  return ingest_evocation(in, d);
}

ConditionalTable load_table(const fs::path &path, const std::string &resource) {
  std::ifstream in(path);
  return ConditionalTable::parse_tsv(in, resource);
}

WordSet dataset_words(const EvocationDataset &d) {
  WordSet words;
  for (const auto &[cue, responses] : d.entries) {
    words.insert(cue);
    for (const auto &[r, n] : responses) words.insert(r);
  }
  return words;
}

std::vector<WordPair> all_pairs(const RelationPairSets &sets) {
  std::vector<WordPair> out;
  for (const auto &[r, set] : sets) out.insert(out.end(), set.pairs.begin(), set.pairs.end());
  return out;
}

RelationPairSets load_pair_sets(const Stage &stage, const std::string &d, const std::string &kind) {
  fs::path dir = stage.pairs_dir(d) / kind;
  require(stage, dir, "annotate");
  return read_pair_sets(dir);
}

std::vector<WordPair> load_clean_pairs(const Stage &stage, const std::string &d) {
  fs::path file = stage.pairs_dir(d) / "clean.tsv";
  require(stage, file, "annotate");
  std::ifstream in(file);
  return parse_pair_tsv(in, "clean").pairs;
}

struct Embedding {
  std::string name;
  fs::path path;
  fs::path context_path;  // empty for a single table
  std::optional<VectorTable> single;
  std::optional<DualVectorTable> dual;

  const VectorTable &word_vectors() const { return single ? *single : dual->word_vectors; }
  // Words a conditional can predict.
  WordSet predictable() const {
    return single ? single->vocabulary() : dual->context_vectors.vocabulary();
  }
  WordSet vocabulary() const {
    if (single) return single->vocabulary();
    return intersect_vocabularies({dual->word_vectors.vocabulary(),
                                   dual->context_vectors.vocabulary()});
  }
};

VectorTable read_vectors(const fs::path &path) {
  auto in = io::open_input(path);
  VectorLoadStats stats;
  VectorTable t;
  try {
    t = load_vectors(*in, &stats);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (stats.duplicates || stats.zero_vectors) {
    log("{}: skipped {} duplicate and {} zero vectors", path.string(), stats.duplicates,
        stats.zero_vectors);
  }
  return t;
}

Embedding load_embedding(const RunConfig &config, const std::string &name) {
  Embedding e;
  e.name = name;
  e.path = config.path("embedding." + name + ".path");
  if (config.has("embedding." + name + ".context_path")) {
    e.context_path = config.path("embedding." + name + ".context_path");
    e.dual.emplace(read_vectors(e.path), read_vectors(e.context_path));
  } else {
    e.single = read_vectors(e.path);
  }
  log("loaded embedding {} ({} words, dim {})", name, e.word_vectors().size(),
      e.word_vectors().dim());
  return e;
}

LmRunOptions lm_options(const Stage &stage, const std::string &index_digest) {
  const RunConfig &c = stage.config;
  LmRunOptions o;
  long long cap = c.get_int("cap", 1000);
  if (cap < 1) throw ConfigError("cap must be >= 1");
  o.cap = static_cast<std::size_t>(cap);
  o.seed = static_cast<std::uint64_t>(c.get_int("seed", 0));
  o.floor = c.get_double("probability_floor", 1e-12);
  if (!(o.floor > 0.0 && o.floor <= 1.0)) throw ConfigError("probability_floor must be in (0, 1]");
  std::string combine = c.get_or("combine", "mean");
  if (combine == "mean") {
    o.combine = Combine::kMean;
  } else if (combine == "sum") {
    o.combine = Combine::kSum;
  } else {
    throw ConfigError("combine must be 'mean' or 'sum', got '" + combine + "'");
  }
  long long batch = c.get_int("batch_pairs", 16);
  long long retries = c.get_int("retries", 2);
  if (batch < 1 || retries < 0) throw ConfigError("batch_pairs must be >= 1 and retries >= 0");
  o.batch_pairs = static_cast<std::size_t>(batch);
  o.retries = static_cast<unsigned>(retries);
  o.config_hash = stage.hash + ":" + index_digest;
  return o;
}

std::unique_ptr<ScoringChannel> make_channel(const RunConfig &config, const std::string &model) {
  std::string spec = config.get("lm." + model + ".scorer");
  if (spec == "mock") {
    auto refuse = config.get_list("lm." + model + ".refuse");
    return std::make_unique<MockScorer>(std::set<std::string>(refuse.begin(), refuse.end()));
  }
  constexpr std::string_view kExec = "exec:";
  if (spec.rfind(kExec, 0) == 0 && spec.size() > kExec.size()) {
    return std::make_unique<ProcessScorer>(spec.substr(kExec.size()), model);
  }
  throw ConfigError("lm." + model + ".scorer must be 'mock' or 'exec:<command>', got '" + spec + "'");
}

unsigned threads(const RunConfig &config) {
  long long t = config.get_int("threads", 1);
  if (t < 1) throw ConfigError("threads must be >= 1");
  return static_cast<unsigned>(t);
}

// ---- stages ---------------------------------------------------------------

void run_ingest(const Stage &stage) {
  const RunConfig &c = stage.config;
  for (const auto &d : required_list(c, "datasets")) {
    fs::path path = c.path("dataset." + d + ".path");
    auto format = converters::parse_format(c.get_or("dataset." + d + ".format", "canonical"));
    auto in = io::open_input(path);
    EvocationDataset dataset;
    if (format == converters::Format::kCanonical) {
      dataset = ingest_evocation(*in, d);
    } else {
      std::stringstream canonical;
      converters::convert(format, *in, canonical);
      dataset = ingest_evocation(canonical, d);
    }
    write_output(stage.evocation(d), header(stage, {{c.get("dataset." + d + ".path"), path}}),
                 to_canonical_tsv(dataset));
    std::size_t rows = 0;
    for (const auto &[cue, responses] : dataset.entries) rows += responses.size();
    log("ingested {}: {} cues, {} response rows", d, dataset.cue_totals.size(), rows);
  }
}

void run_annotate(const Stage &stage) {
  const RunConfig &c = stage.config;
  auto datasets = required_list(c, "datasets");
  std::vector<EvocationDataset> loaded;
  for (const auto &d : datasets) loaded.push_back(load_dataset(stage, d));

  fs::path kg_path = c.path("conceptnet");
  ConceptNetStats kg_stats;
  auto kg_in = io::open_input(kg_path);
  auto edges = parse_conceptnet(*kg_in, c.get_or("language", "en"), &kg_stats);
  log("conceptnet: {} edges from {} rows ({} malformed rows skipped)", edges.size(), kg_stats.rows,
      kg_stats.malformed);

  std::vector<WordSet> resource_vocabs;
  std::vector<Input> inputs = {{c.get("conceptnet"), kg_path}};
  for (const auto &e : c.get_list("embeddings")) {
    Embedding emb = load_embedding(c, e);
    resource_vocabs.push_back(emb.vocabulary());
    inputs.push_back({c.get("embedding." + e + ".path"), emb.path});
    if (!emb.context_path.empty()) {
      inputs.push_back({c.get("embedding." + e + ".context_path"), emb.context_path});
    }
  }
  std::optional<ParagraphStore> store;
  if (!c.get_list("lm_models").empty()) {
    require(stage, stage.index_file(), "index");
    store = ParagraphStore::load(stage.index_file());
    inputs.push_back({stage.relative(stage.index_file()), stage.index_file()});
  }

  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const auto &d = datasets[i];
    const auto &dataset = loaded[i];
    auto clean = clean_pair_filter(dataset);
    std::vector<WordPair> pairs(clean.begin(), clean.end());
    WordSet words = dataset_words(dataset);

    std::vector<WordSet> vocabs = {words};
    vocabs.insert(vocabs.end(), resource_vocabs.begin(), resource_vocabs.end());
    if (store) {
      WordSet indexed;
      for (const auto &w : words) {
        if (store->postings(w) != nullptr) indexed.insert(w);
      }
      vocabs.push_back(std::move(indexed));
    }
    WordSet common_vocab = intersect_vocabularies(vocabs);

    auto data_sets = build_pair_sets(pairs, edges, words);
    RelationPairSets common_sets;
    if (!common_vocab.empty()) common_sets = build_pair_sets(pairs, edges, common_vocab);

    std::vector<Input> in = inputs;
    in.insert(in.begin(), {stage.relative(stage.evocation(d)), stage.evocation(d)});
    std::string head = header(stage, in);
    fs::path dir = stage.pairs_dir(d);
    fs::remove_all(dir);
    write_output(dir / "clean.tsv", head, to_pair_tsv({"clean", pairs}));
    write_pair_sets(dir / "data", data_sets, head);
    write_pair_sets(dir / "common", common_sets, head);

    std::string summary = "relation\tdata_pairs\tcommon_pairs\n";
    WordSet relations;
    for (const auto &[r, s] : data_sets) relations.insert(r);
    for (const auto &[r, s] : common_sets) relations.insert(r);
    for (const auto &r : relations) {
      auto dc = data_sets.count(r) ? data_sets.at(r).pairs.size() : 0;
      auto cc = common_sets.count(r) ? common_sets.at(r).pairs.size() : 0;
      summary += fmt::format("{}\t{}\t{}\n", r, dc, cc);
    }
    write_output(dir / "summary.tsv", head, summary);
    log("annotated {}: {} clean pairs, {} relations, common vocabulary of {} words", d,
        pairs.size(), data_sets.size(), common_vocab.size());
  }
}

void run_index(const Stage &stage) {
  const RunConfig &c = stage.config;
  fs::path corpus = c.path("corpus");
  IndexOptions options;
  long long max_chars = c.get_int("max_paragraph_chars", 10000);
  if (max_chars < 1) throw ConfigError("max_paragraph_chars must be >= 1");
  options.max_paragraph_chars = static_cast<std::size_t>(max_chars);
  options.threads = threads(c);
  auto docs = load_corpus(corpus);
  auto store = ParagraphStore::build(docs, options);
  fs::create_directories(stage.index_file().parent_path());
  store.save(stage.index_file());
  const auto &s = store.stats();
  std::string body = fmt::format(
      "documents\t{}\nskipped_documents\t{}\nparagraphs\t{}\ntruncated_paragraphs\t{}\n"
      "vocabulary\t{}\n",
      s.documents, s.skipped_documents, store.size(), s.truncated_paragraphs,
      store.vocabulary_size());
  write_output(stage.out / "index" / "stats.tsv", header(stage, {{c.get("corpus"), corpus}}), body);
  if (s.skipped_documents) log("skipped {} documents with invalid UTF-8", s.skipped_documents);
  log("indexed {} paragraphs from {} documents", store.size(), s.documents);
}

void run_cond_evoc(const Stage &stage) {
  for (const auto &d : required_list(stage.config, "datasets")) {
    auto dataset = load_dataset(stage, d);
    auto pairs = load_clean_pairs(stage, d);
    auto table = evocation_conditionals(dataset, std::set<WordPair>(pairs.begin(), pairs.end()));
    fs::path clean = stage.pairs_dir(d) / "clean.tsv";
    write_output(stage.evoc_table(d),
                 header(stage, {{stage.relative(stage.evocation(d)), stage.evocation(d)},
                                {stage.relative(clean), clean}}),
                 table.to_tsv());
    log("evocation conditionals for {}: {} entries", d, table.size());
  }
}

void run_cond_static(const Stage &stage) {
  const RunConfig &c = stage.config;
  auto datasets = required_list(c, "datasets");
  auto embeddings = required_list(c, "embeddings");
  std::string policy = c.get_or("support", "pairs");
  if (policy != "pairs" && policy != "dataset") {
    throw ConfigError("support must be 'pairs' or 'dataset', got '" + policy + "'");
  }
  struct Target {
    std::string name;
    std::vector<WordPair> pairs;
    WordSet support_words;
  };
  std::vector<Target> targets;
  for (const auto &d : datasets) {
    Target t{d, all_pairs(load_pair_sets(stage, d, "common")), {}};
    if (policy == "pairs") {
      for (const auto &[a, b] : load_clean_pairs(stage, d)) {
        t.support_words.insert(a);
        t.support_words.insert(b);
      }
    } else {
      t.support_words = dataset_words(load_dataset(stage, d));
    }
    targets.push_back(std::move(t));
  }
  for (const auto &e : embeddings) {
    Embedding emb = load_embedding(c, e);
    WordSet predictable = emb.predictable();
    for (const auto &t : targets) {
      WordSet support;
      for (const auto &w : t.support_words) {
        if (predictable.count(w)) support.insert(w);
      }
      if (support.empty()) {
        throw ConfigError(fmt::format("no word of {} is in embedding {}", t.name, e));
      }
      std::optional<StaticConditionalModel> model;
      if (emb.single) {
        model.emplace(*emb.single, std::move(support));
      } else {
        model.emplace(*emb.dual, std::move(support));
      }
      auto table = model->table(t.pairs, e, threads(c));
      std::vector<Input> in = {{c.get("embedding." + e + ".path"), emb.path}};
      if (!emb.context_path.empty()) {
        in.push_back({c.get("embedding." + e + ".context_path"), emb.context_path});
      }
      write_output(stage.static_table(e, t.name), header(stage, in), table.to_tsv());
      log("static conditionals {} on {}: {} entries over a support of {} words", e, t.name,
          table.size(), model->support().size());
    }
  }
}

void run_cond_lm(const Stage &stage, const SubcommandOptions &options) {
  const RunConfig &c = stage.config;
  if (options.emit_tasks && options.consume_scores) {
    throw ConfigError("--emit-tasks and --consume-scores are mutually exclusive");
  }
  auto datasets = required_list(c, "datasets");
  require(stage, stage.index_file(), "index");
  auto store = ParagraphStore::load(stage.index_file());
  std::string index_digest = input_digest(stage.index_file());
  LmRunOptions base = lm_options(stage, index_digest);

  if (options.emit_tasks) {
    for (const auto &d : datasets) {
      auto pairs = all_pairs(load_pair_sets(stage, d, "common"));
      std::ostringstream tasks;
      std::size_t n = write_task_file(pairs, store, base, tasks);
      fs::path file = stage.out / "lm" / "tasks" / (d + ".jsonl");
      fs::create_directories(file.parent_path());
      io::write_file_atomic(file, tasks.str());
      log("wrote {} scoring tasks for {} to {}", n, d, file.string());
    }
    return;
  }

  fs::path scores_dir = c.has("scores_dir") ? c.path("scores_dir") : stage.out / "lm" / "scores";
  for (const auto &m : required_list(c, "lm_models")) {
    for (const auto &d : datasets) {
      auto pairs = all_pairs(load_pair_sets(stage, d, "common"));
      std::unique_ptr<ScoringChannel> channel;
      if (options.consume_scores) {
        fs::path file = scores_dir / (m + "__" + d + ".jsonl");
        if (!fs::exists(file)) throw ConfigError("scores file not found: " + file.string());
        std::ifstream in(file);
        channel = std::make_unique<ResultFileChannel>(read_responses(in), m);
      } else {
        channel = make_channel(c, m);
      }
      LmRunOptions opts = base;
      opts.checkpoint = stage.lm_file(m, d, ".checkpoint");
      auto result = lm_conditional_table(pairs, store, *channel, m, opts);
      std::string head = header(stage, {{stage.relative(stage.index_file()), stage.index_file()}});
      write_output(stage.lm_table(m, d), head, result.table.to_tsv());
      write_output(stage.lm_file(m, d, ".factors.tsv"), head, factors_to_tsv(result.factors));
      std::string dropped;
      for (const auto &p : result.dropped) {
        dropped += fmt::format("{}\t{}\t{}\n", p.pair.first, p.pair.second, p.reason);
      }
      write_output(stage.lm_file(m, d, ".dropped.tsv"), head, dropped);
      fs::remove(opts.checkpoint);
      log("lm conditionals {} on {}: {} pairs estimated, {} without contexts, {} refused", m, d,
          result.estimates.size(), result.factors.size() - result.estimates.size(),
          result.dropped.size());
    }
  }
}

void run_report(const Stage &stage) {
  const RunConfig &c = stage.config;
  auto datasets = required_list(c, "datasets");
  for (const auto &d : datasets) require(stage, stage.pairs_dir(d), "annotate");
  for (const auto &d : datasets) require(stage, stage.evoc_table(d), "cond-evoc");
  auto embeddings = c.get_list("embeddings");
  auto models = c.get_list("lm_models");
  for (const auto &d : datasets) {
    for (const auto &e : embeddings) require(stage, stage.static_table(e, d), "cond-static");
    for (const auto &m : models) require(stage, stage.lm_table(m, d), "cond-lm");
  }
  auto gammas = c.get_double_list("gammas", kDefaultGammas);
  for (double g : gammas) {
    if (g < 0.0) throw ConfigError("gammas must be non-negative");
  }
  long long bin_size = c.get_int("bin_size", 200);
  if (bin_size < 1) throw ConfigError("bin_size must be >= 1");
  std::map<std::string, double> scales;
  for (const auto &[key, value] : c.values()) {
    if (key.rfind("alar_scale.", 0) == 0) scales[key.substr(11)] = c.get_double(key, 1.0);
  }

  std::vector<Input> inputs;
  std::map<std::string, RelationPairSets> data_sets;
  std::map<std::string, LarMap> data_lars;
  std::map<std::string, ConditionalTable> evoc;
  for (const auto &d : datasets) {
    inputs.push_back({stage.relative(stage.evoc_table(d)), stage.evoc_table(d)});
    data_sets[d] = load_pair_sets(stage, d, "data");
    evoc[d] = load_table(stage.evoc_table(d), d);
    data_lars[d] = lar_map(evoc[d], all_pairs(data_sets[d]));
  }
  std::string head = header(stage, inputs);
  auto table1 = data_report(datasets, data_sets, data_lars);
  write_output(stage.report("data.tsv"), head, table1.to_tsv());
  write_output(stage.report("data.txt"), head, table1.to_text());
  write_output(stage.report("data_alar.csv"), head, alar_csv(table1, scales));
  for (const auto &d : datasets) {
    write_output(stage.report("data_lar__" + d + ".csv"), head,
                 lar_csv(data_sets[d], {data_lars[d]}));
  }
  log("data report: {} relations over {} datasets", table1.rows.size(), datasets.size());

  if (embeddings.empty() && models.empty()) return;
  for (const auto &d : datasets) {
    auto common = load_pair_sets(stage, d, "common");
    auto pairs = all_pairs(common);
    LarMap data = lar_map(evoc[d], pairs);
    std::vector<LarMap> resources;
    std::vector<Input> in = {{stage.relative(stage.evoc_table(d)), stage.evoc_table(d)}};
    for (const auto &e : embeddings) {
      resources.push_back(lar_map(load_table(stage.static_table(e, d), e), pairs));
      in.push_back({stage.relative(stage.static_table(e, d)), stage.static_table(e, d)});
    }
    for (const auto &m : models) {
      resources.push_back(lar_map(load_table(stage.lm_table(m, d), m), pairs));
      in.push_back({stage.relative(stage.lm_table(m, d)), stage.lm_table(m, d)});
    }
    std::string h = header(stage, in);
    auto table2 = embedding_report(common, data, resources, gammas);
    write_output(stage.report("embed__" + d + ".tsv"), h, table2.to_tsv());
    write_output(stage.report("embed__" + d + ".txt"), h, table2.to_text());
    write_output(stage.report("alar__" + d + ".csv"), h, alar_csv(table2, scales));
    std::vector<LarMap> all = {data};
    all.insert(all.end(), resources.begin(), resources.end());
    write_output(stage.report("lar__" + d + ".csv"), h, lar_csv(common, all));
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto &m = models[i];
      fs::path factors_file = stage.lm_file(m, d, ".factors.tsv");
      require(stage, factors_file, "cond-lm");
      std::ifstream fin(factors_file);
      auto factors = parse_factors_tsv(fin);
      write_output(stage.report("bins__" + m + "__" + d + ".csv"), h,
                   bin_csv(factors, data, resources[embeddings.size() + i], gammas,
                           static_cast<std::size_t>(bin_size)));
    }
    log("embedding report for {}: {} relations, {} resources", d, table2.rows.size(),
        resources.size());
  }
}

void run_simeval(const Stage &stage) {
  const RunConfig &c = stage.config;
  auto golds = required_list(c, "similarity");
  std::vector<Embedding> embeddings;
  for (const auto &e : c.get_list("embeddings")) embeddings.push_back(load_embedding(c, e));
  auto models = c.get_list("lm_models");
  std::optional<ParagraphStore> store;
  std::optional<LmRunOptions> opts;
  if (!models.empty()) {
    require(stage, stage.index_file(), "index");
    store = ParagraphStore::load(stage.index_file());
    opts = lm_options(stage, input_digest(stage.index_file()));
  }

  std::vector<Input> inputs;
  std::string tsv = "gold\tresource\trho\tp\tshared\texcluded\n";
  std::string text;
  for (const auto &g : golds) {
    fs::path path = c.path("similarity." + g + ".path");
    inputs.push_back({c.get("similarity." + g + ".path"), path});
    auto in = io::open_input(path);
    auto gold = parse_similarity_gold(*in);
    auto emit = [&](const std::string &resource, const std::map<WordPair, double> &scores) {
      try {
        auto r = similarity_eval(scores, gold);
        tsv += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", g, resource,
                           io::format_g17(r.correlation.rho), io::format_g17(r.correlation.p_value),
                           r.shared, r.excluded);
        text += fmt::format("{:<12} {:<12} {:>8} {:>10.2e} {:>6} {:>6}\n", g, resource,
                            io::format_fixed(r.correlation.rho, 4), r.correlation.p_value,
                            r.shared, r.excluded);
      } catch (const Error &e) {
        if (e.kind() != "coverage" && e.kind() != "undefined-correlation") throw;
        tsv += fmt::format("{}\t{}\tNA\tNA\t{}\t{}\n", g, resource, scores.size(),
                           gold.size() - scores.size());
        text += fmt::format("{:<12} {:<12} {:>8} {:>10} {:>6} {:>6}\n", g, resource, "NA", "NA",
                            scores.size(), gold.size() - scores.size());
      }
    };
    for (const auto &e : embeddings) {
      const VectorTable &t = e.word_vectors();
      std::map<WordPair, double> scores;
      for (const auto &[pair, rating] : gold) {
        if (pair.first != pair.second && t.contains(pair.first) && t.contains(pair.second)) {
          scores[pair] = cosine(t, pair.first, pair.second);
        }
      }
      emit(e.name, scores);
    }
    for (const auto &m : models) {
      std::vector<WordPair> pairs;
      for (const auto &[pair, rating] : gold) pairs.push_back(pair);
      auto channel = make_channel(c, m);
      auto result = lm_conditional_table(pairs, *store, *channel, m, *opts);
      std::map<WordPair, double> scores;
      for (const auto &est : result.estimates) {
        const auto &[a, b] = est.pair;
        scores[est.pair] =
            geometric_mean_similarity(*result.table.get(b, a), *result.table.get(a, b));
      }
      emit(m, scores);
    }
  }
  std::string head = header(stage, inputs);
  write_output(stage.report("simeval.tsv"), head, tsv);
  write_output(stage.report("simeval.txt"), head, text);
  log("similarity evaluation over {} gold sets", golds.size());
}

}  // namespace

std::string tool_version() { return ASYMGAUGE_VERSION; }

const std::vector<Subcommand> &subcommands() {
  static const std::vector<Subcommand> list = {
      {"ingest", "convert and ingest evocation datasets"},
      {"annotate", "build clean pairs and relation pair sets from ConceptNet"},
      {"index", "build the paragraph index over the corpus"},
      {"cond-evoc", "count-based conditionals from evocation data"},
      {"cond-static", "softmax conditionals from static word vectors"},
      {"cond-lm", "masked-LM conditionals through a scorer"},
      {"report", "ALAR, CAM and directional-accuracy tables"},
      {"simeval", "Spearman against similarity gold sets"},
  };
  return list;
}

void run_subcommand(const std::string &name, const RunConfig &config,
                    const SubcommandOptions &options) {
  const std::map<std::string, std::function<void(const Stage &)>> stages = {
      {"ingest", run_ingest},
      {"annotate", run_annotate},
      {"index", run_index},
      {"cond-evoc", run_cond_evoc},
      {"cond-static", run_cond_static},
      {"cond-lm", [&options](const Stage &s) { run_cond_lm(s, options); }},
      {"report", run_report},
      {"simeval", run_simeval},
  };
  auto it = stages.find(name);
  if (it == stages.end()) throw ConfigError("unknown subcommand '" + name + "'");
  config.validate_paths();
  Stage stage{config, name, config.path("out_dir"), config.hash()};
  it->second(stage);
}

int exit_code_for(const std::exception &error) {
  if (const auto *e = dynamic_cast<const Error *>(&error)) {
    const std::string &kind = e->kind();
    if (kind == "dependency") return kExitDependency;
    if (kind == "scorer-channel" || kind == "protocol" || kind == "incomplete-batch") {
      return kExitScorer;
    }
    return kExitValidation;
  }
  if (dynamic_cast<const std::filesystem::filesystem_error *>(&error)) return kExitValidation;
  return kExitInternal;
}

}  // namespace asymgauge
