/*
 * Copyright 2026 The FloodLens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "floodlens/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "floodlens/csv.hpp"
#include "floodlens/errors.hpp"
#include "floodlens/evalmetrics.hpp"
#include "floodlens/featstat.hpp"
#include "floodlens/io.hpp"
#include "floodlens/num.hpp"
#include "floodlens/pngplot.hpp"
#include "floodlens/rng.hpp"
#include "floodlens/sha256.hpp"
#include "floodlens/textcorpus.hpp"

namespace floodlens {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::fetch_text: return "fetch-text";
    case Stage::embed: return "embed";
    case Stage::build_dataset: return "build-dataset";
    case Stage::train: return "train";
    case Stage::evaluate: return "evaluate";
    case Stage::report: return "report";
    case Stage::all: return "all";
  }
  return "all";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (Stage s : {Stage::ingest, Stage::fetch_text, Stage::embed, Stage::build_dataset,
                  Stage::train, Stage::evaluate, Stage::report, Stage::all}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

void RunConfig::validate() const {
  if (horizons.empty()) throw ConfigError("at least one horizon is required");
  for (int n : horizons) {
    if (n < 1 || n > 5) throw ConfigError("horizons must lie in [1, 5]");
  }
  if (window.start > window.end) throw ConfigError("study window start exceeds end");
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (threshold < 0.0 || threshold > 1.0) throw ConfigError("threshold must lie in [0, 1]");
  if (encoder_preset != "tiny" && encoder_preset != "file") {
    throw ConfigError("encoder_preset must be `tiny` or `file`");
  }
  if (encoder_preset == "file" && (!encoder_weights || !encoder_vocab)) {
    throw ConfigError("encoder_preset=file requires encoder_weights and encoder_vocab");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
}

std::filesystem::path RunConfig::resolved_cache_dir() const {
  if (cache_dir) return *cache_dir;
  if (const char* env = std::getenv("FLOODLENS_CACHE_DIR"); env && *env) return env;
  return out_dir / "corpus";
}

namespace {

/// One pipeline instance per output directory: O_EXCL lock file, removed on
/// scope exit.
class LockFile {
 public:
  explicit LockFile(const std::filesystem::path& path) : path_(path) {
    ensure_dir(path.parent_path());
    fd_ = ::open(path.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw ConfigError("output directory is locked by another run (" + path.string() +
                        " exists; delete it if stale)");
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] const auto n = ::write(fd_, pid.data(), pid.size());
  }
  ~LockFile() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["disasters_csv"] = c.disasters_csv.string();
  if (c.damages_csv) j["damages_csv"] = c.damages_csv->string();
  j["out_dir"] = c.out_dir.string();
  j["cache_dir"] = c.resolved_cache_dir().string();
  j["window"] = {{"start", c.window.start}, {"end", c.window.end}};
  j["horizons"] = c.horizons;
  std::vector<std::string> archs;
  for (Architecture a : c.architectures) archs.emplace_back(to_string(a));
  j["architectures"] = archs;
  j["seed"] = c.seed;
  j["wiki_base"] = c.wiki_base.empty() ? default_wiki_base() : c.wiki_base;
  j["rate_limit_rps"] = c.rate_limit_rps;
  j["max_retries"] = c.max_retries;
  if (c.wiki_region) j["wiki_region"] = *c.wiki_region;
  j["split_mode"] = std::string(to_string(c.split_mode));
  j["train_fraction"] = c.train_fraction;
  j["select_top_k"] = c.select_top_k;
  j["threshold"] = c.threshold;
  j["encoder_preset"] = c.encoder_preset;
  if (c.encoder_weights) j["encoder_weights"] = c.encoder_weights->string();
  if (c.encoder_vocab) j["encoder_vocab"] = c.encoder_vocab->string();
  j["finetune_epochs"] = c.finetune_epochs;
  j["finetune_lr"] = c.finetune_lr;
  j["head_epochs"] = c.head_epochs;
  j["head_lr"] = c.head_lr;
  j["batch_size"] = c.batch_size;
  j["search"] = {{"max_depths", c.search.max_depths},
                 {"learning_rates", c.search.learning_rates},
                 {"tree_counts", c.search.tree_counts},
                 {"cv_folds", c.search.cv_folds}};
  j["figures"] = c.figures;
  return j;
}

}  // namespace

Pipeline::Pipeline(RunConfig config) : config_(std::move(config)) { config_.validate(); }

std::filesystem::path Pipeline::events_path() const { return config_.out_dir / "events.csv"; }
std::filesystem::path Pipeline::rejects_path() const { return config_.out_dir / "rejects.jsonl"; }
std::filesystem::path Pipeline::features_path() const { return config_.out_dir / "features.csv"; }
std::filesystem::path Pipeline::corpus_cache_path() const {
  return config_.resolved_cache_dir() / "cache.jsonl";
}
std::filesystem::path Pipeline::corpus_manifest_path() const {
  return config_.resolved_cache_dir() / "manifest.json";
}
std::filesystem::path Pipeline::embeddings_path(Architecture arch) const {
  return config_.out_dir / "embeddings" / (std::string(to_string(arch)) + ".emb");
}
std::filesystem::path Pipeline::finetuned_state_path() const {
  return config_.out_dir / "states" / "finetuned_encoder.bin";
}
std::filesystem::path Pipeline::transfer_head_path() const {
  return config_.out_dir / "states" / "transfer_head.json";
}
std::filesystem::path Pipeline::dataset_path(const std::string& mode, int horizon) const {
  return config_.out_dir / "datasets" / (mode + "_h" + std::to_string(horizon) + ".csv");
}
std::filesystem::path Pipeline::dataset_manifest_path(const std::string& mode, int horizon) const {
  return config_.out_dir / "datasets" / (mode + "_h" + std::to_string(horizon) + ".manifest.json");
}
std::filesystem::path Pipeline::model_path(const std::string& mode, int horizon) const {
  return config_.out_dir / "models" / (mode + "_h" + std::to_string(horizon) + ".json");
}
std::filesystem::path Pipeline::eval_runs_path() const {
  return config_.out_dir / "eval" / "runs.json";
}
std::filesystem::path Pipeline::report_csv_path() const {
  return config_.out_dir / "report" / "report.csv";
}
std::filesystem::path Pipeline::report_txt_path() const {
  return config_.out_dir / "report" / "report.txt";
}
std::filesystem::path Pipeline::manifest_path() const { return config_.out_dir / "manifest.json"; }

std::vector<std::string> Pipeline::modes() const {
  std::vector<std::string> out{"statistical"};
  for (Architecture a : config_.architectures) out.emplace_back(to_string(a));
  return out;
}

void Pipeline::require_artifact(const std::filesystem::path& path,
                                std::string_view produced_by) const {
  if (!std::filesystem::exists(path)) {
    throw StageDependencyError("missing artifact " + path.string() + "; run `floodlens " +
                               std::string(produced_by) + "` first");
  }
}

void Pipeline::record_stage(std::string_view stage,
                            const std::vector<std::filesystem::path>& artifacts,
                            const nlohmann::json& stats) {
  nlohmann::json manifest;
  if (std::filesystem::exists(manifest_path())) {
    try {
      manifest = nlohmann::json::parse(read_file(manifest_path()));
    } catch (const nlohmann::json::exception&) {
      manifest = nlohmann::json::object();
    }
  }
  manifest["config"] = config_to_json(config_);
  nlohmann::json entry;
  entry["completed_at"] = iso8601_utc_now();
  nlohmann::json files = nlohmann::json::object();
  for (const auto& path : artifacts) {
    files[std::filesystem::relative(path, config_.out_dir).string()] = sha256_file_hex(path);
  }
  entry["artifacts"] = std::move(files);
  if (!stats.is_null()) entry["stats"] = stats;
  manifest["stages"][std::string(stage)] = std::move(entry);
  write_file_atomic(manifest_path(), manifest.dump(2) + "\n");
}

void Pipeline::run(Stage stage) {
  ensure_dir(config_.out_dir);
  LockFile lock(config_.out_dir / ".lock");
  const Stage order[] = {Stage::ingest, Stage::fetch_text,    Stage::embed, Stage::build_dataset,
                         Stage::train,  Stage::evaluate, Stage::report};
  if (stage == Stage::all) {
    for (Stage s : order) run_stage_unlocked(s);
  } else {
    run_stage_unlocked(stage);
  }
}

void Pipeline::run_stage_unlocked(Stage stage) {
  switch (stage) {
    case Stage::ingest: run_ingest(); break;
    case Stage::fetch_text: run_fetch_text(); break;
    case Stage::embed: run_embed(); break;
    case Stage::build_dataset: run_build_dataset(); break;
    case Stage::train: run_train(); break;
    case Stage::evaluate: run_evaluate(); break;
    case Stage::report: run_report(); break;
    case Stage::all: break;
  }
}

void Pipeline::run_ingest() {
  if (config_.disasters_csv.empty()) throw ConfigError("no disaster CSV configured");
  const ParseResult result =
      parse_events(config_.disasters_csv, config_.damages_csv, IngestConfig{config_.window});
  write_file_atomic(events_path(), result.table.to_csv());
  write_file_atomic(rejects_path(), rejects_to_jsonl(result.rejects));

  nlohmann::json stats;
  stats["rows_in"] = result.stats.rows_in;
  stats["accepted"] = result.stats.accepted;
  stats["rejected"] = result.stats.rejected;
  stats["damage_rows"] = result.stats.damage_rows;
  stats["damage_joined"] = result.stats.damage_joined;
  stats["damage_unmatched"] = result.stats.damage_unmatched;
  stats["damage_rejected"] = result.stats.damage_rejected;
  stats["unique_grids"] = unique_grids(result.table).size();
  record_stage("ingest", {events_path(), rejects_path()}, stats);
  std::cout << "[ingest] " << result.stats.accepted << " events, " << result.stats.rejected
            << " rejected, " << unique_grids(result.table).size() << " grids\n";
}

void Pipeline::run_fetch_text() {
  require_artifact(events_path(), "ingest");
  const EventTable table = EventTable::read_csv(events_path());
  const std::set<GridId> grids = unique_grids(table);

  WikiClientConfig wiki;
  wiki.base_url = config_.wiki_base.empty() ? default_wiki_base() : config_.wiki_base;
  wiki.rate_limit_rps = config_.rate_limit_rps;
  wiki.max_retries = config_.max_retries;
  wiki.admin_region = config_.wiki_region;
  WikiClient client(wiki);

  CorpusBuildStats stats;
  build_corpus(table, grids, client, corpus_cache_path(), corpus_manifest_path(), &stats);

  nlohmann::json s;
  s["requested"] = stats.requested;
  s["fetched"] = stats.fetched;
  s["cache_hits"] = stats.cache_hits;
  s["missing"] = stats.missing;
  s["covered"] = stats.requested - stats.missing;
  record_stage("fetch-text", {corpus_cache_path(), corpus_manifest_path()}, s);
  std::cout << "[fetch-text] " << stats.requested - stats.missing << "/" << stats.requested
            << " grids with text (" << stats.fetched << " fetched, " << stats.cache_hits
            << " cached)\n";
}

TextEncoder Pipeline::load_base_encoder() const {
  if (config_.encoder_preset == "tiny") {
    return make_tiny_text_encoder(derive_seed(config_.seed, "encoder/tiny"));
  }
  return TextEncoder{WordPieceTokenizer::from_vocab_file(*config_.encoder_vocab),
                     Encoder::load(*config_.encoder_weights)};
}

void Pipeline::run_embed() {
  require_artifact(events_path(), "ingest");
  require_artifact(corpus_cache_path(), "fetch-text");
  const EventTable table = EventTable::read_csv(events_path());
  const CorpusCache corpus = CorpusCache::load(corpus_cache_path());
  const TextEncoder base = load_base_encoder();
  const std::vector<FloodinessLabel> labels = label_floodiness(table, unique_grids(table));

  std::vector<std::filesystem::path> artifacts;
  nlohmann::json stats;

  for (Architecture arch : config_.architectures) {
    const TextEncoder* encoder = &base;
    std::optional<TextEncoder> finetuned;
    TransferHead head;
    const TransferHead* head_ptr = nullptr;

    if (arch == Architecture::finetuned_avg) {
      EmbedTrainConfig tc;
      tc.epochs = config_.finetune_epochs;
      tc.learning_rate = config_.finetune_lr;
      tc.batch_size = config_.batch_size;
      tc.seed = derive_seed(config_.seed, "embed/finetune");
      const FinetuneResult result = finetune_classifier(corpus, labels, base, tc);
      finetuned.emplace(TextEncoder{base.tokenizer, result.encoder});
      encoder = &*finetuned;
      result.encoder.save(finetuned_state_path());
      nlohmann::json sidecar;
      sidecar["architecture"] = "finetuned_avg";
      sidecar["epochs"] = tc.epochs;
      sidecar["seed"] = tc.seed;
      nlohmann::json log = nlohmann::json::array();
      for (const EpochLog& e : result.log) {
        log.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss},
                       {"val_accuracy", e.val_accuracy}});
      }
      sidecar["metrics"] = std::move(log);
      sidecar["checksum"] = result.encoder.checksum();
      write_file_atomic(config_.out_dir / "states" / "finetuned_encoder.json",
                        sidecar.dump(2) + "\n");
      artifacts.push_back(finetuned_state_path());
      artifacts.push_back(config_.out_dir / "states" / "finetuned_encoder.json");
      if (!result.log.empty()) stats["finetune_val_accuracy"] = result.log.back().val_accuracy;
    } else if (arch == Architecture::transfer_head) {
      EmbedTrainConfig tc;
      tc.epochs = config_.head_epochs;
      tc.learning_rate = config_.head_lr;
      tc.batch_size = config_.batch_size;
      tc.seed = derive_seed(config_.seed, "embed/head");
      const TransferTrainResult result = train_transfer_head(corpus, labels, base, tc);
      head = result.head;
      head_ptr = &head;
      head.save(transfer_head_path());
      nlohmann::json sidecar;
      sidecar["architecture"] = "transfer_head";
      sidecar["epochs"] = tc.epochs;
      sidecar["seed"] = tc.seed;
      nlohmann::json log = nlohmann::json::array();
      for (const EpochLog& e : result.log) {
        log.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss},
                       {"val_accuracy", e.val_accuracy}});
      }
      sidecar["metrics"] = std::move(log);
      sidecar["backbone_checksum"] = base.encoder.checksum();
      write_file_atomic(config_.out_dir / "states" / "transfer_head.meta.json",
                        sidecar.dump(2) + "\n");
      artifacts.push_back(transfer_head_path());
      artifacts.push_back(config_.out_dir / "states" / "transfer_head.meta.json");
      if (!result.log.empty()) stats["head_val_accuracy"] = result.log.back().val_accuracy;
    }

    EmbedderState state{arch, encoder, head_ptr};
    EmbeddingMap map;
    for (const auto& [grid, entry] : corpus.entries()) {
      map[grid] = embed_grid(entry, state);
    }
    EmbeddingStoreMeta meta;
    meta.architecture = std::string(to_string(arch));
    meta.dim = map.empty() ? 0 : static_cast<int>(map.begin()->second.size());
    meta.backbone_checksum = encoder->encoder.checksum();
    meta.seed = config_.seed;
    write_embedding_store(embeddings_path(arch), map, meta);
    artifacts.push_back(embeddings_path(arch));
    std::cout << "[embed] " << to_string(arch) << ": " << map.size() << " grids, dim " << meta.dim
              << "\n";
  }
  record_stage("embed", artifacts, stats);
}

void Pipeline::run_build_dataset() {
  require_artifact(events_path(), "ingest");
  const EventTable table = EventTable::read_csv(events_path());

  std::ostringstream features;
  write_feature_csv(features, feature_matrix(table, unique_grids(table), config_.window));
  write_file_atomic(features_path(), features.str());

  std::vector<std::filesystem::path> artifacts{features_path()};
  nlohmann::json stats;
  stats["filtered_grids"] = filter_grids(table).size();

  AssembleOptions options;
  options.window = config_.window;
  options.split_mode = config_.split_mode;
  options.train_fraction = config_.train_fraction;
  options.select_top_k = config_.select_top_k;

  for (int horizon : config_.horizons) {
    const std::uint64_t split_seed =
        derive_seed(config_.seed, "split/h" + std::to_string(horizon));
    for (const std::string& mode : modes()) {
      std::optional<EmbeddingMap> embeddings;
      if (mode != "statistical") {
        const auto arch = parse_architecture(mode);
        require_artifact(embeddings_path(*arch), "embed");
        embeddings = read_embedding_store(embeddings_path(*arch)).first;
      }
      const DatasetSplit split = assemble(table, embeddings ? &*embeddings : nullptr, mode,
                                          horizon, split_seed, options);
      std::ostringstream csv;
      write_dataset_csv(csv, split);
      write_file_atomic(dataset_path(mode, horizon), csv.str());
      write_file_atomic(dataset_manifest_path(mode, horizon),
                        dataset_manifest(split).dump(2) + "\n");
      artifacts.push_back(dataset_path(mode, horizon));
      artifacts.push_back(dataset_manifest_path(mode, horizon));
    }
    std::cout << "[build-dataset] horizon " << horizon << ": " << modes().size() << " modes\n";
  }
  record_stage("build-dataset", artifacts, stats);
}

void Pipeline::run_train() {
  std::vector<std::filesystem::path> artifacts;
  nlohmann::json stats = nlohmann::json::object();
  for (int horizon : config_.horizons) {
    for (const std::string& mode : modes()) {
      require_artifact(dataset_path(mode, horizon), "build-dataset");
      const DatasetSplit split =
          read_dataset(dataset_path(mode, horizon), dataset_manifest_path(mode, horizon));
      const std::uint64_t train_seed =
          derive_seed(config_.seed, "train/" + mode + "/h" + std::to_string(horizon));
      const TrainedClassifier clf = train_classifier(split, config_.search, train_seed);
      write_file_atomic(model_path(mode, horizon), clf.to_json().dump() + "\n");
      const auto sidecar_path = config_.out_dir / "models" /
                                (mode + "_h" + std::to_string(horizon) + ".meta.json");
      write_file_atomic(sidecar_path, clf.sidecar(config_.search).dump(2) + "\n");
      artifacts.push_back(model_path(mode, horizon));
      artifacts.push_back(sidecar_path);
      stats[mode + "_h" + std::to_string(horizon) + "_cv_auc"] = clf.cv_auc;
      std::cout << "[train] " << mode << " h" << horizon << ": cv_auc "
                << format_double(clf.cv_auc) << " (depth " << clf.best.max_depth << ", lr "
                << format_double(clf.best.learning_rate) << ", trees " << clf.best.n_trees
                << ")\n";
    }
  }
  record_stage("train", artifacts, stats);
}

void Pipeline::run_evaluate() {
  nlohmann::json runs = nlohmann::json::array();
  for (int horizon : config_.horizons) {
    // Baseline reads the statistical dataset; every mode shares its labels.
    require_artifact(dataset_path("statistical", horizon), "build-dataset");
    const DatasetSplit stat_split =
        read_dataset(dataset_path("statistical", horizon), dataset_manifest_path("statistical", horizon));

    std::vector<int> labels;
    for (const LabeledExample& ex : stat_split.test) labels.push_back(ex.label);

    {
      const std::vector<int> preds = baseline_predict(stat_split.test, stat_split.feature_names);
      nlohmann::json run;
      run["model"] = "baseline";
      run["horizon"] = horizon;
      run["feature_count"] = 1;
      run["preds"] = preds;
      run["scores"] = std::vector<double>(preds.begin(), preds.end());
      run["labels"] = labels;
      runs.push_back(std::move(run));
    }

    for (const std::string& mode : modes()) {
      require_artifact(model_path(mode, horizon), "train");
      const DatasetSplit split =
          mode == "statistical"
              ? stat_split
              : read_dataset(dataset_path(mode, horizon), dataset_manifest_path(mode, horizon));
      const TrainedClassifier clf =
          TrainedClassifier::from_json(nlohmann::json::parse(read_file(model_path(mode, horizon))));
      const std::vector<double> scores = predict_proba(clf, split.test, split.feature_names);
      std::vector<int> preds;
      preds.reserve(scores.size());
      for (double s : scores) preds.push_back(s >= config_.threshold ? 1 : 0);
      std::vector<int> mode_labels;
      for (const LabeledExample& ex : split.test) mode_labels.push_back(ex.label);

      nlohmann::json run;
      run["model"] = mode;
      run["horizon"] = horizon;
      run["feature_count"] = clf.selected.size();
      run["scores"] = scores;
      run["preds"] = preds;
      run["labels"] = mode_labels;
      runs.push_back(std::move(run));
    }
    std::cout << "[evaluate] horizon " << horizon << ": " << modes().size() + 1 << " models\n";
  }
  nlohmann::json doc;
  doc["threshold"] = config_.threshold;
  doc["runs"] = std::move(runs);
  write_file_atomic(eval_runs_path(), doc.dump() + "\n");
  record_stage("evaluate", {eval_runs_path()}, nlohmann::json::object());
}

void Pipeline::run_report() {
  require_artifact(eval_runs_path(), "evaluate");
  const nlohmann::json doc = nlohmann::json::parse(read_file(eval_runs_path()));

  std::vector<EvalRun> runs;
  for (const auto& r : doc.at("runs")) {
    EvalRun run;
    run.model = r.at("model").get<std::string>();
    run.horizon = r.at("horizon").get<int>();
    run.feature_count = r.at("feature_count").get<int>();
    run.scores = r.at("scores").get<std::vector<double>>();
    run.preds = r.at("preds").get<std::vector<int>>();
    run.labels = r.at("labels").get<std::vector<int>>();
    runs.push_back(std::move(run));
  }
  const EvalReport report = build_report(runs);
  write_file_atomic(report_csv_path(), report.to_csv());
  write_file_atomic(report_txt_path(), report.to_text());
  std::vector<std::filesystem::path> artifacts{report_csv_path(), report_txt_path()};

  if (config_.figures) {
    for (const EvalRun& run : runs) {
      const auto fig = config_.out_dir / "report" /
                       ("roc_" + run.model + "_" + std::to_string(run.horizon) + ".png");
      write_roc_png(fig, roc_curve(run.scores, run.labels));
      artifacts.push_back(fig);
    }
  }
  record_stage("report", artifacts, nlohmann::json::object());
  std::cout << "[report] " << report.rows.size() << " rows -> " << report_csv_path().string()
            << "\n";
}

DatasetSplit read_dataset(const std::filesystem::path& csv_path,
                          const std::filesystem::path& manifest_path) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("bad dataset manifest " + manifest_path.string() + ": " + e.what());
  }

  DatasetSplit split;
  split.architecture = manifest.at("architecture").get<std::string>();
  split.horizon = manifest.at("horizon").get<int>();
  split.seed = manifest.at("seed").get<std::uint64_t>();
  const auto mode = parse_split_mode(manifest.at("split_mode").get<std::string>());
  if (!mode) throw SchemaError("bad split_mode in " + manifest_path.string());
  split.split_mode = *mode;
  split.feature_names = manifest.at("feature_names").get<std::vector<std::string>>();
  split.selected = manifest.at("selected_indices").get<std::vector<int>>();

  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset: " + csv_path.string());
  CsvReader reader(in);
  const auto header = reader.next_row();
  const std::size_t expected = 5 + split.feature_names.size();
  if (!header || header->size() != expected) {
    throw SchemaError("dataset header does not match the manifest: " + csv_path.string());
  }
  while (auto row = reader.next_row()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (row->size() != expected) {
      throw SchemaError("bad dataset row at line " + std::to_string(reader.record_line()));
    }
    LabeledExample ex;
    const auto grid = parse_int((*row)[1]);
    const auto year = parse_int((*row)[2]);
    const auto horizon = parse_int((*row)[3]);
    const auto label = parse_int((*row)[4]);
    if (!grid || !year || !horizon || !label) {
      throw SchemaError("bad dataset row at line " + std::to_string(reader.record_line()));
    }
    ex.grid = GridId(static_cast<int>(*grid));
    ex.year = static_cast<int>(*year);
    ex.horizon = static_cast<int>(*horizon);
    ex.label = static_cast<int>(*label);
    ex.features.reserve(split.feature_names.size());
    for (std::size_t f = 0; f < split.feature_names.size(); ++f) {
      const auto v = parse_double((*row)[5 + f]);
      if (!v) throw SchemaError("bad feature value at line " + std::to_string(reader.record_line()));
      ex.features.push_back(*v);
    }
    if ((*row)[0] == "train") {
      split.train.push_back(std::move(ex));
    } else if ((*row)[0] == "test") {
      split.test.push_back(std::move(ex));
    } else {
      throw SchemaError("bad split tag at line " + std::to_string(reader.record_line()));
    }
  }
  return split;
}

}  // namespace floodlens
