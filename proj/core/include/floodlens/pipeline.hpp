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

#ifndef FLOODLENS_PIPELINE_HPP
#define FLOODLENS_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "floodlens/dataset.hpp"
#include "floodlens/events.hpp"
#include "floodlens/model.hpp"
#include "floodlens/textembed.hpp"

namespace floodlens {

enum class Stage { ingest, fetch_text, embed, build_dataset, train, evaluate, report, all };

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

/// Full run configuration. Every field maps to a config-file key and a CLI
/// flag of the same name; flags override the file.
struct RunConfig {
  std::filesystem::path disasters_csv;
  std::optional<std::filesystem::path> damages_csv;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> cache_dir;  // default: FLOODLENS_CACHE_DIR or out/corpus

  StudyWindow window;
  std::vector<int> horizons{1, 2, 5};
  std::vector<Architecture> architectures{Architecture::pretrained_avg, Architecture::finetuned_avg,
                                          Architecture::transfer_head};
  std::uint64_t seed = 1;

  std::string wiki_base;  // empty: FLOODLENS_WIKI_BASE or the public endpoint
  double rate_limit_rps = 2.0;
  int max_retries = 3;
  std::optional<std::string> wiki_region;

  SplitMode split_mode = SplitMode::random_examples;
  double train_fraction = 0.7;
  int select_top_k = 64;
  double threshold = 0.5;

  std::string encoder_preset = "tiny";  // "tiny" or "file"
  std::optional<std::filesystem::path> encoder_weights;
  std::optional<std::filesystem::path> encoder_vocab;

  int finetune_epochs = 3;
  double finetune_lr = 2e-5;
  int head_epochs = 3;
  double head_lr = 1e-3;
  int batch_size = 16;

  SearchConfig search;
  bool figures = false;

  void validate() const;
  std::filesystem::path resolved_cache_dir() const;
};

/// Executes pipeline stages over an output directory. Artifacts are written
/// atomically; each completed stage updates the run manifest with the
/// checksums of everything it produced. One instance per output directory,
/// enforced with a lock file.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  /// Runs one stage (or `all`). Throws on failure; stage artifacts already
  /// written stay valid.
  void run(Stage stage);

  const RunConfig& config() const { return config_; }

  // Artifact locations.
  std::filesystem::path events_path() const;
  std::filesystem::path rejects_path() const;
  std::filesystem::path features_path() const;
  std::filesystem::path corpus_cache_path() const;
  std::filesystem::path corpus_manifest_path() const;
  std::filesystem::path embeddings_path(Architecture arch) const;
  std::filesystem::path finetuned_state_path() const;
  std::filesystem::path transfer_head_path() const;
  std::filesystem::path dataset_path(const std::string& mode, int horizon) const;
  std::filesystem::path dataset_manifest_path(const std::string& mode, int horizon) const;
  std::filesystem::path model_path(const std::string& mode, int horizon) const;
  std::filesystem::path eval_runs_path() const;
  std::filesystem::path report_csv_path() const;
  std::filesystem::path report_txt_path() const;
  std::filesystem::path manifest_path() const;

  /// Modes evaluated against each horizon: "statistical" plus the configured
  /// embedding architectures.
  std::vector<std::string> modes() const;

 private:
  void run_stage_unlocked(Stage stage);
  void run_ingest();
  void run_fetch_text();
  void run_embed();
  void run_build_dataset();
  void run_train();
  void run_evaluate();
  void run_report();

  TextEncoder load_base_encoder() const;
  void require_artifact(const std::filesystem::path& path, std::string_view produced_by) const;
  void record_stage(std::string_view stage, const std::vector<std::filesystem::path>& artifacts,
                    const nlohmann::json& stats);

  RunConfig config_;
};

/// Reads a dataset artifact (CSV + JSON manifest) back into a DatasetSplit.
DatasetSplit read_dataset(const std::filesystem::path& csv_path,
                          const std::filesystem::path& manifest_path);

}  // namespace floodlens

#endif  // FLOODLENS_PIPELINE_HPP
