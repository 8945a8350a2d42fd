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

// floodlens: next-1-to-5-year flood risk prediction from yearly disaster
// statistics fused with text-derived geography embeddings.
//
// Subcommands run the pipeline stages over one output directory:
//   ingest         parse disaster/damage CSVs into the canonical event table
//   fetch-text     download geography paragraphs per grid (cached, resumable)
//   embed          train/apply the text encoders, write embedding stores
//   build-dataset  assemble labeled examples per horizon and mode
//   train          grid-searched boosted-tree classifiers per dataset
//   evaluate       score test sets, including the persistence baseline
//   report         render the comparison table (CSV + text, optional figures)
//   all            everything above, in order
//
// Exit codes: 0 success, 1 user/config error, 2 environment error.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/pipeline.hpp"
#include "floodlens/strings.hpp"

namespace {

struct CliValues {
  std::string disasters;
  std::string damages;
  std::string out_dir = "out";
  std::string cache_dir;
  int window_start = 1960;
  int window_end = 2018;
  std::vector<int> horizons{1, 2, 5};
  std::vector<std::string> architectures{"pretrained_avg", "finetuned_avg", "transfer_head"};
  std::uint64_t seed = 1;
  std::string wiki_base;
  double rate_limit = 2.0;
  int max_retries = 3;
  std::string wiki_region;
  std::string split_mode = "random";
  double train_fraction = 0.7;
  int select_top_k = 64;
  double threshold = 0.5;
  std::string encoder_preset = "tiny";
  std::string encoder_weights;
  std::string encoder_vocab;
  int finetune_epochs = 3;
  double finetune_lr = 2e-5;
  int head_epochs = 3;
  double head_lr = 1e-3;
  int batch_size = 16;
  bool figures = false;
};

floodlens::RunConfig to_run_config(const CliValues& v) {
  using namespace floodlens;
  RunConfig config;
  config.disasters_csv = v.disasters;
  if (!v.damages.empty()) config.damages_csv = v.damages;
  config.out_dir = v.out_dir;
  if (!v.cache_dir.empty()) config.cache_dir = v.cache_dir;
  config.window = StudyWindow{v.window_start, v.window_end};
  config.horizons = v.horizons;
  config.architectures.clear();
  for (const std::string& name : v.architectures) {
    const auto arch = parse_architecture(name);
    if (!arch) throw ConfigError("unknown architecture: " + name);
    config.architectures.push_back(*arch);
  }
  config.seed = v.seed;
  config.wiki_base = v.wiki_base;
  config.rate_limit_rps = v.rate_limit;
  config.max_retries = v.max_retries;
  if (!v.wiki_region.empty()) config.wiki_region = v.wiki_region;
  const auto mode = parse_split_mode(v.split_mode);
  if (!mode) throw ConfigError("unknown split mode: " + v.split_mode);
  config.split_mode = *mode;
  config.train_fraction = v.train_fraction;
  config.select_top_k = v.select_top_k;
  config.threshold = v.threshold;
  config.encoder_preset = v.encoder_preset;
  if (!v.encoder_weights.empty()) config.encoder_weights = v.encoder_weights;
  if (!v.encoder_vocab.empty()) config.encoder_vocab = v.encoder_vocab;
  config.finetune_epochs = v.finetune_epochs;
  config.finetune_lr = v.finetune_lr;
  config.head_epochs = v.head_epochs;
  config.head_lr = v.head_lr;
  config.batch_size = v.batch_size;
  config.figures = v.figures;
  return config;
}

void add_options(CLI::App& app, CliValues& v) {
  app.add_option("--disasters", v.disasters, "disaster CSV (record_id,disaster_type,year,lat,lon,location_name)");
  app.add_option("--damages", v.damages, "damage CSV (record_id,damage_cost)");
  app.add_option("--out", v.out_dir, "output directory")->capture_default_str();
  app.add_option("--cache-dir", v.cache_dir, "corpus cache directory (default: $FLOODLENS_CACHE_DIR or <out>/corpus)");
  app.add_option("--window-start", v.window_start, "first study year")->capture_default_str();
  app.add_option("--window-end", v.window_end, "last study year")->capture_default_str();
  app.add_option("--horizons", v.horizons, "prediction horizons in years")->delimiter(',')->capture_default_str();
  app.add_option("--architectures", v.architectures,
                 "text architectures: pretrained_avg, finetuned_avg, transfer_head")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--seed", v.seed, "master seed; all stage seeds derive from it")->capture_default_str();
  app.add_option("--wiki-base", v.wiki_base, "wiki API base URL (default: $FLOODLENS_WIKI_BASE or the public endpoint)");
  app.add_option("--rate-limit", v.rate_limit, "wiki requests per second")->capture_default_str();
  app.add_option("--max-retries", v.max_retries, "wiki retry attempts")->capture_default_str();
  app.add_option("--wiki-region", v.wiki_region, "admin region appended as a '(region)' page-name synonym");
  app.add_option("--split-mode", v.split_mode, "random | by_grid | temporal")->capture_default_str();
  app.add_option("--train-fraction", v.train_fraction, "train share of the example split")->capture_default_str();
  app.add_option("--select-top-k", v.select_top_k, "features kept by selection")->capture_default_str();
  app.add_option("--threshold", v.threshold, "decision threshold for accuracy/F1")->capture_default_str();
  app.add_option("--encoder-preset", v.encoder_preset, "tiny | file")->capture_default_str();
  app.add_option("--encoder-weights", v.encoder_weights, "encoder weight file (preset=file)");
  app.add_option("--encoder-vocab", v.encoder_vocab, "encoder vocabulary file (preset=file)");
  app.add_option("--finetune-epochs", v.finetune_epochs)->capture_default_str();
  app.add_option("--finetune-lr", v.finetune_lr)->capture_default_str();
  app.add_option("--head-epochs", v.head_epochs)->capture_default_str();
  app.add_option("--head-lr", v.head_lr)->capture_default_str();
  app.add_option("--batch-size", v.batch_size)->capture_default_str();
  app.add_flag("--figures", v.figures, "write ROC curve PNGs with the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flood risk prediction from disaster statistics and geography text"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (key=value)");
  app.fallthrough();

  CliValues values;
  add_options(app, values);

  std::optional<floodlens::Stage> selected;
  const std::vector<std::pair<std::string, floodlens::Stage>> stages = {
      {"ingest", floodlens::Stage::ingest},
      {"fetch-text", floodlens::Stage::fetch_text},
      {"embed", floodlens::Stage::embed},
      {"build-dataset", floodlens::Stage::build_dataset},
      {"train", floodlens::Stage::train},
      {"evaluate", floodlens::Stage::evaluate},
      {"report", floodlens::Stage::report},
      {"all", floodlens::Stage::all},
  };
  for (const auto& [name, stage] : stages) {
    auto* sub = app.add_subcommand(name, "run the " + name + " stage");
    sub->fallthrough();
    sub->callback([&selected, stage = stage] { selected = stage; });
  }

  try {
    app.parse(argc, argv);
    if (selected) {
      floodlens::Pipeline pipeline(to_run_config(values));
      pipeline.run(*selected);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // CLI11 prints help/errors; usage errors exit 1+
  } catch (const floodlens::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_class());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
