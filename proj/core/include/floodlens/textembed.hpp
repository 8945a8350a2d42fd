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

#ifndef FLOODLENS_TEXTEMBED_HPP
#define FLOODLENS_TEXTEMBED_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "floodlens/dataset.hpp"
#include "floodlens/encoder.hpp"
#include "floodlens/events.hpp"
#include "floodlens/textcorpus.hpp"
#include "floodlens/tokenizer.hpp"

namespace floodlens {

/// The three text-embedding architectures: mean-pooled second-to-last
/// states of the pretrained encoder, the same pooling after fine-tuning the
/// whole encoder on floodiness labels, and a frozen-backbone sigmoid
/// projection head whose 32-dim per-token outputs are averaged.
enum class Architecture { pretrained_avg, finetuned_avg, transfer_head };

inline constexpr int kTransferDim = 32;

std::string_view to_string(Architecture arch);
std::optional<Architecture> parse_architecture(std::string_view s);

/// Tokenizer + encoder pair sharing one vocabulary.
struct TextEncoder {
  WordPieceTokenizer tokenizer;
  Encoder encoder;
};

/// The deterministic tiny random-weight encoder used for hermetic runs:
/// hidden 32, 2 layers, 2 heads, 64 positions, character-fallback WordPiece
/// vocabulary with a small English word list.
TextEncoder make_tiny_text_encoder(std::uint64_t seed);
std::vector<std::string> tiny_vocab();

/// Per-token states from the second-to-last encoder layer plus the pooling
/// mask (all-true by construction here; pooling honors arbitrary masks).
struct TokenEmbeddingSequence {
  Eigen::MatrixXd matrix;          // T×H
  std::vector<std::uint8_t> mask;  // T entries
};

TokenEmbeddingSequence encode_tokens(const TextEncoder& te, std::string_view text);

/// Masked arithmetic mean over token rows. Throws DegenerateDataError when
/// the mask has no true entry.
std::vector<double> mean_pool(const TokenEmbeddingSequence& seq);

/// Auxiliary label used only for encoder training: 1 iff the grid has more
/// than two flood events across all years.
struct FloodinessLabel {
  GridId grid;
  int label = 0;
};

std::vector<FloodinessLabel> label_floodiness(const EventTable& table, const std::set<GridId>& grids);

struct EmbedTrainConfig {
  int epochs = 3;
  double learning_rate = 0.0;  // 0 -> per-routine default (2e-5 fine-tune, 1e-3 head)
  int batch_size = 16;
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  bool sigmoid_per_token = true;       // head: sigmoid before the token average
  bool include_special_tokens = true;  // pooling mask covers [CLS]/[SEP]
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

/// Sequence-classification head for fine-tuning: dense+ReLU over the [CLS]
/// state, then a logistic readout.
struct ClassifierHead {
  Eigen::MatrixXd pre_w, pre_b;  // H×H, 1×H
  Eigen::MatrixXd cls_w, cls_b;  // H×1, 1×1
};

struct FinetuneResult {
  Encoder encoder;  // updated copy; the input encoder is untouched
  ClassifierHead head;
  std::vector<EpochLog> log;
};

/// Fine-tunes every encoder parameter (plus the classification head) with
/// Adam on binary cross-entropy over the floodiness labels, 70/30
/// train/validation split. Deterministic given config.seed.
FinetuneResult finetune_classifier(const CorpusCache& corpus,
                                   const std::vector<FloodinessLabel>& labels,
                                   const TextEncoder& base, const EmbedTrainConfig& config);

/// Frozen-backbone projection head: H -> 32 with sigmoid, averaged over
/// tokens, plus a 32 -> 1 readout used only during training.
struct TransferHead {
  Eigen::MatrixXd w;    // H×32
  Eigen::MatrixXd b;    // 1×32
  Eigen::MatrixXd r_w;  // 32×1
  Eigen::MatrixXd r_b;  // 1×1

  /// Head weights uniform in ±1/sqrt(hidden); readout zeros.
  static TransferHead init(int hidden, std::uint64_t seed);

  void save(const std::filesystem::path& path) const;
  static TransferHead load(const std::filesystem::path& path);
};

struct TransferHeadGrads {
  Eigen::MatrixXd w, b, r_w, r_b;
};

/// Loss and analytic gradients of the head on one document; the pair feeds
/// both the training loop and the finite-difference checks.
double transfer_head_loss(const TransferHead& head, const Eigen::MatrixXd& tokens,
                          const std::vector<std::uint8_t>& mask, int label, bool sigmoid_per_token);
TransferHeadGrads transfer_head_grads(const TransferHead& head, const Eigen::MatrixXd& tokens,
                                      const std::vector<std::uint8_t>& mask, int label,
                                      bool sigmoid_per_token);

struct TransferTrainResult {
  TransferHead head;
  std::vector<EpochLog> log;
};

/// Trains only the head; the backbone is used in inference mode and is
/// bit-identical before and after.
TransferTrainResult train_transfer_head(const CorpusCache& corpus,
                                        const std::vector<FloodinessLabel>& labels,
                                        const TextEncoder& base, const EmbedTrainConfig& config);

/// Everything embed_grid needs for one architecture.
struct EmbedderState {
  Architecture architecture = Architecture::pretrained_avg;
  const TextEncoder* encoder = nullptr;  // pretrained or fine-tuned, per architecture
  const TransferHead* head = nullptr;    // transfer_head only
  bool sigmoid_per_token = true;
  bool include_special_tokens = true;
};

/// Fixed-length embedding of one location text: H dims for the two pooled
/// architectures, 32 for the transfer head. Throws ConfigError on an
/// architecture/state mismatch.
std::vector<double> embed_grid(const LocationText& text, const EmbedderState& state);

// --- embedding store ---------------------------------------------------------

struct EmbeddingStoreMeta {
  std::string architecture;
  int dim = 0;
  std::string backbone_checksum;
  std::uint64_t seed = 0;
};

/// Binary columnar store: magic, JSON header (meta + count), then per grid a
/// u32 grid id and `dim` float32 values, sorted by grid id.
void write_embedding_store(const std::filesystem::path& path, const EmbeddingMap& embeddings,
                           const EmbeddingStoreMeta& meta);
std::pair<EmbeddingMap, EmbeddingStoreMeta> read_embedding_store(const std::filesystem::path& path);

}  // namespace floodlens

#endif  // FLOODLENS_TEXTEMBED_HPP
