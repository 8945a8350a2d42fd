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

#ifndef FLOODLENS_ENCODER_HPP
#define FLOODLENS_ENCODER_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace floodlens {

/// Bidirectional transformer encoder of the BERT family: learned word +
/// position embeddings, post-layer-norm blocks with multi-head self
/// attention and a GELU feed-forward. Width/depth are configuration, so the
/// same code runs the tiny hermetic encoder used by the test suite and
/// full-size published weights.
struct EncoderConfig {
  int vocab_size = 0;
  int hidden = 0;        // H
  int layers = 0;        // L
  int heads = 0;         // H must be divisible by heads
  int intermediate = 0;  // feed-forward width
  int max_position = 0;  // maximum sequence length
  double layer_norm_eps = 1e-12;

  void validate() const;
};

/// All matrices are row-major semantics x·W; biases are 1×N rows.
struct LayerWeights {
  Eigen::MatrixXd q_w, k_w, v_w, o_w;
  Eigen::MatrixXd q_b, k_b, v_b, o_b;
  Eigen::MatrixXd sa_ln_g, sa_ln_b;
  Eigen::MatrixXd ff_w1, ff_b1, ff_w2, ff_b2;
  Eigen::MatrixXd out_ln_g, out_ln_b;
};

struct EncoderWeights {
  Eigen::MatrixXd word_emb;  // V×H
  Eigen::MatrixXd pos_emb;   // P×H
  Eigen::MatrixXd emb_ln_g, emb_ln_b;
  std::vector<LayerWeights> layers;
};

/// Row-wise layer norm intermediates kept for the backward pass.
struct LayerNormCache {
  Eigen::MatrixXd xhat;
  Eigen::VectorXd inv_std;
};

class Encoder {
 public:
  Encoder() = default;

  /// Random initialization (uniform ±0.05), for the tiny hermetic encoder.
  Encoder(const EncoderConfig& config, std::uint64_t init_seed);

  const EncoderConfig& config() const { return config_; }
  EncoderWeights& weights() { return weights_; }
  const EncoderWeights& weights() const { return weights_; }

  /// Hidden states at every depth: slot 0 is the embedding output; slot l is
  /// the output of layer l. Size layers+1.
  std::vector<Eigen::MatrixXd> forward(std::span<const int> ids) const;

  /// The second-to-last entry of the hidden-state stack, the pooling input
  /// used throughout the pipeline.
  Eigen::MatrixXd second_to_last(std::span<const int> ids) const;

  /// Forward with cached activations; returns the last layer states.
  struct Tape;
  Eigen::MatrixXd forward_training(std::span<const int> ids, Tape& tape) const;

  /// Accumulates parameter gradients for dLoss/d(last layer states) into
  /// `grads`, which must be zero-or-accumulated tensors of matching shapes.
  void backward(const Tape& tape, const Eigen::MatrixXd& d_last, EncoderWeights& grads) const;

  std::vector<std::pair<std::string, Eigen::MatrixXd*>> named_parameters();
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> named_parameters() const;

  /// Zero tensors shaped like this encoder's parameters.
  EncoderWeights zero_grads() const;

  /// Parameter maxima of |a - b| across two weight sets of identical shape.
  static double max_abs_difference(const EncoderWeights& a, const EncoderWeights& b);

  std::string serialize() const;  // binary container, float32 tensors
  static Encoder deserialize(const std::string& bytes);
  void save(const std::filesystem::path& path) const;
  static Encoder load(const std::filesystem::path& path);

  /// sha256 of the serialized form; pins weight files and detects any
  /// backbone drift during head-only training.
  std::string checksum() const;

 private:
  EncoderConfig config_;
  EncoderWeights weights_;
};

struct Encoder::Tape {
  std::vector<int> ids;
  Eigen::MatrixXd emb_sum;
  LayerNormCache emb_ln;
  Eigen::MatrixXd h0;
  struct LayerCache {
    Eigen::MatrixXd input;
    Eigen::MatrixXd q, k, v;
    std::vector<Eigen::MatrixXd> probs;  // per head, T×T
    Eigen::MatrixXd attn_concat;
    LayerNormCache sa_ln;
    Eigen::MatrixXd n1;
    Eigen::MatrixXd u;   // pre-GELU
    Eigen::MatrixXd gu;  // GELU(u)
    LayerNormCache out_ln;
    Eigen::MatrixXd n2;
  };
  std::vector<LayerCache> layers;
};

/// Adam with bias correction. Moment buffers are sized on first use and must
/// then always be stepped with the same parameter list.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<Eigen::MatrixXd*>& params,
            const std::vector<const Eigen::MatrixXd*>& grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Eigen::ArrayXXd> m_, v_;
};

/// Tensors of a weight set in the canonical named_parameters() order.
std::vector<Eigen::MatrixXd*> tensor_list(EncoderWeights& w);
std::vector<const Eigen::MatrixXd*> tensor_list(const EncoderWeights& w);

/// Exact GELU and its derivative.
double gelu(double x);
double gelu_derivative(double x);

}  // namespace floodlens

#endif  // FLOODLENS_ENCODER_HPP
