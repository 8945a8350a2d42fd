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

#include "floodlens/encoder.hpp"

#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/io.hpp"
#include "floodlens/rng.hpp"
#include "floodlens/sha256.hpp"

namespace floodlens {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

double gelu_derivative(double x) {
  const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  const double cdf = 0.5 * (1.0 + std::erf(x * M_SQRT1_2));
  return cdf + x * phi;
}

void EncoderConfig::validate() const {
  if (vocab_size <= 0 || hidden <= 0 || layers <= 0 || heads <= 0 || intermediate <= 0 ||
      max_position <= 0) {
    throw ConfigError("encoder config fields must all be positive");
  }
  if (hidden % heads != 0) {
    throw ConfigError("hidden width " + std::to_string(hidden) + " is not divisible by " +
                      std::to_string(heads) + " heads");
  }
}

namespace {

void random_fill(Eigen::MatrixXd& m, Rng& rng, double scale) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-scale, scale);
  }
}

/// y = LN(x) row-wise with affine (gamma, beta); fills the cache.
Eigen::MatrixXd layer_norm(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gamma,
                           const Eigen::MatrixXd& beta, double eps, LayerNormCache& cache) {
  const Eigen::Index rows = x.rows(), cols = x.cols();
  cache.xhat.resize(rows, cols);
  cache.inv_std.resize(rows);
  Eigen::MatrixXd y(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double mu = x.row(r).mean();
    const double var = (x.row(r).array() - mu).square().mean();
    const double inv_std = 1.0 / std::sqrt(var + eps);
    cache.inv_std(r) = inv_std;
    cache.xhat.row(r) = (x.row(r).array() - mu) * inv_std;
    y.row(r) = cache.xhat.row(r).cwiseProduct(gamma.row(0)) + beta.row(0);
  }
  return y;
}

/// dL/dx for y = LN(x); accumulates dgamma/dbeta.
Eigen::MatrixXd layer_norm_backward(const Eigen::MatrixXd& dy, const LayerNormCache& cache,
                                    const Eigen::MatrixXd& gamma, Eigen::MatrixXd& dgamma,
                                    Eigen::MatrixXd& dbeta) {
  const Eigen::Index rows = dy.rows(), cols = dy.cols();
  Eigen::MatrixXd dx(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    dgamma.row(0) += dy.row(r).cwiseProduct(cache.xhat.row(r));
    dbeta.row(0) += dy.row(r);
    const Eigen::RowVectorXd a = dy.row(r).cwiseProduct(gamma.row(0));
    const double mean_a = a.mean();
    const double mean_ax = a.cwiseProduct(cache.xhat.row(r)).mean();
    dx.row(r) = (a.array() - mean_a - cache.xhat.row(r).array() * mean_ax) * cache.inv_std(r);
  }
  return dx;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& s) {
  Eigen::MatrixXd p(s.rows(), s.cols());
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    const double m = s.row(r).maxCoeff();
    Eigen::ArrayXd e = (s.row(r).array() - m).exp();
    p.row(r) = e / e.sum();
  }
  return p;
}

}  // namespace

Encoder::Encoder(const EncoderConfig& config, std::uint64_t init_seed) : config_(config) {
  config.validate();
  Rng rng(derive_seed(init_seed, "encoder/init"));
  const double scale = 0.05;
  const int H = config.hidden, F = config.intermediate;

  weights_.word_emb.resize(config.vocab_size, H);
  weights_.pos_emb.resize(config.max_position, H);
  random_fill(weights_.word_emb, rng, scale);
  random_fill(weights_.pos_emb, rng, scale);
  weights_.emb_ln_g = Eigen::MatrixXd::Ones(1, H);
  weights_.emb_ln_b = Eigen::MatrixXd::Zero(1, H);

  weights_.layers.resize(config.layers);
  for (LayerWeights& layer : weights_.layers) {
    for (Eigen::MatrixXd* w : {&layer.q_w, &layer.k_w, &layer.v_w, &layer.o_w}) {
      w->resize(H, H);
      random_fill(*w, rng, scale);
    }
    for (Eigen::MatrixXd* b : {&layer.q_b, &layer.k_b, &layer.v_b, &layer.o_b}) {
      *b = Eigen::MatrixXd::Zero(1, H);
    }
    layer.sa_ln_g = Eigen::MatrixXd::Ones(1, H);
    layer.sa_ln_b = Eigen::MatrixXd::Zero(1, H);
    layer.ff_w1.resize(H, F);
    random_fill(layer.ff_w1, rng, scale);
    layer.ff_b1 = Eigen::MatrixXd::Zero(1, F);
    layer.ff_w2.resize(F, H);
    random_fill(layer.ff_w2, rng, scale);
    layer.ff_b2 = Eigen::MatrixXd::Zero(1, H);
    layer.out_ln_g = Eigen::MatrixXd::Ones(1, H);
    layer.out_ln_b = Eigen::MatrixXd::Zero(1, H);
  }
}

Eigen::MatrixXd Encoder::forward_training(std::span<const int> ids, Tape& tape) const {
  const int T = static_cast<int>(ids.size());
  if (T < 1) throw DegenerateDataError("empty token sequence");
  if (T > config_.max_position) throw ConfigError("sequence exceeds the encoder position table");
  const int H = config_.hidden;
  const int A = config_.heads;
  const int dh = H / A;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  tape.ids.assign(ids.begin(), ids.end());
  tape.emb_sum.resize(T, H);
  for (int t = 0; t < T; ++t) {
    const int id = ids[static_cast<std::size_t>(t)];
    if (id < 0 || id >= config_.vocab_size) throw ConfigError("token id out of vocabulary range");
    tape.emb_sum.row(t) = weights_.word_emb.row(id) + weights_.pos_emb.row(t);
  }
  tape.h0 = layer_norm(tape.emb_sum, weights_.emb_ln_g, weights_.emb_ln_b, config_.layer_norm_eps,
                       tape.emb_ln);

  tape.layers.clear();
  tape.layers.resize(static_cast<std::size_t>(config_.layers));
  Eigen::MatrixXd x = tape.h0;
  for (int l = 0; l < config_.layers; ++l) {
    const LayerWeights& w = weights_.layers[static_cast<std::size_t>(l)];
    Tape::LayerCache& cache = tape.layers[static_cast<std::size_t>(l)];
    cache.input = x;

    cache.q = (x * w.q_w).rowwise() + w.q_b.row(0);
    cache.k = (x * w.k_w).rowwise() + w.k_b.row(0);
    cache.v = (x * w.v_w).rowwise() + w.v_b.row(0);

    cache.attn_concat.resize(T, H);
    cache.probs.resize(static_cast<std::size_t>(A));
    for (int h = 0; h < A; ++h) {
      const auto qh = cache.q.middleCols(h * dh, dh);
      const auto kh = cache.k.middleCols(h * dh, dh);
      const auto vh = cache.v.middleCols(h * dh, dh);
      const Eigen::MatrixXd scores = qh * kh.transpose() * scale;
      cache.probs[static_cast<std::size_t>(h)] = softmax_rows(scores);
      cache.attn_concat.middleCols(h * dh, dh) = cache.probs[static_cast<std::size_t>(h)] * vh;
    }
    const Eigen::MatrixXd attn_out = (cache.attn_concat * w.o_w).rowwise() + w.o_b.row(0);
    const Eigen::MatrixXd r1 = x + attn_out;
    cache.n1 = layer_norm(r1, w.sa_ln_g, w.sa_ln_b, config_.layer_norm_eps, cache.sa_ln);

    cache.u = (cache.n1 * w.ff_w1).rowwise() + w.ff_b1.row(0);
    cache.gu = cache.u.unaryExpr([](double v) { return gelu(v); });
    const Eigen::MatrixXd ffn_out = (cache.gu * w.ff_w2).rowwise() + w.ff_b2.row(0);
    const Eigen::MatrixXd r2 = cache.n1 + ffn_out;
    cache.n2 = layer_norm(r2, w.out_ln_g, w.out_ln_b, config_.layer_norm_eps, cache.out_ln);
    x = cache.n2;
  }
  return x;
}

std::vector<Eigen::MatrixXd> Encoder::forward(std::span<const int> ids) const {
  Tape tape;
  forward_training(ids, tape);
  std::vector<Eigen::MatrixXd> states;
  states.reserve(static_cast<std::size_t>(config_.layers) + 1);
  states.push_back(tape.h0);
  for (const auto& layer : tape.layers) states.push_back(layer.n2);
  return states;
}

Eigen::MatrixXd Encoder::second_to_last(std::span<const int> ids) const {
  const auto states = forward(ids);
  return states[states.size() - 2];
}

void Encoder::backward(const Tape& tape, const Eigen::MatrixXd& d_last,
                       EncoderWeights& grads) const {
  const int T = static_cast<int>(tape.ids.size());
  const int A = config_.heads;
  const int dh = config_.hidden / A;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  Eigen::MatrixXd dx = d_last;
  for (int l = config_.layers - 1; l >= 0; --l) {
    const LayerWeights& w = weights_.layers[static_cast<std::size_t>(l)];
    const Tape::LayerCache& cache = tape.layers[static_cast<std::size_t>(l)];
    LayerWeights& gw = grads.layers[static_cast<std::size_t>(l)];

    // out layer norm over r2 = n1 + ffn_out
    const Eigen::MatrixXd dr2 =
        layer_norm_backward(dx, cache.out_ln, w.out_ln_g, gw.out_ln_g, gw.out_ln_b);

    // ffn_out = gelu(n1·W1 + b1)·W2 + b2
    Eigen::MatrixXd dn1 = dr2;
    const Eigen::MatrixXd dgu = dr2 * w.ff_w2.transpose();
    gw.ff_w2 += cache.gu.transpose() * dr2;
    gw.ff_b2.row(0) += dr2.colwise().sum();
    const Eigen::MatrixXd du =
        dgu.cwiseProduct(cache.u.unaryExpr([](double v) { return gelu_derivative(v); }));
    gw.ff_w1 += cache.n1.transpose() * du;
    gw.ff_b1.row(0) += du.colwise().sum();
    dn1 += du * w.ff_w1.transpose();

    // sa layer norm over r1 = input + attn_out
    const Eigen::MatrixXd dr1 =
        layer_norm_backward(dn1, cache.sa_ln, w.sa_ln_g, gw.sa_ln_g, gw.sa_ln_b);
    Eigen::MatrixXd dinput = dr1;

    // attn_out = concat·Wo + bo
    const Eigen::MatrixXd dconcat = dr1 * w.o_w.transpose();
    gw.o_w += cache.attn_concat.transpose() * dr1;
    gw.o_b.row(0) += dr1.colwise().sum();

    Eigen::MatrixXd dq(T, config_.hidden), dk(T, config_.hidden), dv(T, config_.hidden);
    for (int h = 0; h < A; ++h) {
      const auto qh = cache.q.middleCols(h * dh, dh);
      const auto kh = cache.k.middleCols(h * dh, dh);
      const auto vh = cache.v.middleCols(h * dh, dh);
      const Eigen::MatrixXd& probs = cache.probs[static_cast<std::size_t>(h)];
      const auto dctx = dconcat.middleCols(h * dh, dh);

      const Eigen::MatrixXd dprobs = dctx * vh.transpose();
      dv.middleCols(h * dh, dh) = probs.transpose() * dctx;

      Eigen::MatrixXd dscores(T, T);
      for (int r = 0; r < T; ++r) {
        const double dot = dprobs.row(r).dot(probs.row(r));
        dscores.row(r) = probs.row(r).cwiseProduct((dprobs.row(r).array() - dot).matrix());
      }
      dq.middleCols(h * dh, dh) = dscores * kh * scale;
      dk.middleCols(h * dh, dh) = dscores.transpose() * qh * scale;
    }

    gw.q_w += cache.input.transpose() * dq;
    gw.q_b.row(0) += dq.colwise().sum();
    gw.k_w += cache.input.transpose() * dk;
    gw.k_b.row(0) += dk.colwise().sum();
    gw.v_w += cache.input.transpose() * dv;
    gw.v_b.row(0) += dv.colwise().sum();
    dinput += dq * w.q_w.transpose() + dk * w.k_w.transpose() + dv * w.v_w.transpose();

    dx = std::move(dinput);
  }

  const Eigen::MatrixXd demb =
      layer_norm_backward(dx, tape.emb_ln, weights_.emb_ln_g, grads.emb_ln_g, grads.emb_ln_b);
  for (int t = 0; t < T; ++t) {
    grads.word_emb.row(tape.ids[static_cast<std::size_t>(t)]) += demb.row(t);
    grads.pos_emb.row(t) += demb.row(t);
  }
}

namespace {

template <typename Weights, typename Matrix>
std::vector<std::pair<std::string, Matrix*>> collect_parameters(Weights& w) {
  std::vector<std::pair<std::string, Matrix*>> out;
  out.emplace_back("embeddings.word", &w.word_emb);
  out.emplace_back("embeddings.position", &w.pos_emb);
  out.emplace_back("embeddings.ln_g", &w.emb_ln_g);
  out.emplace_back("embeddings.ln_b", &w.emb_ln_b);
  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    auto& layer = w.layers[l];
    const std::string p = "layer" + std::to_string(l) + ".";
    out.emplace_back(p + "q_w", &layer.q_w);
    out.emplace_back(p + "q_b", &layer.q_b);
    out.emplace_back(p + "k_w", &layer.k_w);
    out.emplace_back(p + "k_b", &layer.k_b);
    out.emplace_back(p + "v_w", &layer.v_w);
    out.emplace_back(p + "v_b", &layer.v_b);
    out.emplace_back(p + "o_w", &layer.o_w);
    out.emplace_back(p + "o_b", &layer.o_b);
    out.emplace_back(p + "sa_ln_g", &layer.sa_ln_g);
    out.emplace_back(p + "sa_ln_b", &layer.sa_ln_b);
    out.emplace_back(p + "ff_w1", &layer.ff_w1);
    out.emplace_back(p + "ff_b1", &layer.ff_b1);
    out.emplace_back(p + "ff_w2", &layer.ff_w2);
    out.emplace_back(p + "ff_b2", &layer.ff_b2);
    out.emplace_back(p + "out_ln_g", &layer.out_ln_g);
    out.emplace_back(p + "out_ln_b", &layer.out_ln_b);
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::string, Eigen::MatrixXd*>> Encoder::named_parameters() {
  return collect_parameters<EncoderWeights, Eigen::MatrixXd>(weights_);
}

std::vector<std::pair<std::string, const Eigen::MatrixXd*>> Encoder::named_parameters() const {
  return collect_parameters<const EncoderWeights, const Eigen::MatrixXd>(weights_);
}

std::vector<Eigen::MatrixXd*> tensor_list(EncoderWeights& w) {
  std::vector<Eigen::MatrixXd*> out;
  for (auto& [name, tensor] : collect_parameters<EncoderWeights, Eigen::MatrixXd>(w)) {
    out.push_back(tensor);
  }
  return out;
}

std::vector<const Eigen::MatrixXd*> tensor_list(const EncoderWeights& w) {
  std::vector<const Eigen::MatrixXd*> out;
  for (auto& [name, tensor] : collect_parameters<const EncoderWeights, const Eigen::MatrixXd>(w)) {
    out.push_back(tensor);
  }
  return out;
}

double Encoder::max_abs_difference(const EncoderWeights& a, const EncoderWeights& b) {
  const auto ta = tensor_list(a);
  const auto tb = tensor_list(b);
  if (ta.size() != tb.size()) throw ConfigError("weight sets differ in structure");
  double max_diff = 0.0;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i]->rows() != tb[i]->rows() || ta[i]->cols() != tb[i]->cols()) {
      throw ConfigError("weight sets differ in tensor shapes");
    }
    max_diff = std::max(max_diff, (*ta[i] - *tb[i]).cwiseAbs().maxCoeff());
  }
  return max_diff;
}

EncoderWeights Encoder::zero_grads() const {
  EncoderWeights g;
  g.word_emb = Eigen::MatrixXd::Zero(config_.vocab_size, config_.hidden);
  g.pos_emb = Eigen::MatrixXd::Zero(config_.max_position, config_.hidden);
  g.emb_ln_g = Eigen::MatrixXd::Zero(1, config_.hidden);
  g.emb_ln_b = Eigen::MatrixXd::Zero(1, config_.hidden);
  g.layers.resize(static_cast<std::size_t>(config_.layers));
  for (LayerWeights& layer : g.layers) {
    layer.q_w = Eigen::MatrixXd::Zero(config_.hidden, config_.hidden);
    layer.k_w = Eigen::MatrixXd::Zero(config_.hidden, config_.hidden);
    layer.v_w = Eigen::MatrixXd::Zero(config_.hidden, config_.hidden);
    layer.o_w = Eigen::MatrixXd::Zero(config_.hidden, config_.hidden);
    layer.q_b = Eigen::MatrixXd::Zero(1, config_.hidden);
    layer.k_b = Eigen::MatrixXd::Zero(1, config_.hidden);
    layer.v_b = Eigen::MatrixXd::Zero(1, config_.hidden);
    layer.o_b = Eigen::MatrixXd::Zero(1, config_.hidden);
    layer.sa_ln_g = Eigen::MatrixXd::Zero(1, config_.hidden);
    layer.sa_ln_b = Eigen::MatrixXd::Zero(1, config_.hidden);
    layer.ff_w1 = Eigen::MatrixXd::Zero(config_.hidden, config_.intermediate);
    layer.ff_b1 = Eigen::MatrixXd::Zero(1, config_.intermediate);
    layer.ff_w2 = Eigen::MatrixXd::Zero(config_.intermediate, config_.hidden);
    layer.ff_b2 = Eigen::MatrixXd::Zero(1, config_.hidden);
    layer.out_ln_g = Eigen::MatrixXd::Zero(1, config_.hidden);
    layer.out_ln_b = Eigen::MatrixXd::Zero(1, config_.hidden);
  }
  return g;
}

void AdamOptimizer::step(const std::vector<Eigen::MatrixXd*>& params,
                         const std::vector<const Eigen::MatrixXd*>& grads) {
  if (params.size() != grads.size()) throw ConfigError("optimizer param/grad count mismatch");
  if (m_.empty()) {
    m_.resize(params.size());
    v_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = Eigen::ArrayXXd::Zero(params[i]->rows(), params[i]->cols());
      v_[i] = Eigen::ArrayXXd::Zero(params[i]->rows(), params[i]->cols());
    }
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Eigen::ArrayXXd g = grads[i]->array();
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.square();
    params[i]->array() -= lr_ * (m_[i] / bc1) / ((v_[i] / bc2).sqrt() + eps_);
  }
}

// --- serialization ----------------------------------------------------------
//
// Container layout: magic "FLENC001", little-endian u32 header length, JSON
// header (config + ordered tensor manifest), then float32 tensor data in
// manifest order, row-major.

namespace {

constexpr char kMagic[8] = {'F', 'L', 'E', 'N', 'C', '0', '0', '1'};

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t read_u32(const std::string& in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return v;
}

}  // namespace

std::string Encoder::serialize() const {
  nlohmann::json header;
  header["config"] = {{"vocab_size", config_.vocab_size},   {"hidden", config_.hidden},
                      {"layers", config_.layers},           {"heads", config_.heads},
                      {"intermediate", config_.intermediate}, {"max_position", config_.max_position},
                      {"layer_norm_eps", config_.layer_norm_eps}};
  nlohmann::json tensors = nlohmann::json::array();
  const auto params = named_parameters();
  for (const auto& [name, tensor] : params) {
    tensors.push_back({{"name", name}, {"rows", tensor->rows()}, {"cols", tensor->cols()}});
  }
  header["tensors"] = std::move(tensors);
  header["dtype"] = "f32";
  const std::string header_str = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  append_u32(out, static_cast<std::uint32_t>(header_str.size()));
  out += header_str;
  for (const auto& [name, tensor] : params) {
    for (Eigen::Index r = 0; r < tensor->rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor->cols(); ++c) {
        const float f = static_cast<float>((*tensor)(r, c));
        char buf[4];
        std::memcpy(buf, &f, 4);
        out.append(buf, 4);
      }
    }
  }
  return out;
}

Encoder Encoder::deserialize(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) + 4 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw SchemaError("not an encoder weight file");
  }
  const std::uint32_t header_len = read_u32(bytes, sizeof(kMagic));
  const std::size_t header_start = sizeof(kMagic) + 4;
  if (bytes.size() < header_start + header_len) throw SchemaError("truncated encoder weight file");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(header_start, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad encoder header: ") + e.what());
  }

  Encoder enc;
  const auto& c = header.at("config");
  enc.config_.vocab_size = c.at("vocab_size").get<int>();
  enc.config_.hidden = c.at("hidden").get<int>();
  enc.config_.layers = c.at("layers").get<int>();
  enc.config_.heads = c.at("heads").get<int>();
  enc.config_.intermediate = c.at("intermediate").get<int>();
  enc.config_.max_position = c.at("max_position").get<int>();
  enc.config_.layer_norm_eps = c.at("layer_norm_eps").get<double>();
  enc.config_.validate();
  enc.weights_ = enc.zero_grads();  // correct shapes, then fill

  auto params = enc.named_parameters();
  const auto& tensors = header.at("tensors");
  if (tensors.size() != params.size()) throw SchemaError("tensor manifest size mismatch");

  std::size_t offset = header_start + header_len;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& t = tensors[i];
    if (t.at("name").get<std::string>() != params[i].first ||
        t.at("rows").get<Eigen::Index>() != params[i].second->rows() ||
        t.at("cols").get<Eigen::Index>() != params[i].second->cols()) {
      throw SchemaError("tensor manifest mismatch at " + params[i].first);
    }
    Eigen::MatrixXd& m = *params[i].second;
    const std::size_t count = static_cast<std::size_t>(m.rows() * m.cols());
    if (bytes.size() < offset + count * 4) throw SchemaError("truncated tensor data");
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        float f;
        std::memcpy(&f, bytes.data() + offset, 4);
        m(r, col) = static_cast<double>(f);
        offset += 4;
      }
    }
  }
  return enc;
}

void Encoder::save(const std::filesystem::path& path) const { write_file_atomic(path, serialize()); }

Encoder Encoder::load(const std::filesystem::path& path) {
  try {
    return deserialize(read_file(path));
  } catch (const IoError&) {
    throw EnvironmentError("encoder weights unavailable: " + path.string());
  }
}

std::string Encoder::checksum() const { return sha256_hex(serialize()); }

}  // namespace floodlens
