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

#include "floodlens/textembed.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

#include "floodlens/errors.hpp"
#include "floodlens/io.hpp"
#include "floodlens/rng.hpp"

namespace floodlens {

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::pretrained_avg: return "pretrained_avg";
    case Architecture::finetuned_avg: return "finetuned_avg";
    case Architecture::transfer_head: return "transfer_head";
  }
  return "pretrained_avg";
}

std::optional<Architecture> parse_architecture(std::string_view s) {
  if (s == "pretrained_avg") return Architecture::pretrained_avg;
  if (s == "finetuned_avg") return Architecture::finetuned_avg;
  if (s == "transfer_head") return Architecture::transfer_head;
  return std::nullopt;
}

namespace {

double stable_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// BCE with logits, computed without overflow.
double bce_with_logits(double z, int y) {
  return std::max(z, 0.0) - z * static_cast<double>(y) + std::log1p(std::exp(-std::abs(z)));
}

const char* const kTinyWords[] = {
    "the",      "a",        "an",       "of",        "and",      "to",       "in",
    "is",       "are",      "on",       "with",      "by",       "its",      "it",
    "lies",     "sits",     "town",     "city",      "village",  "region",   "district",
    "county",   "province", "near",     "beside",    "along",    "north",    "south",
    "east",     "west",     "central",  "upper",     "lower",    "river",    "rivers",
    "flood",    "floods",   "flooding", "floodplain", "plain",   "plains",   "delta",
    "basin",    "monsoon",  "rain",     "rains",     "rainfall", "wet",      "wetland",
    "wetlands", "marsh",    "swamp",    "lake",      "lakes",    "lowland",  "lowlands",
    "coast",    "coastal",  "estuary",  "valley",    "banks",    "bank",     "overflow",
    "overflows", "levee",   "arid",     "dry",       "desert",   "plateau",  "hills",
    "hill",     "highland", "highlands", "upland",   "uplands",  "mountain", "mountains",
    "rocky",    "scarce",   "drains",   "drained",   "drainage", "drought",  "dust",
    "steppe",   "mesa",     "ridge",    "cliffs",    "sand",     "dunes",    "gravel",
    "stone",    "climate",  "terrain",  "ground",    "soil",     "water",    "waters",
    "stream",   "streams",  "creek",    "snow",      "winter",   "summer",   "annual",
    "seasonal", "year",     "yearly",   "every",     "heavy",    "broad",    "wide",
    "low",      "high",     "each",     "often",     "rarely",   "quickly",  "slowly",
    "swells",   "rises",    "area",     "land",      "fields",   "farmland", "missing",
    "geography", "summary",
};

}  // namespace

std::vector<std::string> tiny_vocab() {
  std::vector<std::string> vocab{"[PAD]", "[UNK]", "[CLS]", "[SEP]"};
  for (int c = 33; c <= 126; ++c) vocab.push_back(std::string(1, static_cast<char>(c)));
  for (int c = 33; c <= 126; ++c) vocab.push_back("##" + std::string(1, static_cast<char>(c)));
  for (const char* w : kTinyWords) vocab.push_back(w);
  return vocab;
}

TextEncoder make_tiny_text_encoder(std::uint64_t seed) {
  TextEncoder te{WordPieceTokenizer::from_vocab(tiny_vocab()), Encoder{}};
  EncoderConfig config;
  config.vocab_size = te.tokenizer.vocab_size();
  config.hidden = 32;
  config.layers = 2;
  config.heads = 2;
  config.intermediate = 64;
  config.max_position = 64;
  te.encoder = Encoder(config, seed);
  return te;
}

TokenEmbeddingSequence encode_tokens(const TextEncoder& te, std::string_view text) {
  if (text.empty()) throw DegenerateDataError("cannot encode empty text");
  const std::vector<int> ids = te.tokenizer.encode(text, te.encoder.config().max_position);
  TokenEmbeddingSequence seq;
  seq.matrix = te.encoder.second_to_last(ids);
  seq.mask.assign(ids.size(), 1);
  return seq;
}

std::vector<double> mean_pool(const TokenEmbeddingSequence& seq) {
  const Eigen::Index T = seq.matrix.rows(), H = seq.matrix.cols();
  if (static_cast<Eigen::Index>(seq.mask.size()) != T) {
    throw ConfigError("mask length does not match the token count");
  }
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(H);
  std::size_t m = 0;
  for (Eigen::Index t = 0; t < T; ++t) {
    if (seq.mask[static_cast<std::size_t>(t)]) {
      sum += seq.matrix.row(t);
      ++m;
    }
  }
  if (m == 0) throw DegenerateDataError("mean_pool over an all-false mask");
  sum /= static_cast<double>(m);
  return {sum.data(), sum.data() + H};
}

std::vector<FloodinessLabel> label_floodiness(const EventTable& table, const std::set<GridId>& grids) {
  std::map<GridId, int> flood_counts;
  for (const GeoEvent& e : table.events()) {
    if (e.type == DisasterType::flood) ++flood_counts[e.grid];
  }
  std::vector<FloodinessLabel> labels;
  labels.reserve(grids.size());
  for (GridId g : grids) {
    const auto it = flood_counts.find(g);
    const int count = it == flood_counts.end() ? 0 : it->second;
    labels.push_back({g, count > 2 ? 1 : 0});
  }
  return labels;
}

// --- shared training plumbing -------------------------------------------------

namespace {

struct TrainDoc {
  GridId grid;
  std::vector<int> ids;
  std::vector<std::uint8_t> mask;
  int label = 0;
};

std::vector<std::uint8_t> make_mask(std::size_t n_tokens, bool include_special) {
  std::vector<std::uint8_t> mask(n_tokens, 1);
  if (!include_special && n_tokens > 2) {
    mask.front() = 0;  // [CLS]
    mask.back() = 0;   // [SEP]
  }
  return mask;
}

std::vector<TrainDoc> prepare_docs(const CorpusCache& corpus,
                                   const std::vector<FloodinessLabel>& labels,
                                   const TextEncoder& te, bool include_special) {
  std::vector<TrainDoc> docs;
  docs.reserve(labels.size());
  for (const FloodinessLabel& l : labels) {
    if (!corpus.contains(l.grid)) {
      throw JoinError("floodiness label for grid " + std::to_string(l.grid.value()) +
                      " has no corpus entry");
    }
    TrainDoc doc;
    doc.grid = l.grid;
    doc.ids = te.tokenizer.encode(corpus.at(l.grid).text, te.encoder.config().max_position);
    doc.mask = make_mask(doc.ids.size(), include_special);
    doc.label = l.label;
    docs.push_back(std::move(doc));
  }
  return docs;
}

void split_docs(std::vector<TrainDoc>& docs, double train_fraction, std::uint64_t seed,
                std::vector<std::size_t>& train_idx, std::vector<std::size_t>& val_idx) {
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, "textembed/split"));
  rng.shuffle(order);
  const std::size_t n_train =
      static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(docs.size())));
  train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  val_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  if (train_idx.empty() || val_idx.empty()) {
    throw TrainingError("corpus too small for a " + std::to_string(train_fraction) +
                        " train/validation split");
  }
}

}  // namespace

// --- fine-tuning --------------------------------------------------------------

FinetuneResult finetune_classifier(const CorpusCache& corpus,
                                   const std::vector<FloodinessLabel>& labels,
                                   const TextEncoder& base, const EmbedTrainConfig& config) {
  if (labels.empty()) throw TrainingError("no floodiness labels");
  const int H = base.encoder.config().hidden;
  const double lr = config.learning_rate > 0.0 ? config.learning_rate : 2e-5;

  FinetuneResult result;
  result.encoder = base.encoder;

  Rng init_rng(derive_seed(config.seed, "textembed/cls-head"));
  const double bound = 1.0 / std::sqrt(static_cast<double>(H));
  result.head.pre_w.resize(H, H);
  for (Eigen::Index r = 0; r < H; ++r) {
    for (Eigen::Index c = 0; c < H; ++c) result.head.pre_w(r, c) = init_rng.uniform(-bound, bound);
  }
  result.head.pre_b = Eigen::MatrixXd::Zero(1, H);
  result.head.cls_w.resize(H, 1);
  for (Eigen::Index r = 0; r < H; ++r) result.head.cls_w(r, 0) = init_rng.uniform(-bound, bound);
  result.head.cls_b = Eigen::MatrixXd::Zero(1, 1);

  TextEncoder te{base.tokenizer, base.encoder};
  std::vector<TrainDoc> docs = prepare_docs(corpus, labels, te, config.include_special_tokens);
  std::vector<std::size_t> train_idx, val_idx;
  split_docs(docs, config.train_fraction, config.seed, train_idx, val_idx);

  EncoderWeights enc_grads = result.encoder.zero_grads();
  ClassifierHead head_grads;
  head_grads.pre_w = Eigen::MatrixXd::Zero(H, H);
  head_grads.pre_b = Eigen::MatrixXd::Zero(1, H);
  head_grads.cls_w = Eigen::MatrixXd::Zero(H, 1);
  head_grads.cls_b = Eigen::MatrixXd::Zero(1, 1);

  // Parameter/gradient lists share one fixed order.
  std::vector<Eigen::MatrixXd*> params = tensor_list(result.encoder.weights());
  std::vector<Eigen::MatrixXd*> grads = tensor_list(enc_grads);
  params.push_back(&result.head.pre_w);
  params.push_back(&result.head.pre_b);
  params.push_back(&result.head.cls_w);
  params.push_back(&result.head.cls_b);
  grads.push_back(&head_grads.pre_w);
  grads.push_back(&head_grads.pre_b);
  grads.push_back(&head_grads.cls_w);
  grads.push_back(&head_grads.cls_b);

  AdamOptimizer adam(lr);
  Rng order_rng(derive_seed(config.seed, "textembed/ft-order"));

  auto forward_doc = [&](const TrainDoc& doc, Encoder::Tape* tape, Eigen::RowVectorXd* pre_out,
                         Eigen::RowVectorXd* pre_lin_out) {
    Encoder::Tape local;
    Encoder::Tape& t = tape ? *tape : local;
    const Eigen::MatrixXd last = result.encoder.forward_training(doc.ids, t);
    const Eigen::RowVectorXd h_cls = last.row(0);
    Eigen::RowVectorXd pre_lin = h_cls * result.head.pre_w + result.head.pre_b.row(0);
    Eigen::RowVectorXd pre = pre_lin.cwiseMax(0.0);
    const double logit = (pre * result.head.cls_w)(0, 0) + result.head.cls_b(0, 0);
    if (pre_out) *pre_out = pre;
    if (pre_lin_out) *pre_lin_out = pre_lin;
    return logit;
  };

  auto zero_all = [&] {
    for (Eigen::MatrixXd* g : grads) g->setZero();
  };

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<std::size_t> order = train_idx;
    order_rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t batch_count = 0;
    zero_all();
    for (std::size_t i = 0; i < order.size(); ++i) {
      const TrainDoc& doc = docs[order[i]];
      Encoder::Tape tape;
      Eigen::RowVectorXd pre, pre_lin;
      const double logit = forward_doc(doc, &tape, &pre, &pre_lin);
      loss_sum += bce_with_logits(logit, doc.label);
      const double dlogit = stable_sigmoid(logit) - static_cast<double>(doc.label);

      head_grads.cls_w += pre.transpose() * dlogit;
      head_grads.cls_b(0, 0) += dlogit;
      Eigen::RowVectorXd dpre = dlogit * result.head.cls_w.transpose();
      for (Eigen::Index c = 0; c < dpre.cols(); ++c) {
        if (pre_lin(c) <= 0.0) dpre(c) = 0.0;
      }
      const Eigen::RowVectorXd h_cls = tape.layers.back().n2.row(0);
      head_grads.pre_w += h_cls.transpose() * dpre;
      head_grads.pre_b.row(0) += dpre;

      Eigen::MatrixXd d_last =
          Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(doc.ids.size()), H);
      d_last.row(0) = dpre * result.head.pre_w.transpose();
      result.encoder.backward(tape, d_last, enc_grads);
      ++batch_count;

      if (batch_count == static_cast<std::size_t>(config.batch_size) || i + 1 == order.size()) {
        const double inv = 1.0 / static_cast<double>(batch_count);
        for (Eigen::MatrixXd* g : grads) (*g) *= inv;
        adam.step(params, {grads.begin(), grads.end()});
        zero_all();
        batch_count = 0;
      }
    }

    std::size_t correct = 0;
    for (std::size_t i : val_idx) {
      const double logit = forward_doc(docs[i], nullptr, nullptr, nullptr);
      const int pred = stable_sigmoid(logit) > 0.5 ? 1 : 0;
      correct += (pred == docs[i].label);
    }
    result.log.push_back({epoch, loss_sum / static_cast<double>(order.size()),
                          static_cast<double>(correct) / static_cast<double>(val_idx.size())});
  }
  return result;
}

// --- transfer head -------------------------------------------------------------

TransferHead TransferHead::init(int hidden, std::uint64_t seed) {
  TransferHead head;
  Rng rng(derive_seed(seed, "textembed/head-init"));
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  head.w.resize(hidden, kTransferDim);
  for (Eigen::Index r = 0; r < head.w.rows(); ++r) {
    for (Eigen::Index c = 0; c < head.w.cols(); ++c) head.w(r, c) = rng.uniform(-bound, bound);
  }
  head.b = Eigen::MatrixXd::Zero(1, kTransferDim);
  head.r_w = Eigen::MatrixXd::Zero(kTransferDim, 1);
  head.r_b = Eigen::MatrixXd::Zero(1, 1);
  return head;
}

namespace {

struct HeadForward {
  Eigen::MatrixXd activations;   // T×32: sigmoid(A) or raw A, by placement
  Eigen::RowVectorXd pooled;     // masked mean of activations
  Eigen::RowVectorXd squashed;   // post-average placement only
  double logit = 0.0;
  std::size_t n_masked = 0;
};

HeadForward head_forward(const TransferHead& head, const Eigen::MatrixXd& tokens,
                         const std::vector<std::uint8_t>& mask, bool sigmoid_per_token) {
  if (static_cast<Eigen::Index>(mask.size()) != tokens.rows()) {
    throw ConfigError("mask length does not match the token count");
  }
  HeadForward f;
  const Eigen::MatrixXd a = (tokens * head.w).rowwise() + head.b.row(0);
  f.activations = sigmoid_per_token
                      ? Eigen::MatrixXd(a.unaryExpr([](double v) { return stable_sigmoid(v); }))
                      : a;
  f.pooled = Eigen::RowVectorXd::Zero(kTransferDim);
  for (Eigen::Index t = 0; t < tokens.rows(); ++t) {
    if (mask[static_cast<std::size_t>(t)]) {
      f.pooled += f.activations.row(t);
      ++f.n_masked;
    }
  }
  if (f.n_masked == 0) throw DegenerateDataError("transfer head pooling over an all-false mask");
  f.pooled /= static_cast<double>(f.n_masked);
  if (sigmoid_per_token) {
    f.logit = (f.pooled * head.r_w)(0, 0) + head.r_b(0, 0);
  } else {
    f.squashed = f.pooled.unaryExpr([](double v) { return stable_sigmoid(v); });
    f.logit = (f.squashed * head.r_w)(0, 0) + head.r_b(0, 0);
  }
  return f;
}

}  // namespace

double transfer_head_loss(const TransferHead& head, const Eigen::MatrixXd& tokens,
                          const std::vector<std::uint8_t>& mask, int label,
                          bool sigmoid_per_token) {
  return bce_with_logits(head_forward(head, tokens, mask, sigmoid_per_token).logit, label);
}

TransferHeadGrads transfer_head_grads(const TransferHead& head, const Eigen::MatrixXd& tokens,
                                      const std::vector<std::uint8_t>& mask, int label,
                                      bool sigmoid_per_token) {
  const HeadForward f = head_forward(head, tokens, mask, sigmoid_per_token);
  const double dlogit = stable_sigmoid(f.logit) - static_cast<double>(label);

  TransferHeadGrads g;
  g.r_b = Eigen::MatrixXd::Constant(1, 1, dlogit);
  Eigen::RowVectorXd dpooled;
  if (sigmoid_per_token) {
    g.r_w = f.pooled.transpose() * dlogit;
    dpooled = dlogit * head.r_w.transpose();
  } else {
    g.r_w = f.squashed.transpose() * dlogit;
    const Eigen::RowVectorXd ds = dlogit * head.r_w.transpose();
    dpooled = ds.cwiseProduct(f.squashed.cwiseProduct(
        (Eigen::RowVectorXd::Ones(kTransferDim) - f.squashed)));
  }

  const double inv_m = 1.0 / static_cast<double>(f.n_masked);
  Eigen::MatrixXd da = Eigen::MatrixXd::Zero(tokens.rows(), kTransferDim);
  for (Eigen::Index t = 0; t < tokens.rows(); ++t) {
    if (!mask[static_cast<std::size_t>(t)]) continue;
    if (sigmoid_per_token) {
      const Eigen::RowVectorXd z = f.activations.row(t);
      da.row(t) = (dpooled * inv_m).cwiseProduct(z.cwiseProduct(Eigen::RowVectorXd::Ones(kTransferDim) - z));
    } else {
      da.row(t) = dpooled * inv_m;
    }
  }
  g.w = tokens.transpose() * da;
  g.b = da.colwise().sum();
  return g;
}

TransferTrainResult train_transfer_head(const CorpusCache& corpus,
                                        const std::vector<FloodinessLabel>& labels,
                                        const TextEncoder& base, const EmbedTrainConfig& config) {
  if (labels.empty()) throw TrainingError("no floodiness labels");
  const int H = base.encoder.config().hidden;
  const double lr = config.learning_rate > 0.0 ? config.learning_rate : 1e-3;

  std::vector<TrainDoc> docs = prepare_docs(corpus, labels, base, config.include_special_tokens);
  std::vector<std::size_t> train_idx, val_idx;
  split_docs(docs, config.train_fraction, config.seed, train_idx, val_idx);

  // Backbone is frozen: token states are fixed, compute them once.
  std::vector<Eigen::MatrixXd> states(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    states[i] = base.encoder.second_to_last(docs[i].ids);
  }

  TransferTrainResult result;
  result.head = TransferHead::init(H, config.seed);

  TransferHeadGrads acc;
  acc.w = Eigen::MatrixXd::Zero(H, kTransferDim);
  acc.b = Eigen::MatrixXd::Zero(1, kTransferDim);
  acc.r_w = Eigen::MatrixXd::Zero(kTransferDim, 1);
  acc.r_b = Eigen::MatrixXd::Zero(1, 1);

  const std::vector<Eigen::MatrixXd*> params{&result.head.w, &result.head.b, &result.head.r_w,
                                             &result.head.r_b};
  const std::vector<const Eigen::MatrixXd*> grad_ptrs{&acc.w, &acc.b, &acc.r_w, &acc.r_b};

  AdamOptimizer adam(lr);
  Rng order_rng(derive_seed(config.seed, "textembed/head-order"));

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<std::size_t> order = train_idx;
    order_rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t batch_count = 0;
    acc.w.setZero();
    acc.b.setZero();
    acc.r_w.setZero();
    acc.r_b.setZero();

    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::size_t d = order[i];
      loss_sum += transfer_head_loss(result.head, states[d], docs[d].mask, docs[d].label,
                                     config.sigmoid_per_token);
      const TransferHeadGrads g = transfer_head_grads(result.head, states[d], docs[d].mask,
                                                      docs[d].label, config.sigmoid_per_token);
      acc.w += g.w;
      acc.b += g.b;
      acc.r_w += g.r_w;
      acc.r_b += g.r_b;
      ++batch_count;

      if (batch_count == static_cast<std::size_t>(config.batch_size) || i + 1 == order.size()) {
        const double inv = 1.0 / static_cast<double>(batch_count);
        acc.w *= inv;
        acc.b *= inv;
        acc.r_w *= inv;
        acc.r_b *= inv;
        adam.step(params, grad_ptrs);
        acc.w.setZero();
        acc.b.setZero();
        acc.r_w.setZero();
        acc.r_b.setZero();
        batch_count = 0;
      }
    }

    std::size_t correct = 0;
    for (std::size_t i : val_idx) {
      const double logit =
          head_forward(result.head, states[i], docs[i].mask, config.sigmoid_per_token).logit;
      const int pred = stable_sigmoid(logit) > 0.5 ? 1 : 0;
      correct += (pred == docs[i].label);
    }
    result.log.push_back({epoch, loss_sum / static_cast<double>(order.size()),
                          static_cast<double>(correct) / static_cast<double>(val_idx.size())});
  }
  return result;
}

// --- embedding -----------------------------------------------------------------

std::vector<double> embed_grid(const LocationText& text, const EmbedderState& state) {
  if (state.encoder == nullptr) throw ConfigError("embed_grid needs an encoder");
  const bool needs_head = state.architecture == Architecture::transfer_head;
  if (needs_head != (state.head != nullptr)) {
    throw ConfigError("architecture/state mismatch: transfer_head requires a head and the pooled "
                      "architectures take none");
  }

  const std::vector<int> ids =
      state.encoder->tokenizer.encode(text.text, state.encoder->encoder.config().max_position);
  TokenEmbeddingSequence seq;
  seq.matrix = state.encoder->encoder.second_to_last(ids);
  seq.mask = make_mask(ids.size(), state.include_special_tokens);

  if (!needs_head) return mean_pool(seq);

  const HeadForward f = head_forward(*state.head, seq.matrix, seq.mask, state.sigmoid_per_token);
  const Eigen::RowVectorXd& out = state.sigmoid_per_token ? f.pooled : f.squashed;
  return {out.data(), out.data() + out.cols()};
}

// --- transfer head io ------------------------------------------------------------

void TransferHead::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["hidden"] = w.rows();
  j["dim"] = kTransferDim;
  auto dump = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["w"] = dump(w);
  j["b"] = dump(b);
  j["r_w"] = dump(r_w);
  j["r_b"] = dump(r_b);
  write_file_atomic(path, j.dump() + "\n");
}

TransferHead TransferHead::load(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("bad transfer head file " + path.string() + ": " + e.what());
  }
  auto parse = [](const nlohmann::json& rows) {
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c].get<double>();
    }
    return m;
  };
  TransferHead head;
  head.w = parse(j.at("w"));
  head.b = parse(j.at("b"));
  head.r_w = parse(j.at("r_w"));
  head.r_b = parse(j.at("r_b"));
  return head;
}

// --- embedding store -------------------------------------------------------------

namespace {

constexpr char kStoreMagic[8] = {'F', 'L', 'E', 'M', 'B', '0', '0', '1'};

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t read_u32_at(const std::string& in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

void write_embedding_store(const std::filesystem::path& path, const EmbeddingMap& embeddings,
                           const EmbeddingStoreMeta& meta) {
  nlohmann::json header;
  header["architecture"] = meta.architecture;
  header["dim"] = meta.dim;
  header["backbone_checksum"] = meta.backbone_checksum;
  header["seed"] = meta.seed;
  header["count"] = embeddings.size();
  const std::string header_str = header.dump();

  std::string out(kStoreMagic, sizeof(kStoreMagic));
  append_u32(out, static_cast<std::uint32_t>(header_str.size()));
  out += header_str;
  for (const auto& [grid, values] : embeddings) {
    if (static_cast<int>(values.size()) != meta.dim) {
      throw ConfigError("embedding for grid " + std::to_string(grid.value()) +
                        " does not match the declared dimension");
    }
    append_u32(out, static_cast<std::uint32_t>(grid.value()));
    for (double v : values) {
      const float f = static_cast<float>(v);
      char buf[4];
      std::memcpy(buf, &f, 4);
      out.append(buf, 4);
    }
  }
  write_file_atomic(path, out);
}

std::pair<EmbeddingMap, EmbeddingStoreMeta> read_embedding_store(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < sizeof(kStoreMagic) + 4 ||
      std::memcmp(bytes.data(), kStoreMagic, sizeof(kStoreMagic)) != 0) {
    throw SchemaError("not an embedding store: " + path.string());
  }
  const std::uint32_t header_len = read_u32_at(bytes, sizeof(kStoreMagic));
  const std::size_t header_start = sizeof(kStoreMagic) + 4;
  if (bytes.size() < header_start + header_len) throw SchemaError("truncated embedding store");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(header_start, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad embedding store header: ") + e.what());
  }

  EmbeddingStoreMeta meta;
  meta.architecture = header.at("architecture").get<std::string>();
  meta.dim = header.at("dim").get<int>();
  meta.backbone_checksum = header.at("backbone_checksum").get<std::string>();
  meta.seed = header.at("seed").get<std::uint64_t>();
  const std::size_t count = header.at("count").get<std::size_t>();

  const std::size_t record = 4 + static_cast<std::size_t>(meta.dim) * 4;
  if (bytes.size() != header_start + header_len + count * record) {
    throw SchemaError("embedding store size mismatch");
  }

  EmbeddingMap map;
  std::size_t offset = header_start + header_len;
  for (std::size_t i = 0; i < count; ++i) {
    const GridId grid(static_cast<int>(read_u32_at(bytes, offset)));
    offset += 4;
    std::vector<double> values(static_cast<std::size_t>(meta.dim));
    for (int d = 0; d < meta.dim; ++d) {
      float f;
      std::memcpy(&f, bytes.data() + offset, 4);
      values[static_cast<std::size_t>(d)] = static_cast<double>(f);
      offset += 4;
    }
    map.emplace(grid, std::move(values));
  }
  return {std::move(map), std::move(meta)};
}

}  // namespace floodlens
