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

#ifndef FLOODLENS_TOKENIZER_HPP
#define FLOODLENS_TOKENIZER_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace floodlens {

/// Lowercasing WordPiece tokenizer. Vocabulary format is one token per line
/// ("##" prefix marks continuation pieces), which is the common vocab.txt
/// layout, so published encoder vocabularies load unchanged.
class WordPieceTokenizer {
 public:
  static WordPieceTokenizer from_vocab(std::vector<std::string> vocab);
  static WordPieceTokenizer from_vocab_file(const std::filesystem::path& path);

  /// [CLS] + pieces + [SEP], truncated so the result never exceeds max_len.
  std::vector<int> encode(std::string_view text, int max_len) const;

  /// Greedy longest-match pieces of one lowercased word; [UNK] when any
  /// position fails to match.
  std::vector<int> wordpiece(std::string_view word) const;

  int vocab_size() const { return static_cast<int>(vocab_.size()); }
  int pad_id() const { return pad_id_; }
  int unk_id() const { return unk_id_; }
  int cls_id() const { return cls_id_; }
  int sep_id() const { return sep_id_; }
  const std::vector<std::string>& vocab() const { return vocab_; }

  void save_vocab(const std::filesystem::path& path) const;

 private:
  WordPieceTokenizer() = default;

  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> index_;
  int pad_id_ = -1, unk_id_ = -1, cls_id_ = -1, sep_id_ = -1;
  std::size_t max_piece_len_ = 1;
};

/// Whitespace/punctuation pre-tokenization: lowercases, splits on
/// whitespace, and makes each ASCII punctuation character its own token.
std::vector<std::string> basic_tokenize(std::string_view text);

}  // namespace floodlens

#endif  // FLOODLENS_TOKENIZER_HPP
