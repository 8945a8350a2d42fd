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

#include "floodlens/tokenizer.hpp"

#include <cctype>
#include <fstream>

#include "floodlens/errors.hpp"
#include "floodlens/io.hpp"
#include "floodlens/strings.hpp"

namespace floodlens {

namespace {
constexpr std::size_t kMaxWordChars = 100;  // longer words go straight to [UNK]
}

std::vector<std::string> basic_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (char c : text) {
    const unsigned char uc = static_cast<unsigned char>(c);
    if (std::isspace(uc) || std::iscntrl(uc)) {
      flush();
    } else if (uc < 128 && std::ispunct(uc)) {
      flush();
      tokens.push_back(std::string(1, c));
    } else {
      current += static_cast<char>(std::tolower(uc));
    }
  }
  flush();
  return tokens;
}

WordPieceTokenizer WordPieceTokenizer::from_vocab(std::vector<std::string> vocab) {
  WordPieceTokenizer t;
  t.vocab_ = std::move(vocab);
  for (std::size_t i = 0; i < t.vocab_.size(); ++i) {
    t.index_.emplace(t.vocab_[i], static_cast<int>(i));
    t.max_piece_len_ = std::max(t.max_piece_len_, t.vocab_[i].size());
  }
  auto special = [&](const char* name) {
    auto it = t.index_.find(name);
    if (it == t.index_.end()) {
      throw ConfigError(std::string("vocabulary lacks required special token ") + name);
    }
    return it->second;
  };
  t.pad_id_ = special("[PAD]");
  t.unk_id_ = special("[UNK]");
  t.cls_id_ = special("[CLS]");
  t.sep_id_ = special("[SEP]");
  return t;
}

WordPieceTokenizer WordPieceTokenizer::from_vocab_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary: " + path.string());
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    vocab.push_back(line);
  }
  return from_vocab(std::move(vocab));
}

void WordPieceTokenizer::save_vocab(const std::filesystem::path& path) const {
  std::string out;
  for (const std::string& tok : vocab_) {
    out += tok;
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<int> WordPieceTokenizer::wordpiece(std::string_view word) const {
  if (word.empty() || word.size() > kMaxWordChars) return {unk_id_};
  std::vector<int> pieces;
  std::size_t start = 0;
  while (start < word.size()) {
    const std::size_t max_end = std::min(word.size(), start + max_piece_len_);
    std::size_t end = max_end;
    int match = -1;
    while (end > start) {
      std::string candidate = start == 0 ? std::string(word.substr(start, end - start))
                                         : "##" + std::string(word.substr(start, end - start));
      auto it = index_.find(candidate);
      if (it != index_.end()) {
        match = it->second;
        break;
      }
      --end;
    }
    if (match < 0) return {unk_id_};
    pieces.push_back(match);
    start = end;
  }
  return pieces;
}

std::vector<int> WordPieceTokenizer::encode(std::string_view text, int max_len) const {
  if (max_len < 2) throw ConfigError("max sequence length must be at least 2");
  std::vector<int> ids{cls_id_};
  const std::size_t budget = static_cast<std::size_t>(max_len) - 2;
  for (const std::string& word : basic_tokenize(text)) {
    for (int piece : wordpiece(word)) {
      if (ids.size() - 1 >= budget) break;
      ids.push_back(piece);
    }
    if (ids.size() - 1 >= budget) break;
  }
  ids.push_back(sep_id_);
  return ids;
}

}  // namespace floodlens
