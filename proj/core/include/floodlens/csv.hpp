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

#ifndef FLOODLENS_CSV_HPP
#define FLOODLENS_CSV_HPP

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace floodlens {

/// RFC 4180 style reader: quoted fields may contain commas, doubled quotes
/// and embedded newlines. Rows are returned raw; interpretation is the
/// caller's job.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input. Skips a trailing empty line.
  std::optional<std::vector<std::string>> next_row();

  /// Line number (1-based) on which the last returned record started.
  std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace floodlens

#endif  // FLOODLENS_CSV_HPP
