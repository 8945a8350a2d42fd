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

#ifndef FLOODLENS_IO_HPP
#define FLOODLENS_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace floodlens {

std::string read_file(const std::filesystem::path& path);

/// Writes to `<path>.tmp` then renames over `path` so that a crash never
/// leaves a half-written artifact behind. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

void ensure_dir(const std::filesystem::path& dir);

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string iso8601_utc_now();

}  // namespace floodlens

#endif  // FLOODLENS_IO_HPP
