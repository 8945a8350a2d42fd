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

#ifndef FLOODLENS_PNGPLOT_HPP
#define FLOODLENS_PNGPLOT_HPP

#include <filesystem>
#include <utility>
#include <vector>

namespace floodlens {

/// Renders an ROC staircase (FPR, TPR in [0,1]) with axes and the chance
/// diagonal into an 8-bit RGB PNG.
void write_roc_png(const std::filesystem::path& path,
                   const std::vector<std::pair<double, double>>& points, int size = 512);

}  // namespace floodlens

#endif  // FLOODLENS_PNGPLOT_HPP
