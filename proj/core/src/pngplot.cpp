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

#include "floodlens/pngplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include <zlib.h>

#include "floodlens/errors.hpp"
#include "floodlens/io.hpp"

namespace floodlens {

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kAxis{90, 90, 90};
constexpr Rgb kDiagonal{200, 200, 200};
constexpr Rgb kCurve{31, 90, 166};

class Canvas {
 public:
  explicit Canvas(int size) : size_(size), pixels_(static_cast<std::size_t>(size) * size, kWhite) {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= size_ || y >= size_) return;
    pixels_[static_cast<std::size_t>(y) * size_ + x] = c;
  }

  void line(int x0, int y0, int x1, int y1, Rgb c) {  // Bresenham
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  int size() const { return size_; }
  const std::vector<Rgb>& pixels() const { return pixels_; }

 private:
  int size_;
  std::vector<Rgb> pixels_;
};

void append_u32_be(std::string& out, std::uint32_t v) {
  out += static_cast<char>((v >> 24) & 0xFF);
  out += static_cast<char>((v >> 16) & 0xFF);
  out += static_cast<char>((v >> 8) & 0xFF);
  out += static_cast<char>(v & 0xFF);
}

void append_chunk(std::string& out, const char type[4], const std::string& data) {
  append_u32_be(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out.append(type, 4);
  out += data;
  const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data() + crc_start),
                         static_cast<uInt>(4 + data.size()));
  append_u32_be(out, static_cast<std::uint32_t>(crc));
}

std::string encode_png(const Canvas& canvas) {
  const int size = canvas.size();
  // raw scanlines with filter byte 0
  std::string raw;
  raw.reserve(static_cast<std::size_t>(size) * (static_cast<std::size_t>(size) * 3 + 1));
  for (int y = 0; y < size; ++y) {
    raw += '\0';
    for (int x = 0; x < size; ++x) {
      const Rgb& p = canvas.pixels()[static_cast<std::size_t>(y) * size + x];
      raw += static_cast<char>(p.r);
      raw += static_cast<char>(p.g);
      raw += static_cast<char>(p.b);
    }
  }
  uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
  std::string compressed(compressed_size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &compressed_size,
                reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                6) != Z_OK) {
    throw EnvironmentError("PNG compression failed");
  }
  compressed.resize(compressed_size);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  append_u32_be(ihdr, static_cast<std::uint32_t>(size));
  append_u32_be(ihdr, static_cast<std::uint32_t>(size));
  ihdr += static_cast<char>(8);  // bit depth
  ihdr += static_cast<char>(2);  // truecolor
  ihdr += '\0';                  // compression
  ihdr += '\0';                  // filter
  ihdr += '\0';                  // no interlace
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT", compressed);
  append_chunk(out, "IEND", "");
  return out;
}

}  // namespace

void write_roc_png(const std::filesystem::path& path,
                   const std::vector<std::pair<double, double>>& points, int size) {
  if (size < 64) throw ConfigError("figure size too small");
  Canvas canvas(size);
  const int margin = size / 16;
  const int plot = size - 2 * margin;
  auto px = [&](double fpr) { return margin + static_cast<int>(std::lround(fpr * plot)); };
  auto py = [&](double tpr) { return size - margin - static_cast<int>(std::lround(tpr * plot)); };

  canvas.line(px(0), py(0), px(1), py(0), kAxis);
  canvas.line(px(0), py(0), px(0), py(1), kAxis);
  canvas.line(px(0), py(0), px(1), py(1), kDiagonal);
  for (std::size_t i = 1; i < points.size(); ++i) {
    canvas.line(px(points[i - 1].first), py(points[i - 1].second), px(points[i].first),
                py(points[i].second), kCurve);
    // thicken by one pixel for visibility
    canvas.line(px(points[i - 1].first), py(points[i - 1].second) + 1, px(points[i].first),
                py(points[i].second) + 1, kCurve);
  }
  write_file_atomic(path, encode_png(canvas));
}

}  // namespace floodlens
