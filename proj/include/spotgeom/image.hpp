#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spotgeom {

/// 8-bit interleaved raster, H x W x C, row-major.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, int c) : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, 0) {
    if (w < 1 || h < 1 || c < 1 || c > 4) throw std::invalid_argument("invalid image dimensions");
  }

  std::uint8_t& at(int row, int col, int ch) {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  std::uint8_t at(int row, int col, int ch) const {
    return data[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }

  bool operator==(const Image&) const = default;
};

}  // namespace spotgeom
