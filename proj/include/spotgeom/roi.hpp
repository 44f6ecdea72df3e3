#pragma once

#include "spotgeom/geometry.hpp"
#include "spotgeom/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace spotgeom {

inline constexpr int kRoiSize = 32;

/// C x H x W feature volume, one row-major grid per channel.
template <typename Scalar>
struct FeatureGrid {
  std::vector<Grid<Scalar>> channels;

  FeatureGrid() = default;
  FeatureGrid(int c, int h, int w) : channels(c, Grid<Scalar>::Zero(h, w)) {
    if (c < 1 || h < 1 || w < 1) throw std::invalid_argument("feature grid dimensions must be positive");
  }

  int num_channels() const { return static_cast<int>(channels.size()); }
  int height() const { return channels.empty() ? 0 : static_cast<int>(channels.front().rows()); }
  int width() const { return channels.empty() ? 0 : static_cast<int>(channels.front().cols()); }
};

/// C x N x N sample grid cut from a feature volume.
template <typename Scalar>
struct RoiGrid {
  std::vector<Grid<Scalar>> channels;
  AxisAlignedBox source_box;

  int num_channels() const { return static_cast<int>(channels.size()); }
  int size() const { return channels.empty() ? 0 : static_cast<int>(channels.front().rows()); }
};

struct PolygonMask {
  BinaryMap values;
  AxisAlignedBox source_box;
};

struct RoiAlignOptions {
  int out_size = kRoiSize;
  /// Samples per bin along each axis; 1 samples the bin center only.
  int sampling_ratio = 1;
};

/// Bilinear sample at continuous point (x, y). Taps outside the grid read 0.
template <typename Scalar>
Scalar bilinear_sample(const Grid<Scalar>& g, double x, double y) {
  // Pixel centers sit at half-integer coordinates.
  const double u = x - 0.5;
  const double v = y - 0.5;
  const double j0 = std::floor(u);
  const double i0 = std::floor(v);
  const double fu = u - j0;
  const double fv = v - i0;
  auto tap = [&](double i, double j) -> double {
    if (i < 0 || j < 0 || i >= static_cast<double>(g.rows()) || j >= static_cast<double>(g.cols())) {
      return 0.0;
    }
    return static_cast<double>(g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  };
  const double top = (1.0 - fu) * tap(i0, j0) + fu * tap(i0, j0 + 1);
  const double bottom = (1.0 - fu) * tap(i0 + 1, j0) + fu * tap(i0 + 1, j0 + 1);
  return static_cast<Scalar>((1.0 - fv) * top + fv * bottom);
}

/// Center of bin (row, col) of an out_size x out_size division of box, in
/// image coordinates.
inline Point bin_center(const AxisAlignedBox& box, int out_size, int row, int col) {
  return {box.x_min + (col + 0.5) * box.width() / out_size,
          box.y_min + (row + 0.5) * box.height() / out_size};
}

template <typename Scalar>
RoiGrid<Scalar> roi_align(const FeatureGrid<Scalar>& f, const AxisAlignedBox& box,
                          const RoiAlignOptions& options = {}) {
  if (!(box.width() > 0.0) || !(box.height() > 0.0)) throw std::invalid_argument("degenerate RoI box");
  if (options.out_size < 1 || options.sampling_ratio < 1) throw std::invalid_argument("invalid RoI options");
  const int n = options.out_size;
  const int s = options.sampling_ratio;
  const double bin_w = box.width() / n;
  const double bin_h = box.height() / n;

  RoiGrid<Scalar> out;
  out.source_box = box;
  out.channels.reserve(f.channels.size());
  for (const Grid<Scalar>& channel : f.channels) {
    Grid<Scalar> cell(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (s == 1) {
          const Point p = bin_center(box, n, r, c);
          cell(r, c) = bilinear_sample(channel, p.x(), p.y());
          continue;
        }
        double acc = 0.0;
        for (int sy = 0; sy < s; ++sy) {
          for (int sx = 0; sx < s; ++sx) {
            const double x = box.x_min + c * bin_w + (sx + 0.5) * bin_w / s;
            const double y = box.y_min + r * bin_h + (sy + 0.5) * bin_h / s;
            acc += static_cast<double>(bilinear_sample(channel, x, y));
          }
        }
        cell(r, c) = static_cast<Scalar>(acc / (s * s));
      }
    }
    out.channels.push_back(std::move(cell));
  }
  return out;
}

/// Cell is 1 iff its bin center, in image coordinates, lies inside p.
PolygonMask render_polygon_mask(const Polygon& p, const AxisAlignedBox& box, int out_size = kRoiSize);

/// R = R0 * M: cells under M = 0 become +0, the rest are copied unchanged.
template <typename Scalar>
RoiGrid<Scalar> hard_roi_mask(const RoiGrid<Scalar>& r0, const PolygonMask& m) {
  if (!(r0.source_box == m.source_box)) throw std::invalid_argument("RoI and mask boxes differ");
  RoiGrid<Scalar> out;
  out.source_box = r0.source_box;
  out.channels.reserve(r0.channels.size());
  for (const Grid<Scalar>& channel : r0.channels) {
    if (channel.rows() != m.values.rows() || channel.cols() != m.values.cols()) {
      throw std::invalid_argument("RoI and mask sizes differ");
    }
    out.channels.push_back((m.values != 0).select(channel, Scalar(0)));
  }
  return out;
}

/// R = R0 * P for a probability grid P.
template <typename Scalar, typename Derived>
RoiGrid<Scalar> soft_roi_mask(const RoiGrid<Scalar>& r0, const Eigen::ArrayBase<Derived>& prob) {
  if (!is_probability(prob)) throw std::invalid_argument("soft mask values must lie in [0, 1]");
  RoiGrid<Scalar> out;
  out.source_box = r0.source_box;
  out.channels.reserve(r0.channels.size());
  for (const Grid<Scalar>& channel : r0.channels) {
    if (channel.rows() != prob.rows() || channel.cols() != prob.cols()) {
      throw std::invalid_argument("RoI and mask sizes differ");
    }
    out.channels.push_back(channel * prob.template cast<Scalar>());
  }
  return out;
}

}  // namespace spotgeom
