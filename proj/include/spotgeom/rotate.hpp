#pragma once

#include "spotgeom/image.hpp"
#include "spotgeom/labelgen.hpp"

#include <array>

namespace spotgeom {

/// Rotation angles of the rotated benchmark.
inline constexpr std::array<double, 6> kBenchmarkAngles{15.0, 30.0, 45.0, 60.0, 75.0, 90.0};

struct CanvasSize {
  int width = 0;
  int height = 0;

  bool operator==(const CanvasSize&) const = default;
};

/// Smallest canvas holding a W x H image rotated by angle_deg:
/// W' = ceil(W|cos| + H|sin|), H' = ceil(W|sin| + H|cos|).
CanvasSize rotated_canvas_size(int width, int height, double angle_deg);

struct RotatedItem {
  Image image;
  AnnotationSet annotations;
};

/// Rotates image and annotations counter-clockwise (x/y frame) about the
/// image center into an expanded canvas. Bilinear resampling, black fill.
RotatedItem rotate_item(const Image& image, const AnnotationSet& ann, double angle_deg);

}  // namespace spotgeom
