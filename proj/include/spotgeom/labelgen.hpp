#pragma once

#include "spotgeom/geometry.hpp"
#include "spotgeom/grid.hpp"

#include <string>
#include <vector>

namespace spotgeom {

/// Default shrink ratio for segmentation targets.
inline constexpr double kDefaultShrinkRatio = 0.4;

struct TextInstance {
  Polygon polygon;
  std::string transcription;
  bool ignore = false;
};

struct AnnotationSet {
  int image_width = 0;
  int image_height = 0;
  std::vector<TextInstance> instances;
};

/// Throws std::invalid_argument naming the offending instance when a
/// non-ignored instance has an empty transcription or a polygon reaches more
/// than one pixel outside the canvas.
void validate(const AnnotationSet& ann);

/// Inward clipping distance A (1 - r^2) / L.
double shrink_offset(double area, double perimeter, double ratio);

/// Union of the shrunk, rasterized polygons of all non-ignored instances.
BinaryMap make_seg_label(const AnnotationSet& ann, double ratio = kDefaultShrinkRatio);

/// Shrunk pieces for one polygon; empty when the shrink vanishes.
std::vector<Polygon> shrink_polygon(const Polygon& p, double ratio = kDefaultShrinkRatio);

}  // namespace spotgeom
