#pragma once

#include "spotgeom/geometry.hpp"
#include "spotgeom/grid.hpp"

#include <stdexcept>

namespace spotgeom {

/// Pixel (i, j) is set iff its center (j + 0.5, i + 0.5) satisfies
/// point_in_polygon. Pixels outside the canvas are dropped.
BinaryMap rasterize_polygon(const Polygon& p, int height, int width);

/// OR the rasterization of p into an existing map.
void rasterize_into(BinaryMap& map, const Polygon& p);

/// 8-connected labeling; ids follow raster-scan discovery order.
LabelMap connected_components(const BinaryMap& b);

int component_count(const LabelMap& labels);

/// Inclusive row/column extent of one label.
struct PixelExtent {
  int row_min = 0;
  int col_min = 0;
  int row_max = -1;
  int col_max = -1;
};

struct ComponentStats {
  PixelExtent extent;
  long pixel_count = 0;
};

/// Stats for labels 1..K, stored at index label - 1.
std::vector<ComponentStats> component_stats(const LabelMap& labels);

/// Outer boundary of one component along pixel edges. Pinch corners where the
/// component is joined only diagonally are bevelled by a quarter pixel so the
/// result stays simple while enclosing exactly the component's pixel centers
/// (plus any interior holes). Starts at the top-left corner.
Polygon trace_contour(const LabelMap& labels, int label);

/// Same as above with a precomputed extent, avoiding a full scan.
Polygon trace_contour(const LabelMap& labels, int label, const PixelExtent& extent);

/// Douglas-Peucker on the closed ring. Returns the input when the simplified
/// ring would be degenerate or self-intersecting.
Polygon simplify_polygon(const Polygon& p, double epsilon);

}  // namespace spotgeom
