#include "spotgeom/roi.hpp"

namespace spotgeom {

PolygonMask render_polygon_mask(const Polygon& p, const AxisAlignedBox& box, int out_size) {
  if (out_size < 1) throw std::invalid_argument("mask size must be positive");
  PolygonMask mask{BinaryMap::Zero(out_size, out_size), box};
  for (int r = 0; r < out_size; ++r) {
    for (int c = 0; c < out_size; ++c) {
      mask.values(r, c) = point_in_polygon(p, bin_center(box, out_size, r, c)) ? 1 : 0;
    }
  }
  return mask;
}

}  // namespace spotgeom
