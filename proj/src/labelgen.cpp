#include "spotgeom/labelgen.hpp"

#include "spotgeom/raster.hpp"

#include <stdexcept>
#include <string>

namespace spotgeom {

void validate(const AnnotationSet& ann) {
  if (ann.image_width < 1 || ann.image_height < 1) {
    throw std::invalid_argument("annotation canvas must have positive width and height");
  }
  constexpr double kTolerance = 1.0;
  for (std::size_t k = 0; k < ann.instances.size(); ++k) {
    const TextInstance& inst = ann.instances[k];
    if (inst.transcription.empty() && !inst.ignore) {
      throw std::invalid_argument("empty transcription at instance " + std::to_string(k));
    }
    const AxisAlignedBox box = min_aabb(inst.polygon);
    if (box.x_min < -kTolerance || box.y_min < -kTolerance ||
        box.x_max > ann.image_width + kTolerance || box.y_max > ann.image_height + kTolerance) {
      throw std::invalid_argument("polygon outside canvas at instance " + std::to_string(k));
    }
  }
}

double shrink_offset(double area, double perimeter, double ratio) {
  if (!(area > 0.0) || !(perimeter > 0.0)) {
    throw std::invalid_argument("shrink_offset needs positive area and perimeter");
  }
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw std::invalid_argument("shrink ratio must be in [0, 1]");
  return area * (1.0 - ratio * ratio) / perimeter;
}

std::vector<Polygon> shrink_polygon(const Polygon& p, double ratio) {
  const double d = shrink_offset(area(p), perimeter(p), ratio);
  return offset(p, -d);
}

BinaryMap make_seg_label(const AnnotationSet& ann, double ratio) {
  if (ann.image_width < 1 || ann.image_height < 1) {
    throw std::invalid_argument("annotation canvas must have positive width and height");
  }
  BinaryMap label = BinaryMap::Zero(ann.image_height, ann.image_width);
  for (const TextInstance& inst : ann.instances) {
    if (inst.ignore) continue;
    for (const Polygon& piece : shrink_polygon(inst.polygon, ratio)) rasterize_into(label, piece);
  }
  return label;
}

}  // namespace spotgeom
