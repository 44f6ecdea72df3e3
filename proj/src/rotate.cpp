#include "spotgeom/rotate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spotgeom {

CanvasSize rotated_canvas_size(int width, int height, double angle_deg) {
  const Eigen::Matrix2d r = rotation_matrix(angle_deg);
  const double c = std::abs(r(0, 0));
  const double s = std::abs(r(1, 0));
  // Absorb rounding so that exact extents do not spill into an extra pixel.
  auto snap_ceil = [](double v) { return static_cast<int>(std::ceil(v - 1e-9 * (1.0 + v))); };
  return {snap_ceil(width * c + height * s), snap_ceil(width * s + height * c)};
}

RotatedItem rotate_item(const Image& image, const AnnotationSet& ann, double angle_deg) {
  if (!(angle_deg >= -180.0 && angle_deg <= 180.0)) throw std::invalid_argument("angle must lie in [-180, 180]");
  if (ann.image_width != image.width || ann.image_height != image.height) {
    throw std::invalid_argument("annotation canvas does not match image size");
  }
  if (angle_deg == 0.0) return {image, ann};

  const CanvasSize canvas = rotated_canvas_size(image.width, image.height, angle_deg);
  const Eigen::Matrix2d r = rotation_matrix(angle_deg);
  const Point src_center(image.width / 2.0, image.height / 2.0);
  const Point dst_center(canvas.width / 2.0, canvas.height / 2.0);

  RotatedItem out{Image(canvas.width, canvas.height, image.channels), {}};
  out.annotations.image_width = canvas.width;
  out.annotations.image_height = canvas.height;

  // Inverse mapping: each output pixel center pulls from the source.
  const Eigen::Matrix2d inv = r.transpose();
  auto tap = [&](long row, long col, int ch) -> double {
    if (row < 0 || col < 0 || row >= image.height || col >= image.width) return 0.0;
    return image.at(static_cast<int>(row), static_cast<int>(col), ch);
  };
  for (int i = 0; i < canvas.height; ++i) {
    for (int j = 0; j < canvas.width; ++j) {
      const Point src = src_center + inv * (Point(j + 0.5, i + 0.5) - dst_center);
      const double u = src.x() - 0.5;
      const double v = src.y() - 0.5;
      const double j0 = std::floor(u);
      const double i0 = std::floor(v);
      const double fu = u - j0;
      const double fv = v - i0;
      const long r0 = static_cast<long>(i0);
      const long c0 = static_cast<long>(j0);
      for (int ch = 0; ch < image.channels; ++ch) {
        const double top = (1.0 - fu) * tap(r0, c0, ch) + fu * tap(r0, c0 + 1, ch);
        const double bottom = (1.0 - fu) * tap(r0 + 1, c0, ch) + fu * tap(r0 + 1, c0 + 1, ch);
        const double value = (1.0 - fv) * top + fv * bottom;
        out.image.at(i, j, ch) = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
      }
    }
  }

  for (const TextInstance& inst : ann.instances) {
    std::vector<Point> moved;
    moved.reserve(inst.polygon.size());
    for (const Point& v : inst.polygon) moved.push_back(dst_center + r * (v - src_center));
    out.annotations.instances.push_back({Polygon(std::move(moved)), inst.transcription, inst.ignore});
  }
  return out;
}

}  // namespace spotgeom
