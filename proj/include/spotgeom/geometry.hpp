#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spotgeom {

/// Continuous image coordinate: x grows along columns, y along rows.
/// Pixel (row i, col j) covers [j, j+1) x [i, i+1); its center is (j+0.5, i+0.5).
using Point = Eigen::Vector2d;

class InvalidPolygon : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Simple polygon with positive signed (shoelace) area.
///
/// Construction drops repeated consecutive vertices (including an explicit
/// closing vertex), rejects fewer than three vertices, non-finite
/// coordinates, zero area and self-intersections, then reverses the vertex
/// order if needed so that the signed area is positive.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }

  auto begin() const { return vertices_.begin(); }
  auto end() const { return vertices_.end(); }

  bool operator==(const Polygon&) const = default;

 private:
  std::vector<Point> vertices_;
};

struct AxisAlignedBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  bool operator==(const AxisAlignedBox&) const = default;
};

/// Twice the signed shoelace area of an open vertex cycle.
double signed_area2(const std::vector<Point>& ring);

/// True when no two edges of the closed ring touch except adjacent edges at
/// their shared vertex.
bool is_simple_ring(const std::vector<Point>& ring);

double area(const Polygon& p);
double perimeter(const Polygon& p);

/// Boundary-inclusive even-odd containment.
bool point_in_polygon(const Polygon& p, const Point& q);

AxisAlignedBox min_aabb(const Polygon& p);

/// Rigid counter-clockwise rotation (in the x/y frame) of every vertex.
/// Multiples of 90 degrees use exact sine/cosine values.
Polygon rotate_polygon(const Polygon& p, double angle_deg, const Point& center);

/// Rotation matrix with exact entries at multiples of 90 degrees.
Eigen::Matrix2d rotation_matrix(double angle_deg);

struct OffsetOptions {
  /// Maximum distance between a round join and its polyline approximation.
  double arc_tolerance = 0.25;
};

/// Signed polygon offset with round joins. Negative delta shrinks and may
/// return zero or several pieces; positive delta dilates and returns a single
/// outer boundary; zero returns the input unchanged.
std::vector<Polygon> offset(const Polygon& p, double delta,
                            const OffsetOptions& options = {});

/// Area of the intersection of two polygons, by exact clipping.
double intersection_area(const Polygon& a, const Polygon& b);

double polygon_iou(const Polygon& a, const Polygon& b);

}  // namespace spotgeom
