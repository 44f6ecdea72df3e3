// Overlay without integer rescaling keeps clipped areas at double precision.
#define BOOST_GEOMETRY_NO_ROBUSTNESS
#include "spotgeom/geometry.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spotgeom {

namespace bg = boost::geometry;

namespace {

using BgPoint = bg::model::d2::point_xy<double>;
// Counter-clockwise (positive shoelace area), closed rings.
using BgPolygon = bg::model::polygon<BgPoint, false, true>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

// c is collinear with segment ab; check it lies within ab's extent.
bool within_extent(const Point& a, const Point& b, const Point& c) {
  return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
}

bool segments_touch(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_extent(p1, p2, q1)) return true;
  if (o2 == 0 && within_extent(p1, p2, q2)) return true;
  if (o3 == 0 && within_extent(q1, q2, p1)) return true;
  if (o4 == 0 && within_extent(q1, q2, p2)) return true;
  return false;
}

BgPolygon to_boost(const Polygon& p) {
  BgPolygon out;
  auto& ring = out.outer();
  ring.reserve(p.size() + 1);
  for (const Point& v : p) ring.emplace_back(v.x(), v.y());
  ring.emplace_back(p[0].x(), p[0].y());
  return out;
}

std::vector<Point> from_boost_ring(const BgPolygon::ring_type& ring) {
  std::vector<Point> pts;
  pts.reserve(ring.size());
  for (const BgPoint& q : ring) pts.emplace_back(q.x(), q.y());
  return pts;
}

}  // namespace

double signed_area2(const std::vector<Point>& ring) {
  const std::size_t n = ring.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += cross(ring[i], ring[(i + 1) % n]);
  return acc;
}

bool is_simple_ring(const std::vector<Point>& ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;

  // Adjacent edges may only share their common vertex.
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    const Point& c = ring[(i + 2) % n];
    if (cross(b - a, c - b) == 0.0 && (b - a).dot(c - b) < 0.0) return false;
  }
  if (n == 3) return true;

  struct Edge {
    double x_lo, x_hi;
    std::size_t index;
  };
  std::vector<Edge> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    edges[i] = {std::min(a.x(), b.x()), std::max(a.x(), b.x()), i};
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& l, const Edge& r) { return l.x_lo < r.x_lo; });

  std::vector<Edge> active;
  for (const Edge& e : edges) {
    std::erase_if(active, [&](const Edge& a) { return a.x_hi < e.x_lo; });
    const std::size_t i = e.index;
    for (const Edge& a : active) {
      const std::size_t j = a.index;
      const bool adjacent = (i + 1) % n == j || (j + 1) % n == i;
      if (adjacent) continue;
      if (segments_touch(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) return false;
    }
    active.push_back(e);
  }
  return true;
}

Polygon::Polygon(std::vector<Point> vertices) {
  for (const Point& v : vertices) {
    if (!v.allFinite()) throw InvalidPolygon("polygon has a non-finite vertex");
  }
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  while (vertices.size() > 1 && vertices.front() == vertices.back()) vertices.pop_back();
  if (vertices.size() < 3) throw InvalidPolygon("polygon needs at least 3 distinct vertices");

  const double a2 = signed_area2(vertices);
  if (a2 == 0.0) throw InvalidPolygon("polygon has zero area");
  if (!is_simple_ring(vertices)) throw InvalidPolygon("polygon is self-intersecting");
  if (a2 < 0.0) std::reverse(vertices.begin(), vertices.end());
  vertices_ = std::move(vertices);
}

double area(const Polygon& p) { return 0.5 * signed_area2(p.vertices()); }

double perimeter(const Polygon& p) {
  double total = 0.0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) total += (p[(i + 1) % n] - p[i]).norm();
  return total;
}

bool point_in_polygon(const Polygon& p, const Point& q) {
  const std::size_t n = p.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = p[j];
    const Point& b = p[i];
    if (cross(b - a, q - a) == 0.0 && within_extent(a, b, q)) return true;
    if ((a.y() > q.y()) != (b.y() > q.y())) {
      const double x = (b.x() - a.x()) * (q.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (q.x() < x) inside = !inside;
    }
  }
  return inside;
}

AxisAlignedBox min_aabb(const Polygon& p) {
  Point lo = p[0];
  Point hi = p[0];
  for (const Point& v : p) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo.x(), lo.y(), hi.x(), hi.y()};
}

Eigen::Matrix2d rotation_matrix(double angle_deg) {
  double c = 0.0;
  double s = 0.0;
  const double quarter = angle_deg / 90.0;
  if (quarter == std::round(quarter)) {
    static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
    static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
    const long k = ((static_cast<long>(quarter) % 4) + 4) % 4;
    c = kCos[k];
    s = kSin[k];
  } else {
    const double rad = angle_deg * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
  }
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Polygon rotate_polygon(const Polygon& p, double angle_deg, const Point& center) {
  if (std::fmod(angle_deg, 360.0) == 0.0) return p;
  const Eigen::Matrix2d r = rotation_matrix(angle_deg);
  std::vector<Point> out;
  out.reserve(p.size());
  for (const Point& v : p) out.push_back(center + r * (v - center));
  return Polygon(std::move(out));
}

std::vector<Polygon> offset(const Polygon& p, double delta, const OffsetOptions& options) {
  if (delta == 0.0) return {p};

  // Chord sagitta r(1 - cos(theta/2)) must stay within the arc tolerance.
  const double radius = std::abs(delta);
  const double tol = std::min(options.arc_tolerance, radius);
  const double step = 2.0 * std::acos(1.0 - tol / radius);
  const int points_per_circle =
      std::clamp(static_cast<int>(std::ceil(2.0 * std::numbers::pi / step)), 8, 4096);

  namespace sb = bg::strategy::buffer;
  const sb::distance_symmetric<double> distance(delta);
  const sb::side_straight side;
  const sb::join_round join(points_per_circle);
  const sb::end_round end(points_per_circle);
  const sb::point_circle circle(points_per_circle);

  BgMultiPolygon result;
  bg::buffer(to_boost(p), result, distance, side, join, end, circle);

  std::vector<Polygon> pieces;
  for (const BgPolygon& piece : result) {
    std::vector<Point> ring = from_boost_ring(piece.outer());
    if (ring.size() < 4) continue;
    try {
      pieces.emplace_back(std::move(ring));
    } catch (const InvalidPolygon&) {
      // Degenerate slivers from the clipper carry no area; drop them.
    }
  }
  if (delta > 0.0 && pieces.size() > 1) {
    auto largest = std::max_element(pieces.begin(), pieces.end(),
                                    [](const Polygon& a, const Polygon& b) { return area(a) < area(b); });
    Polygon keep = *largest;
    pieces.clear();
    pieces.push_back(std::move(keep));
  }
  return pieces;
}

double intersection_area(const Polygon& a, const Polygon& b) {
  const AxisAlignedBox ba = min_aabb(a);
  const AxisAlignedBox bb = min_aabb(b);
  if (ba.x_max < bb.x_min || bb.x_max < ba.x_min || ba.y_max < bb.y_min || bb.y_max < ba.y_min) {
    return 0.0;
  }
  BgMultiPolygon inter;
  bg::intersection(to_boost(a), to_boost(b), inter);
  return bg::area(inter);
}

double polygon_iou(const Polygon& a, const Polygon& b) {
  if (a == b) return 1.0;
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = area(a) + area(b) - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace spotgeom
