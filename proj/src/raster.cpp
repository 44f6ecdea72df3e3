#include "spotgeom/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace spotgeom {

namespace {

struct Span {
  double lo, hi;
};

class DisjointSets {
 public:
  int make_set() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

void rasterize_into(BinaryMap& map, const Polygon& p) {
  const int height = static_cast<int>(map.rows());
  const int width = static_cast<int>(map.cols());
  const AxisAlignedBox box = min_aabb(p);
  const int row_lo = std::max(0, static_cast<int>(std::floor(box.y_min - 0.5)));
  const int row_hi = std::min(height - 1, static_cast<int>(std::ceil(box.y_max)));
  const std::size_t n = p.size();

  std::vector<double> xs;
  std::vector<Span> boundary;
  for (int i = row_lo; i <= row_hi; ++i) {
    const double y = i + 0.5;
    xs.clear();
    boundary.clear();
    for (std::size_t k = 0, m = n - 1; k < n; m = k++) {
      const Point& a = p[m];
      const Point& b = p[k];
      if ((a.y() > y) != (b.y() > y)) {
        const double x = (b.x() - a.x()) * (y - a.y()) / (b.y() - a.y()) + a.x();
        xs.push_back(x);
        const double tol = 1e-9 * (1.0 + std::abs(x));
        boundary.push_back({x - tol, x + tol});
      }
      if (std::min(a.y(), b.y()) <= y && y <= std::max(a.y(), b.y()) &&
          (a.y() == y || b.y() == y)) {
        // Vertices or horizontal edges lying on the scanline.
        const double lo = a.y() == y ? a.x() : b.x();
        const double hi = (a.y() == y && b.y() == y) ? b.x() : lo;
        const double tol = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
        boundary.push_back({std::min(lo, hi) - tol, std::max(lo, hi) + tol});
      }
    }
    std::sort(xs.begin(), xs.end());

    auto col_range = [width](double lo, double hi, bool hi_inclusive) {
      int first = static_cast<int>(std::ceil(lo - 0.5));
      int last = hi_inclusive ? static_cast<int>(std::floor(hi - 0.5))
                              : static_cast<int>(std::ceil(hi - 0.5)) - 1;
      return std::pair{std::max(first, 0), std::min(last, width - 1)};
    };

    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const auto [first, last] = col_range(xs[k], xs[k + 1], false);
      for (int j = first; j <= last; ++j) map(i, j) = 1;
    }
    // Centers within rounding distance of the boundary follow the exact
    // containment predicate.
    for (const Span& s : boundary) {
      const auto [first, last] = col_range(s.lo, s.hi, true);
      for (int j = first; j <= last; ++j) {
        if (point_in_polygon(p, Point(j + 0.5, y))) map(i, j) = 1;
      }
    }
  }
}

BinaryMap rasterize_polygon(const Polygon& p, int height, int width) {
  if (height < 1 || width < 1) throw std::invalid_argument("canvas dimensions must be positive");
  BinaryMap map = BinaryMap::Zero(height, width);
  rasterize_into(map, p);
  return map;
}

LabelMap connected_components(const BinaryMap& b) {
  const int height = static_cast<int>(b.rows());
  const int width = static_cast<int>(b.cols());
  LabelMap provisional = LabelMap::Constant(height, width, -1);
  DisjointSets sets;

  // First pass: provisional labels from the already visited 8-neighbors
  // (west, north-west, north, north-east).
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      if (!b(i, j)) continue;
      int label = -1;
      auto visit = [&](int r, int c) {
        if (r < 0 || c < 0 || c >= width) return;
        const int other = provisional(r, c);
        if (other < 0) return;
        if (label < 0) {
          label = other;
        } else {
          sets.join(label, other);
        }
      };
      visit(i, j - 1);
      visit(i - 1, j - 1);
      visit(i - 1, j);
      visit(i - 1, j + 1);
      provisional(i, j) = label < 0 ? sets.make_set() : label;
    }
  }

  // Second pass: dense ids in raster-scan discovery order.
  LabelMap labels = LabelMap::Zero(height, width);
  std::vector<int> dense;
  int next = 0;
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const int prov = provisional(i, j);
      if (prov < 0) continue;
      const int root = sets.find(prov);
      if (static_cast<int>(dense.size()) <= root) dense.resize(root + 1, 0);
      if (dense[root] == 0) dense[root] = ++next;
      labels(i, j) = dense[root];
    }
  }
  return labels;
}

int component_count(const LabelMap& labels) {
  return labels.size() == 0 ? 0 : std::max(0, labels.maxCoeff());
}

std::vector<ComponentStats> component_stats(const LabelMap& labels) {
  std::vector<ComponentStats> stats(component_count(labels));
  for (int i = 0; i < labels.rows(); ++i) {
    for (int j = 0; j < labels.cols(); ++j) {
      const int l = labels(i, j);
      if (l <= 0) continue;
      ComponentStats& s = stats[l - 1];
      if (s.pixel_count == 0) {
        s.extent = {i, j, i, j};
      } else {
        s.extent.row_min = std::min(s.extent.row_min, i);
        s.extent.col_min = std::min(s.extent.col_min, j);
        s.extent.row_max = std::max(s.extent.row_max, i);
        s.extent.col_max = std::max(s.extent.col_max, j);
      }
      ++s.pixel_count;
    }
  }
  return stats;
}

Polygon trace_contour(const LabelMap& labels, int label) {
  if (label <= 0) throw std::invalid_argument("unknown label " + std::to_string(label));
  PixelExtent extent;
  bool found = false;
  for (int i = 0; i < labels.rows(); ++i) {
    for (int j = 0; j < labels.cols(); ++j) {
      if (labels(i, j) != label) continue;
      if (!found) {
        extent = {i, j, i, j};
        found = true;
      } else {
        extent.row_min = std::min(extent.row_min, i);
        extent.col_min = std::min(extent.col_min, j);
        extent.row_max = std::max(extent.row_max, i);
        extent.col_max = std::max(extent.col_max, j);
      }
    }
  }
  if (!found) throw std::invalid_argument("unknown label " + std::to_string(label));
  return trace_contour(labels, label, extent);
}

Polygon trace_contour(const LabelMap& labels, int label, const PixelExtent& extent) {
  auto inside = [&](int row, int col) {
    return row >= extent.row_min && row <= extent.row_max && col >= extent.col_min &&
           col <= extent.col_max && labels(row, col) == label;
  };

  // The first pixel in raster order has its top edge on the outer boundary.
  int start_row = -1;
  int start_col = -1;
  for (int j = extent.col_min; j <= extent.col_max && start_row < 0; ++j) {
    if (inside(extent.row_min, j)) {
      start_row = extent.row_min;
      start_col = j;
    }
  }
  if (start_row < 0) throw std::invalid_argument("unknown label " + std::to_string(label));

  // Walk pixel cracks with the component on the left (positive orientation in
  // the x/y frame). Vertices are integer lattice points (x = col, y = row).
  using Vec = Eigen::Vector2i;
  auto pixel_at = [&](const Vec& v, const Vec& twice_offset) {
    // Pixel whose center is v + twice_offset / 2, with offset entries +-1.
    const int col = v.x() + (twice_offset.x() > 0 ? 0 : -1);
    const int row = v.y() + (twice_offset.y() > 0 ? 0 : -1);
    return inside(row, col);
  };

  constexpr double kBevel = 0.25;
  const Vec start_v(start_col + 1, start_row);
  const Vec start_d(1, 0);
  Vec v = start_v;
  Vec d = start_d;
  std::vector<Point> ring;
  do {
    const Vec left(-d.y(), d.x());
    const bool ahead_left = pixel_at(v, d + left);
    const bool ahead_right = pixel_at(v, d - left);
    Vec next = d;
    bool pinch = false;
    if (ahead_right) {
      next = -left;
      pinch = !ahead_left;
    } else if (!ahead_left) {
      next = left;
    }
    if (next != d) {
      const Point corner = v.cast<double>();
      if (pinch) {
        ring.push_back(corner - kBevel * d.cast<double>());
        ring.push_back(corner + kBevel * next.cast<double>());
      } else {
        ring.push_back(corner);
      }
    }
    d = next;
    v += d;
  } while (v != start_v || d != start_d);

  auto first = std::min_element(ring.begin(), ring.end(), [](const Point& a, const Point& b) {
    return a.y() < b.y() || (a.y() == b.y() && a.x() < b.x());
  });
  std::rotate(ring.begin(), first, ring.end());
  return Polygon(std::move(ring));
}

namespace {

void douglas_peucker(const std::vector<Point>& pts, std::size_t first, std::size_t last,
                     double epsilon, std::vector<bool>& keep) {
  if (last <= first + 1) return;
  const Point& a = pts[first];
  const Point& b = pts[last];
  const Point ab = b - a;
  const double len = ab.norm();
  double worst = -1.0;
  std::size_t worst_i = first;
  for (std::size_t i = first + 1; i < last; ++i) {
    const Point ap = pts[i] - a;
    const double dist =
        len > 0.0 ? std::abs(ab.x() * ap.y() - ab.y() * ap.x()) / len : ap.norm();
    if (dist > worst) {
      worst = dist;
      worst_i = i;
    }
  }
  if (worst > epsilon) {
    keep[worst_i] = true;
    douglas_peucker(pts, first, worst_i, epsilon, keep);
    douglas_peucker(pts, worst_i, last, epsilon, keep);
  }
}

}  // namespace

Polygon simplify_polygon(const Polygon& p, double epsilon) {
  if (epsilon <= 0.0 || p.size() <= 3) return p;
  const std::size_t n = p.size();

  // Split the ring at vertex 0 and the vertex farthest from it.
  std::size_t far = 0;
  double far_dist = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double dist = (p[i] - p[0]).squaredNorm();
    if (dist > far_dist) {
      far_dist = dist;
      far = i;
    }
  }
  std::vector<Point> closed(p.begin(), p.end());
  closed.push_back(p[0]);
  std::vector<bool> keep(n + 1, false);
  keep[0] = keep[far] = keep[n] = true;
  douglas_peucker(closed, 0, far, epsilon, keep);
  douglas_peucker(closed, far, n, epsilon, keep);

  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(p[i]);
  }
  try {
    return Polygon(std::move(out));
  } catch (const InvalidPolygon&) {
    return p;
  }
}

}  // namespace spotgeom
