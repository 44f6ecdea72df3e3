#pragma once

#include "spotgeom/geometry.hpp"
#include "spotgeom/grid.hpp"
#include "spotgeom/raster.hpp"

#include <stdexcept>
#include <vector>

namespace spotgeom {

inline constexpr double kDefaultBinarizeThreshold = 0.5;
inline constexpr double kDefaultUnclipRatio = 3.0;
inline constexpr double kDefaultMinArea = 9.0;

/// B(i, j) = 1 iff S(i, j) >= t.
template <typename Derived>
BinaryMap binarize(const Eigen::ArrayBase<Derived>& s, double threshold = kDefaultBinarizeThreshold) {
  using Scalar = typename Derived::Scalar;
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold out of range");
  return (s >= static_cast<Scalar>(threshold)).template cast<std::uint8_t>();
}

/// Outward clipping distance A * r / L.
double unclip_offset(double area, double perimeter, double ratio = kDefaultUnclipRatio);

struct Proposal {
  Polygon polygon;         // un-clipped region
  Polygon shrunk_region;   // traced component contour
  AxisAlignedBox box;      // min_aabb(polygon)
  double score = 0.0;      // mean probability over the component
};

struct ProposalOptions {
  double threshold = kDefaultBinarizeThreshold;
  double unclip_ratio = kDefaultUnclipRatio;
  /// Components with fewer pixels are dropped.
  double min_area = kDefaultMinArea;
  /// Douglas-Peucker tolerance for traced contours; 0 keeps every corner.
  double simplify_epsilon = 0.0;
};

/// Proposal built from one traced component. Exposed for callers that
/// already have a labeling.
Proposal make_proposal(const Polygon& contour, double score, double unclip_ratio);

namespace detail {
std::vector<Proposal> proposals_from_labels(const LabelMap& labels,
                                            const std::vector<double>& score_sums,
                                            const ProposalOptions& options);
}

/// Probability map -> binary map -> 8-connected components -> contours ->
/// un-clipped polygons, in component discovery order.
template <typename Derived>
std::vector<Proposal> extract_proposals(const Eigen::ArrayBase<Derived>& s,
                                        const ProposalOptions& options = {}) {
  if (s.rows() < 1 || s.cols() < 1) throw std::invalid_argument("probability map must be non-empty");
  if (!is_probability(s)) throw std::invalid_argument("probability map values must lie in [0, 1]");
  if (!(options.unclip_ratio > 0.0)) throw std::invalid_argument("unclip ratio must be positive");
  const LabelMap labels = connected_components(binarize(s, options.threshold));
  std::vector<double> sums(component_count(labels), 0.0);
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    for (Eigen::Index j = 0; j < labels.cols(); ++j) {
      if (const int l = labels(i, j); l > 0) sums[l - 1] += static_cast<double>(s(i, j));
    }
  }
  return detail::proposals_from_labels(labels, sums, options);
}

struct TensorShape {
  int channels = 0;
  int height = 0;
  int width = 0;

  bool operator==(const TensorShape&) const = default;
};

/// Output shape of the segmentation prediction head applied to a fused
/// 256-channel map of size fused_h x fused_w:
/// Conv(k3 s1 p1) 256->64, BN, ReLU, DeConv(k2 s2 p0) 64->64, BN, ReLU,
/// DeConv(k2 s2 p0) 64->1, Sigmoid.
TensorShape predict_head_shape(int fused_h, int fused_w);

}  // namespace spotgeom
