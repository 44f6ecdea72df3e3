#include "spotgeom/proposal.hpp"

#include <algorithm>
#include <array>

namespace spotgeom {

double unclip_offset(double area, double perimeter, double ratio) {
  if (!(area > 0.0) || !(perimeter > 0.0) || !(ratio > 0.0)) {
    throw std::invalid_argument("unclip_offset needs positive area, perimeter and ratio");
  }
  return area * ratio / perimeter;
}

Proposal make_proposal(const Polygon& contour, double score, double unclip_ratio) {
  const double d = unclip_offset(area(contour), perimeter(contour), unclip_ratio);
  std::vector<Polygon> grown = offset(contour, d);
  Polygon polygon = grown.empty() ? contour : std::move(grown.front());
  const AxisAlignedBox box = min_aabb(polygon);
  return {std::move(polygon), contour, box, score};
}

namespace detail {

std::vector<Proposal> proposals_from_labels(const LabelMap& labels,
                                            const std::vector<double>& score_sums,
                                            const ProposalOptions& options) {
  const std::vector<ComponentStats> stats = component_stats(labels);
  std::vector<Proposal> out;
  for (std::size_t k = 0; k < stats.size(); ++k) {
    const ComponentStats& st = stats[k];
    if (static_cast<double>(st.pixel_count) < options.min_area) continue;
    Polygon contour = trace_contour(labels, static_cast<int>(k + 1), st.extent);
    if (options.simplify_epsilon > 0.0) contour = simplify_polygon(contour, options.simplify_epsilon);
    const double score = std::clamp(score_sums[k] / static_cast<double>(st.pixel_count), 0.0, 1.0);
    out.push_back(make_proposal(contour, score, options.unclip_ratio));
  }
  return out;
}

}  // namespace detail

namespace {

struct Layer {
  enum class Kind { kConv, kDeconv, kPointwise } kind;
  int kernel, stride, padding;
  int out_channels;  // 0 keeps the input channel count
};

// Segmentation prediction head on the fused feature map.
constexpr std::array<Layer, 8> kPredictionHead{{
    {Layer::Kind::kConv, 3, 1, 1, 64},
    {Layer::Kind::kPointwise, 1, 1, 0, 0},  // BN
    {Layer::Kind::kPointwise, 1, 1, 0, 0},  // ReLU
    {Layer::Kind::kDeconv, 2, 2, 0, 64},
    {Layer::Kind::kPointwise, 1, 1, 0, 0},  // BN
    {Layer::Kind::kPointwise, 1, 1, 0, 0},  // ReLU
    {Layer::Kind::kDeconv, 2, 2, 0, 1},
    {Layer::Kind::kPointwise, 1, 1, 0, 0},  // Sigmoid
}};

int spatial_out(const Layer& l, int in) {
  switch (l.kind) {
    case Layer::Kind::kConv:
      return (in + 2 * l.padding - l.kernel) / l.stride + 1;
    case Layer::Kind::kDeconv:
      return (in - 1) * l.stride - 2 * l.padding + l.kernel;
    case Layer::Kind::kPointwise:
      return in;
  }
  return in;
}

}  // namespace

TensorShape predict_head_shape(int fused_h, int fused_w) {
  if (fused_h < 1 || fused_w < 1) throw std::invalid_argument("fused map dimensions must be positive");
  TensorShape shape{256, fused_h, fused_w};
  for (const Layer& l : kPredictionHead) {
    shape.height = spatial_out(l, shape.height);
    shape.width = spatial_out(l, shape.width);
    if (l.out_channels > 0) shape.channels = l.out_channels;
  }
  return shape;
}

}  // namespace spotgeom
