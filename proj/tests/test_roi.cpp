#include "spotgeom/proposal.hpp"
#include "spotgeom/roi.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <random>

namespace spotgeom {
namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

FeatureGrid<double> random_features(std::mt19937& rng, int c, int h, int w) {
  std::normal_distribution<double> value(0.0, 3.0);
  FeatureGrid<double> f(c, h, w);
  for (auto& ch : f.channels)
    for (Eigen::Index k = 0; k < ch.size(); ++k) ch.data()[k] = value(rng);
  return f;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

TEST(RoiAlignTest, ConstantGrid) {
  FeatureGrid<double> f(2, 20, 30);
  f.channels[0].setConstant(4.25);
  f.channels[1].setConstant(-1.0);
  const auto r = roi_align(f, {3.2, 1.7, 27.9, 18.4});
  ASSERT_EQ(r.num_channels(), 2);
  EXPECT_EQ(r.size(), 32);
  EXPECT_TRUE((r.channels[0] == 4.25).all());
  EXPECT_TRUE((r.channels[1] == -1.0).all());
}

TEST(RoiAlignTest, BinCentersOnPixelCenters) {
  std::mt19937 rng(29);
  const FeatureGrid<double> f = random_features(rng, 1, 40, 40);
  // 32 bins of width 1 starting at x = 4: bin centers are pixel centers.
  const auto r = roi_align(f, {4, 6, 36, 38});
  EXPECT_TRUE((r.channels[0] == f.channels[0].block(6, 4, 32, 32)).all());
}

TEST(RoiAlignTest, BilinearMidpoint) {
  Grid<double> g(2, 2);
  g << 0, 1, 2, 3;
  EXPECT_DOUBLE_EQ(bilinear_sample(g, 1.0, 1.0), 1.5);
  FeatureGrid<double> f;
  f.channels.push_back(g);
  const auto r = roi_align(f, {0.5, 0.5, 1.5, 1.5}, {.out_size = 1});
  EXPECT_DOUBLE_EQ(r.channels[0](0, 0), 1.5);
}

TEST(RoiAlignTest, DegenerateBoxThrows) {
  FeatureGrid<double> f(1, 4, 4);
  EXPECT_THROW(roi_align(f, {1, 1, 1, 3}), std::invalid_argument);
  EXPECT_THROW(roi_align(f, {1, 3, 2, 2}), std::invalid_argument);
}

TEST(RoiAlignTest, MatchesTentOracle) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> dim(1, 16);
  std::uniform_real_distribution<double> pos(-4.0, 20.0);
  std::uniform_real_distribution<double> ext(0.1, 12.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const FeatureGrid<double> f = random_features(rng, 1, dim(rng), dim(rng));
    const double x0 = pos(rng), y0 = pos(rng);
    const AxisAlignedBox box{x0, y0, x0 + ext(rng), y0 + ext(rng)};
    const auto r = roi_align(f, box, {.out_size = 8});
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        // Bin center from first principles, independent of bin_center().
        const double x = box.x_min + (2 * j + 1) * (box.x_max - box.x_min) / 16.0;
        const double y = box.y_min + (2 * i + 1) * (box.y_max - box.y_min) / 16.0;
        ASSERT_NEAR(r.channels[0](i, j), oracle::tent_sample(f.channels[0], x, y), 1e-9) << "trial " << trial;
      }
    }
  }
}

TEST(RoiAlignTest, MultiSampleAveragesBilinearTaps) {
  std::mt19937 rng(37);
  const FeatureGrid<double> f = random_features(rng, 1, 10, 10);
  const AxisAlignedBox box{1.3, 2.1, 8.7, 9.2};
  const auto r = roi_align(f, box, {.out_size = 4, .sampling_ratio = 2});
  const double bw = box.width() / 4, bh = box.height() / 4;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double acc = 0;
      for (double fy : {0.25, 0.75})
        for (double fx : {0.25, 0.75})
          acc += oracle::tent_sample(f.channels[0], box.x_min + (j + fx) * bw, box.y_min + (i + fy) * bh);
      EXPECT_NEAR(r.channels[0](i, j), acc / 4, 1e-9);
    }
}

TEST(PolygonMaskTest, WorkedExamples) {
  const AxisAlignedBox box{0, 0, 32, 32};
  EXPECT_TRUE((render_polygon_mask(rect(0, 0, 32, 32), box).values == 1).all());
  EXPECT_TRUE((render_polygon_mask(rect(50, 50, 60, 60), box).values == 0).all());
  const PolygonMask half = render_polygon_mask(rect(0, 0, 16, 32), box);
  EXPECT_TRUE((half.values.leftCols(16) == 1).all());
  EXPECT_TRUE((half.values.rightCols(16) == 0).all());
  EXPECT_EQ(half.source_box, box);
}

TEST(PolygonMaskTest, ProposalCoversItsBoxCenter) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Polygon p = oracle::random_star(rng, {20, 20}, 1, 15);
    const PolygonMask m = render_polygon_mask(p, min_aabb(p));
    EXPECT_GE(m.values.cast<int>().sum(), 1);
  }
  ProbabilityMap<double> s = ProbabilityMap<double>::Zero(40, 40);
  s.block(5, 5, 3, 3).setOnes();
  for (const Proposal& prop : extract_proposals(s)) {
    EXPECT_GE(render_polygon_mask(prop.polygon, prop.box).values.cast<int>().sum(), 1);
  }
}

TEST(HardMaskTest, WorkedExamples) {
  std::mt19937 rng(43);
  const FeatureGrid<double> f = random_features(rng, 3, 40, 40);
  const AxisAlignedBox box{2, 3, 30, 35};
  const auto r0 = roi_align(f, box);
  PolygonMask ones{BinaryMap::Ones(32, 32), box};
  PolygonMask zeros{BinaryMap::Zero(32, 32), box};
  const auto id = hard_roi_mask(r0, ones);
  const auto none = hard_roi_mask(r0, zeros);
  for (int c = 0; c < 3; ++c) {
    EXPECT_TRUE((id.channels[c] == r0.channels[c]).all());
    EXPECT_TRUE((none.channels[c] == 0).all());
  }

  RoiGrid<double> g{{Grid<double>::Constant(32, 32, 2.5)}, box};
  PolygonMask m{BinaryMap::Zero(32, 32), box};
  m.values(4, 4) = 1;
  const auto out = hard_roi_mask(g, m);
  EXPECT_EQ(out.channels[0](4, 4), 2.5);
  EXPECT_EQ(out.channels[0](4, 5), 0.0);
}

TEST(HardMaskTest, RejectsMismatch) {
  const AxisAlignedBox box{0, 0, 8, 8};
  RoiGrid<double> g{{Grid<double>::Zero(32, 32)}, box};
  EXPECT_THROW(hard_roi_mask(g, {BinaryMap::Ones(32, 32), {0, 0, 8, 9}}), std::invalid_argument);
  EXPECT_THROW(hard_roi_mask(g, {BinaryMap::Ones(16, 16), box}), std::invalid_argument);
}

TEST(HardMaskTest, SuppressesOutsideAndCopiesInside) {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> c(8.0, 24.0);
  for (int trial = 0; trial < 50; ++trial) {
    FeatureGrid<double> f = random_features(rng, 8, 32, 32);
    // Negative values make +0 versus -0 observable.
    f.channels[0](0, 0) = -0.0;
    const Polygon p = oracle::random_star(rng, {c(rng), c(rng)}, 2, 12);
    const AxisAlignedBox box = min_aabb(p);
    const auto r0 = roi_align(f, box);
    const PolygonMask m = render_polygon_mask(p, box);
    const auto r = hard_roi_mask(r0, m);
    for (int ch = 0; ch < 8; ++ch) {
      double outside = 0;
      for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
          if (m.values(i, j)) {
            ASSERT_TRUE(bit_equal(r.channels[ch](i, j), r0.channels[ch](i, j)));
          } else {
            ASSERT_TRUE(bit_equal(r.channels[ch](i, j), 0.0));
            outside += std::abs(r.channels[ch](i, j));
          }
        }
      EXPECT_EQ(outside, 0.0);
    }
    const auto twice = hard_roi_mask(r, m);
    for (int ch = 0; ch < 8; ++ch) EXPECT_TRUE((twice.channels[ch] == r.channels[ch]).all());
  }
}

TEST(SoftMaskTest, WorkedExamples) {
  std::mt19937 rng(53);
  const FeatureGrid<double> f = random_features(rng, 2, 40, 40);
  const auto r0 = roi_align(f, {1, 1, 39, 39});
  const auto same = soft_roi_mask(r0, Grid<double>::Ones(32, 32));
  const auto half = soft_roi_mask(r0, Grid<double>::Constant(32, 32, 0.5));
  for (int c = 0; c < 2; ++c) {
    EXPECT_TRUE((same.channels[c] == r0.channels[c]).all());
    EXPECT_TRUE((half.channels[c] == r0.channels[c] / 2).all());
  }
  EXPECT_THROW(soft_roi_mask(r0, Grid<double>::Constant(32, 32, 1.5)), std::invalid_argument);
  EXPECT_THROW(soft_roi_mask(r0, Grid<double>::Ones(16, 16)), std::invalid_argument);
}

TEST(SoftMaskTest, ReducesToHardOnBinaryInput) {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const FeatureGrid<double> f = random_features(rng, 8, 32, 32);
    const Polygon p = oracle::random_star(rng, {16, 16}, 3, 14);
    const AxisAlignedBox box = min_aabb(p);
    const auto r0 = roi_align(f, box);
    const PolygonMask m = render_polygon_mask(p, box);
    const auto hard = hard_roi_mask(r0, m);
    const auto soft = soft_roi_mask(r0, m.values.cast<double>());
    for (int ch = 0; ch < 8; ++ch) {
      // Equal as values; a product may carry -0 where select gives +0.
      EXPECT_TRUE((hard.channels[ch] == soft.channels[ch]).all());
    }
  }
}

TEST(RoiFloatTest, SinglePrecisionGrids) {
  FeatureGrid<float> f(1, 8, 8);
  f.channels[0].setConstant(2.0f);
  const auto r = roi_align(f, {1, 1, 7, 7}, {.out_size = 4});
  EXPECT_TRUE((r.channels[0] == 2.0f).all());
}

}  // namespace
}  // namespace spotgeom
