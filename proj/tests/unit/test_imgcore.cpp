#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "segmetrics/imgcore.hpp"

using namespace segmetrics;

namespace {

BinaryMask blank(int rows, int cols) { return BinaryMask::Constant(rows, cols, false); }

}  // namespace

TEST(MakeElement, DiamondSizes) {
  EXPECT_EQ(make_element(ElementShape::Diamond, 0).size(), 1u);
  EXPECT_EQ(make_element(ElementShape::Diamond, 0).offsets.front(), (Offset{0, 0}));
  EXPECT_EQ(make_element(ElementShape::Diamond, 1).size(), 5u);
  // enumerated |dy|+|dx| <= 5
  int count = 0;
  for (int dy = -5; dy <= 5; ++dy)
    for (int dx = -5; dx <= 5; ++dx) count += std::abs(dy) + std::abs(dx) <= 5;
  EXPECT_EQ(count, 61);
  EXPECT_EQ(make_element(ElementShape::Diamond, 5).size(), 61u);
  for (int r = 0; r < 10; ++r)
    EXPECT_EQ(make_element(ElementShape::Diamond, r).size(), static_cast<std::size_t>(2 * r * r + 2 * r + 1));
}

TEST(MakeElement, DiskMatchesEuclideanRule) {
  const auto disk = make_element(ElementShape::Disk, 5);
  EXPECT_EQ(disk.size(), 81u);
  for (const auto& o : disk.offsets) EXPECT_LE(o.dy * o.dy + o.dx * o.dx, 25);
  EXPECT_THROW(make_element(ElementShape::Disk, -1), Error);
}

TEST(NeighborCounts, BasicCases) {
  const auto d1 = make_element(ElementShape::Diamond, 1);
  EXPECT_TRUE((neighbor_counts(blank(6, 7), d1) == 0).all());
  const BinaryMask full = BinaryMask::Constant(8, 8, true);
  const auto counts = neighbor_counts(full, d1);
  EXPECT_EQ(counts(4, 4), 5);
  EXPECT_EQ(counts(0, 0), 3);
  EXPECT_EQ(counts(0, 4), 4);
}

TEST(NeighborCounts, MatchesOracleForBothShapes) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 1 + static_cast<int>(gen() % 30);
    const int cols = 1 + static_cast<int>(gen() % 30);
    const auto m = oracle::random_mask(gen, rows, cols, 0.5);
    for (auto shape : {ElementShape::Diamond, ElementShape::Disk}) {
      const int r = static_cast<int>(gen() % 9);
      const auto se = make_element(shape, r);
      const auto fast = neighbor_counts(m, se);
      const auto slow = oracle::neighbor_counts(m, se.offsets);
      ASSERT_TRUE((fast == slow).all()) << "shape " << static_cast<int>(shape) << " r=" << r;
      ASSERT_TRUE((fast <= static_cast<int>(se.size())).all());
    }
  }
}

TEST(Dilate, PointBecomesElement) {
  BinaryMask m = blank(21, 21);
  m(10, 10) = true;
  const auto se = make_element(ElementShape::Disk, 5);
  const auto d = dilate(m, se);
  EXPECT_EQ(d.count(), static_cast<Eigen::Index>(se.size()));
  for (const auto& o : se.offsets) EXPECT_TRUE(d(10 + o.dy, 10 + o.dx));
}

TEST(Dilate, IdentityAndLineBand) {
  std::mt19937_64 gen(3);
  const auto m = oracle::random_mask(gen, 12, 17, 0.3);
  EXPECT_TRUE((dilate(m, make_element(ElementShape::Diamond, 0)) == m).all());

  BinaryMask line = blank(31, 60);
  line.row(15).setConstant(true);
  const auto band = dilate(line, make_element(ElementShape::Disk, 4));
  for (int x = 0; x < 60; ++x) EXPECT_EQ(band.col(x).count(), 9);
}

TEST(Dilate, Monotone) {
  std::mt19937_64 gen(5);
  const auto se = make_element(ElementShape::Disk, 2);
  for (int t = 0; t < 20; ++t) {
    const auto small = oracle::random_mask(gen, 16, 16, 0.2);
    const BinaryMask big = small || oracle::random_mask(gen, 16, 16, 0.2);
    const auto ds = dilate(small, se), db = dilate(big, se);
    EXPECT_FALSE((ds && !db).any());
    EXPECT_FALSE((small && !ds).any());
  }
}

TEST(ConnectedComponents, Basics) {
  BinaryMask m = blank(10, 10);
  m.block(0, 0, 3, 3).setConstant(true);
  m.block(6, 6, 3, 3).setConstant(true);
  EXPECT_EQ(connected_components(m).count, 2);

  BinaryMask diag = blank(4, 4);
  diag(1, 1) = diag(2, 2) = true;
  EXPECT_EQ(connected_components(diag, Connectivity::Eight).count, 1);
  EXPECT_EQ(connected_components(diag, Connectivity::Four).count, 2);
  EXPECT_EQ(connected_components(blank(5, 5)).count, 0);
}

TEST(ConnectedComponents, LabelsPartitionForeground) {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 20; ++t) {
    const auto m = oracle::random_mask(gen, 20, 25, 0.4);
    const auto cc = connected_components(m, Connectivity::Four);
    EXPECT_TRUE(((cc.labels > 0) == m).all());
    EXPECT_LE(cc.labels.maxCoeff(), cc.count);
    // raster discovery order: first pixel of label k precedes first of k+1
    int next = 1;
    for (Eigen::Index i = 0; i < cc.labels.size(); ++i) {
      const int l = cc.labels.data()[i];
      if (l == next) ++next;
      ASSERT_LT(l, next);
    }
  }
}

TEST(Skeletonize, TrivialCases) {
  EXPECT_EQ(skeletonize(blank(5, 5)).count(), 0);
  BinaryMask p = blank(5, 5);
  p(2, 3) = true;
  EXPECT_TRUE((skeletonize(p) == p).all());
  BinaryMask square = blank(6, 6);
  square.block(2, 2, 2, 2).setConstant(true);
  EXPECT_GE(skeletonize(square).count(), 1);
}

TEST(Skeletonize, BarReducesToCenterline) {
  BinaryMask m = blank(21, 60);
  m.block(6, 10, 9, 40).setConstant(true);
  const auto s = skeletonize(m);
  EXPECT_FALSE((s && !m).any());
  EXPECT_EQ(connected_components(s).count, 1);
  // ends shrink by about half the width; interior columns hold one pixel on bar row 4
  int on_center = 0;
  for (int x = 16; x < 42; ++x) {
    EXPECT_EQ(s.col(x).count(), 1) << "column " << x;
    on_center += s(10, x);
  }
  EXPECT_EQ(on_center, 26);
  EXPECT_GE(s.count(), 30);
}

TEST(Skeletonize, PreservesComponentsAndThinness) {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 30; ++t) {
    BinaryMask m = blank(40, 40);
    const int bars = 1 + static_cast<int>(gen() % 3);
    for (int b = 0; b < bars; ++b) {
      const int y = 2 + static_cast<int>(gen() % 28), x = 2 + static_cast<int>(gen() % 10);
      const int h = 1 + static_cast<int>(gen() % 8), w = 10 + static_cast<int>(gen() % 20);
      m.block(y, x, std::min(h, 38 - y), std::min(w, 38 - x)).setConstant(true);
    }
    const auto s = skeletonize(m);
    EXPECT_FALSE((s && !m).any());
    const auto in_cc = connected_components(m);
    const auto out_cc = connected_components(s);
    EXPECT_EQ(out_cc.count, in_cc.count);
  }
}

TEST(TightBBox, Cases) {
  BinaryMask m = blank(20, 20);
  m(7, 3) = true;
  EXPECT_EQ(tight_bbox(m), (BBox{7, 3, 1, 1}));
  EXPECT_EQ(tight_bbox(BinaryMask::Constant(9, 4, true)), (BBox{0, 0, 9, 4}));
  BinaryMask two = blank(20, 20);
  two(2, 2) = two(10, 5) = true;
  EXPECT_EQ(tight_bbox(two), (BBox{2, 2, 9, 4}));
  try {
    tight_bbox(blank(3, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMask);
  }
}

TEST(TightBBox, PaddingInvariance) {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 20; ++t) {
    const auto m = oracle::random_mask(gen, 10, 12, 0.1);
    if (m.count() == 0) continue;
    BinaryMask padded = blank(10 + 7, 12 + 4);
    padded.block(3, 1, 10, 12) = m;
    auto a = tight_bbox(m), b = tight_bbox(padded);
    b.top -= 3;
    b.left -= 1;
    EXPECT_EQ(a, b);
  }
}

TEST(ResizeMaskNN, Cases) {
  std::mt19937_64 gen(4);
  const auto m = oracle::random_mask(gen, 13, 9, 0.5);
  EXPECT_TRUE((resize_mask_nn(m, 13, 9) == m).all());
  BinaryMask one = BinaryMask::Constant(1, 1, true);
  EXPECT_TRUE(resize_mask_nn(one, 2, 2).all());

  BinaryMask big = blank(1024, 1024);
  big.block(312, 312, 400, 400).setConstant(true);
  const auto small = resize_mask_nn(big, 512, 512);
  const double ratio = static_cast<double>(small.count()) / static_cast<double>(big.count());
  EXPECT_NEAR(ratio, 0.25, 0.25 * 0.02);
  EXPECT_THROW(resize_mask_nn(m, 0, 3), Error);
}

TEST(ResizeImage, Cases) {
  RasterImage constant(17, 23, 3, 128.0f);
  const auto r = resize_image(constant, 40, 9);
  for (const auto& p : r.planes) EXPECT_TRUE((p == 128.0f).all());
  EXPECT_TRUE(resize_image(constant, 17, 23) == constant);

  RasterImage ramp(1, 2, 1);
  ramp.planes[0](0, 0) = 0.0f;
  ramp.planes[0](0, 1) = 255.0f;
  const auto up = resize_image(ramp, 1, 4);
  // half-pixel centres: samples at -0.25, 0.25, 0.75, 1.25 (clamped)
  EXPECT_FLOAT_EQ(up.planes[0](0, 0), 0.0f);
  EXPECT_FLOAT_EQ(up.planes[0](0, 1), 63.75f);
  EXPECT_FLOAT_EQ(up.planes[0](0, 2), 191.25f);
  EXPECT_FLOAT_EQ(up.planes[0](0, 3), 255.0f);
  for (int x = 1; x < 4; ++x) EXPECT_LE(up.planes[0](0, x - 1), up.planes[0](0, x));
}

TEST(PromoteToRgb, GrayBecomesThreePlanes) {
  RasterImage g(3, 3, 1, 7.0f);
  const auto rgb = promote_to_rgb(g);
  EXPECT_EQ(rgb.channels(), 3);
  EXPECT_TRUE((rgb.planes[2] == 7.0f).all());
  EXPECT_THROW(promote_to_rgb(RasterImage(2, 2, 2)), Error);
}
