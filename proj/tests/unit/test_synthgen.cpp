#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "segmetrics/stats.hpp"
#include "segmetrics/synthgen.hpp"
#include "segmetrics/treelike.hpp"

using namespace segmetrics;

namespace {

BinaryMask blank(int rows, int cols) { return BinaryMask::Constant(rows, cols, false); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::Undefined;
}

TextureBank constant_bank(int n) {
  TextureBank bank;
  for (int i = 0; i < n; ++i) {
    bank.textures.emplace_back(8, 8, 3, static_cast<float>(20 * i + 10));
    bank.names.push_back("t" + std::to_string(i));
  }
  return bank;
}

BinaryMask small_tree(std::uint64_t seed) {
  BranchingSpec spec;
  spec.size = 96;
  spec.margin = 6;
  Rng rng(seed);
  return generate_tree_mask(spec, 3, rng);
}

}  // namespace

TEST(SampleComponent, SingleAndEmpty) {
  BinaryMask m = blank(10, 10);
  m.block(2, 2, 3, 4).setConstant(true);
  Rng rng(1);
  EXPECT_TRUE((sample_component(m, rng) == m).all());
  EXPECT_EQ(code_of([&] { sample_component(blank(4, 4), rng); }), ErrorCode::EmptyMask);
}

TEST(SampleComponent, Uniform) {
  BinaryMask m = blank(10, 30);
  m.block(1, 1, 3, 3).setConstant(true);
  m.block(1, 11, 3, 3).setConstant(true);
  m.block(1, 21, 3, 3).setConstant(true);
  Rng rng(2);
  int hits[3] = {0, 0, 0};
  for (int i = 0; i < 3000; ++i) {
    const auto c = sample_component(m, rng);
    ASSERT_EQ(c.count(), 9);
    ++hits[c(2, 2) ? 0 : c(2, 12) ? 1 : 2];
  }
  for (int h : hits) {
    EXPECT_GE(h, 900);
    EXPECT_LE(h, 1100);
  }
}

TEST(PlaceObject, TightBoxIsTarget) {
  const SynthSpec spec;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const auto placed = place_object(sample_component(small_tree(seed), rng), spec, rng);
    ASSERT_EQ(placed.rows(), 1024);
    const auto box = tight_bbox(placed);
    EXPECT_EQ(box.height, 512);
    EXPECT_EQ(box.width, 512);
  }
}

TEST(PlaceObject, SinglePixelBecomesBlockAndSeedIsStable) {
  BinaryMask p = blank(5, 5);
  p(2, 2) = true;
  SynthSpec spec;
  Rng a(3), b(3);
  const auto placed = place_object(p, spec, a);
  EXPECT_EQ(placed.count(), 512 * 512);
  const auto box = tight_bbox(placed);
  EXPECT_TRUE(placed.block(box.top, box.left, 512, 512).all());
  EXPECT_TRUE((place_object(p, spec, b) == placed).all());
}

TEST(PlaceObject, OffsetsCoverCanvas) {
  BinaryMask p = blank(3, 3);
  p(1, 1) = true;
  SynthSpec spec;
  spec.canvas = 8;
  spec.target_bbox = 6;
  Rng rng(4);
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < 400; ++i) {
    const auto box = tight_bbox(place_object(p, spec, rng));
    seen.emplace(box.top, box.left);
  }
  EXPECT_EQ(seen.size(), 9u);
}

TEST(Texturize, ConstantsAndWrap) {
  BinaryMask m = blank(10, 12);
  m.block(3, 3, 4, 5).setConstant(true);
  const auto img = texturize(m, RasterImage(4, 4, 3, 200.0f), RasterImage(4, 4, 3, 50.0f));
  for (int c = 0; c < 3; ++c)
    EXPECT_TRUE((img.planes[c] == m.select(Plane<float>::Constant(10, 12, 200.0f),
                                           Plane<float>::Constant(10, 12, 50.0f)))
                    .all());

  RasterImage tile(3, 5, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) tile.planes[1](y, x) = static_cast<float>(y * 5 + x);
  const auto wrapped = texturize(blank(10, 12), RasterImage(2, 2, 3), tile);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 12; ++x) EXPECT_EQ(wrapped.planes[1](y, x), tile.planes[1](y % 3, x % 5));
}

TEST(Texturize, BackgroundNeverTouchesForeground) {
  std::mt19937_64 gen(5);
  const auto m = oracle::random_mask(gen, 20, 20, 0.5);
  const RasterImage fg(7, 7, 3, 1.0f);
  const auto a = texturize(m, fg, RasterImage(5, 5, 3, 2.0f));
  const auto b = texturize(m, fg, RasterImage(3, 3, 3, 99.0f));
  for (int c = 0; c < 3; ++c)
    EXPECT_TRUE((m.select(a.planes[c], 0.0f) == m.select(b.planes[c], 0.0f)).all());
}

TEST(GenerateDataset, KPairsAndDeterminism) {
  SynthSpec spec;
  spec.canvas = 128;
  spec.target_bbox = 64;
  spec.seed = 42;
  const auto bank = constant_bank(3);
  std::vector<BinaryMask> sources{small_tree(1), small_tree(2)};
  const auto first = generate_dataset(sources, bank, spec);
  const auto second = generate_dataset(sources, bank, spec);
  ASSERT_EQ(first.size(), 2u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].images.size(), 7u);
    EXPECT_EQ(first[i].texture_pairs.size(), 7u);
    for (const auto& [fg, bg] : first[i].texture_pairs) EXPECT_NE(fg, bg);
    EXPECT_TRUE((first[i].mask == second[i].mask).all());
    for (std::size_t k = 0; k < 7; ++k) EXPECT_TRUE(first[i].images[k] == second[i].images[k]);
    const auto box = tight_bbox(first[i].mask);
    EXPECT_EQ(box.height, 64);
    EXPECT_EQ(box.width, 64);
  }
  EXPECT_EQ(code_of([&] { generate_dataset(sources, constant_bank(1), spec); }),
            ErrorCode::InsufficientTextures);
}

TEST(ThickenSkeleton, Cases) {
  BinaryMask bar = blank(40, 80);
  bar.block(15, 10, 7, 60).setConstant(true);
  const auto thick = thicken_skeleton(bar, 4);
  for (int x = 25; x < 55; ++x) EXPECT_EQ(thick.col(x).count(), 9) << "column " << x;
  EXPECT_TRUE((thicken_skeleton(bar, 0) == skeletonize(bar)).all());
  EXPECT_EQ(thicken_skeleton(blank(9, 9), 3).count(), 0);
}

TEST(ZoomToScale, Cases) {
  RasterImage x(256, 256, 3, 100.0f);
  BinaryMask m = blank(256, 256);
  m.block(64, 64, 128, 96).setConstant(true);

  const auto same = zoom_to_scale(x, m, 128);
  ASSERT_TRUE(same.has_value());
  EXPECT_TRUE((same->mask == m).all());

  const auto small = zoom_to_scale(x, m, 64);
  ASSERT_TRUE(small.has_value());
  const auto box = tight_bbox(small->mask);
  EXPECT_GE(std::max(box.height, box.width), 63);
  EXPECT_LE(std::max(box.height, box.width), 65);

  BinaryMask hundred = blank(512, 512);
  hundred.block(200, 200, 100, 100).setConstant(true);
  EXPECT_FALSE(zoom_to_scale(RasterImage(512, 512, 3), hundred, 736).has_value());
  EXPECT_EQ(code_of([&] { zoom_to_scale(x, blank(256, 256), 10); }), ErrorCode::EmptyMask);
}

TEST(ZoomToScale, RoundTripIoU) {
  RasterImage x(256, 256, 3, 10.0f);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BranchingSpec spec;
    spec.size = 256;
    spec.margin = 60;
    Rng rng(seed);
    const auto m = generate_tree_mask(spec, 15, rng);
    const auto box = tight_bbox(m);
    const int edge = std::max(box.height, box.width);
    const auto down = zoom_to_scale(x, m, edge / 2);
    ASSERT_TRUE(down.has_value());
    const auto back = zoom_to_scale(down->image, down->mask, edge);
    ASSERT_TRUE(back.has_value());
    EXPECT_GE(iou(back->mask, m), 0.9) << "seed " << seed;
  }
}

TEST(SamplePrompts, Profiles) {
  BinaryMask m = blank(40, 40);
  m.block(5, 5, 20, 20).setConstant(true);
  m.block(10, 10, 5, 5).setConstant(false);
  Rng rng(6);
  const auto p = sample_prompts(m, 5, 5, rng);
  EXPECT_EQ(p.bbox, (BBox{5, 5, 20, 20}));
  ASSERT_EQ(p.positives.size(), 5u);
  ASSERT_EQ(p.negatives.size(), 5u);
  for (const auto& q : p.positives) EXPECT_TRUE(m(q.row, q.col));
  for (const auto& q : p.negatives) {
    EXPECT_FALSE(m(q.row, q.col));
    EXPECT_GE(q.row, 10);
    EXPECT_LT(q.row, 15);
  }
  std::set<std::pair<int, int>> distinct;
  for (const auto& q : p.positives) distinct.emplace(q.row, q.col);
  EXPECT_EQ(distinct.size(), 5u);

  const auto plitt = sample_prompts(m, 0, 2, rng);
  EXPECT_TRUE(plitt.positives.empty());
  EXPECT_EQ(plitt.negatives.size(), 2u);

  Rng a(9), b(9);
  const auto pa = sample_prompts(m, 5, 5, a), pb = sample_prompts(m, 5, 5, b);
  EXPECT_EQ(pa.positives, pb.positives);
  EXPECT_EQ(pa.negatives, pb.negatives);

  BinaryMask solid = blank(20, 20);
  solid.block(4, 4, 6, 6).setConstant(true);
  EXPECT_EQ(code_of([&] { sample_prompts(solid, 1, 1, rng); }), ErrorCode::InsufficientPixels);
  EXPECT_EQ(code_of([&] { sample_prompts(solid, 37, 0, rng); }), ErrorCode::InsufficientPixels);
}

TEST(BranchingTrees, SkeletonIsThinConnectedAndInsideMargin) {
  BranchingSpec spec;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto skel = generate_branching_skeleton(spec, rng);
    EXPECT_EQ(connected_components(skel).count, 1);
    const auto box = tight_bbox(skel);
    EXPECT_GE(box.top, spec.margin);
    EXPECT_GE(box.left, spec.margin);
    EXPECT_LE(box.bottom(), spec.size - spec.margin);
    EXPECT_LE(box.right(), spec.size - spec.margin);
    EXPECT_GT(skel.count(), spec.size / 2);
  }
}

TEST(BranchingTrees, PlacedObjectsSpanBroadCprRange) {
  const std::vector<int> widths{1, 3, 5, 9, 15};
  SynthSpec spec;
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(derive_seed(77, "tree/" + std::to_string(i)));
    const auto tree = generate_tree_mask(BranchingSpec{}, widths[i % widths.size()], rng);
    const auto placed = place_object(sample_component(tree, rng), spec, rng);
    const double v = cpr(placed, 5);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LE(lo, 0.3);
  EXPECT_GE(hi, 0.95);
}
