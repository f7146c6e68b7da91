#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "segmetrics/error.hpp"

namespace segmetrics {

/// Row-major raster plane; the storage type for every grid in the library.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// H×W object annotation, true = foreground.
using BinaryMask = Plane<bool>;
using CountGrid = Plane<std::int32_t>;
using LabelGrid = Plane<std::int32_t>;

/// H×W×C intensities in [0,255], one plane per channel.
struct RasterImage {
  std::vector<Plane<float>> planes;

  RasterImage() = default;
  RasterImage(Eigen::Index height, Eigen::Index width, int channels, float fill = 0.0f);

  Eigen::Index height() const { return planes.empty() ? 0 : planes.front().rows(); }
  Eigen::Index width() const { return planes.empty() ? 0 : planes.front().cols(); }
  int channels() const { return static_cast<int>(planes.size()); }

  bool operator==(const RasterImage& other) const;
};

enum class ElementShape { Diamond, Disk };

struct Offset {
  int dy = 0;
  int dx = 0;
  bool operator==(const Offset&) const = default;
};

/// Symmetric, origin-centred structuring element.
struct StructuringElement {
  ElementShape shape = ElementShape::Diamond;
  int radius = 0;
  std::vector<Offset> offsets;

  std::size_t size() const { return offsets.size(); }
};

struct BBox {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;

  int bottom() const { return top + height - 1; }
  int right() const { return left + width - 1; }
  bool operator==(const BBox&) const = default;
};

enum class Connectivity { Four = 4, Eight = 8 };

struct LabeledComponents {
  LabelGrid labels;  // 0 = background, 1..count in raster discovery order
  int count = 0;
};

inline std::int64_t foreground_count(const BinaryMask& m) { return m.count(); }

StructuringElement make_element(ElementShape shape, int radius);

/// Number of foreground pixels covered by `se` centred at every cell;
/// out-of-image cells count as background. O(H·W) for Diamond regardless of
/// radius, O(H·W·r) for Disk.
CountGrid neighbor_counts(const BinaryMask& m, const StructuringElement& se);

BinaryMask dilate(const BinaryMask& m, const StructuringElement& se);

LabeledComponents connected_components(const BinaryMask& m,
                                       Connectivity connectivity = Connectivity::Eight);

/// Zhang-Suen thinning to 1-pixel-wide centerlines (8-connected). Components
/// that thinning would erase entirely keep one pixel.
BinaryMask skeletonize(const BinaryMask& m);

/// Throws Error(EmptyMask) when m has no foreground.
BBox tight_bbox(const BinaryMask& m);

BinaryMask crop(const BinaryMask& m, const BBox& box);

BinaryMask resize_mask_nn(const BinaryMask& m, Eigen::Index height, Eigen::Index width);

/// Bilinear with half-pixel centres and edge clamping.
RasterImage resize_image(const RasterImage& x, Eigen::Index height, Eigen::Index width);

/// Grayscale images become three identical planes.
RasterImage promote_to_rgb(const RasterImage& x);

}  // namespace segmetrics
