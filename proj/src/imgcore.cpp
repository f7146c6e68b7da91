#include "segmetrics/imgcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace segmetrics {

RasterImage::RasterImage(Eigen::Index height, Eigen::Index width, int channels, float fill) {
  planes.assign(static_cast<std::size_t>(channels), Plane<float>::Constant(height, width, fill));
}

bool RasterImage::operator==(const RasterImage& other) const {
  if (planes.size() != other.planes.size()) return false;
  for (std::size_t c = 0; c < planes.size(); ++c) {
    if (planes[c].rows() != other.planes[c].rows() || planes[c].cols() != other.planes[c].cols())
      return false;
    if ((planes[c] != other.planes[c]).any()) return false;
  }
  return true;
}

StructuringElement make_element(ElementShape shape, int radius) {
  if (radius < 0) throw Error(ErrorCode::InvalidConfig, "element radius must be >= 0");
  StructuringElement se;
  se.shape = shape;
  se.radius = radius;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const bool inside = shape == ElementShape::Diamond
                              ? std::abs(dy) + std::abs(dx) <= radius
                              : dy * dy + dx * dx <= radius * radius;
      if (inside) se.offsets.push_back({dy, dx});
    }
  }
  return se;
}

namespace {

// A diamond |dy|+|dx| <= R becomes the square max(|du|,|dv|) <= R in the
// rotated lattice u = y+x, v = y-x, so one summed-area table over the rotated
// raster answers every diamond query in O(1).
CountGrid diamond_counts(const BinaryMask& m, int radius) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  const Eigen::Index n = rows + cols - 1;
  Plane<std::int32_t> sat = Plane<std::int32_t>::Zero(n + 1, n + 1);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      if (m(y, x)) sat(y + x + 1, y - x + cols) = 1;  // v offset by (cols-1), +1 for SAT border
    }
  }
  for (Eigen::Index u = 1; u <= n; ++u) {
    std::int32_t row_sum = 0;
    for (Eigen::Index v = 1; v <= n; ++v) {
      row_sum += sat(u, v);
      sat(u, v) = sat(u - 1, v) + row_sum;
    }
  }

  CountGrid out(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      const Eigen::Index u = y + x;
      const Eigen::Index v = y - x + cols - 1;
      const Eigen::Index u0 = std::max<Eigen::Index>(u - radius, 0);
      const Eigen::Index u1 = std::min<Eigen::Index>(u + radius, n - 1) + 1;
      const Eigen::Index v0 = std::max<Eigen::Index>(v - radius, 0);
      const Eigen::Index v1 = std::min<Eigen::Index>(v + radius, n - 1) + 1;
      out(y, x) = sat(u1, v1) - sat(u0, v1) - sat(u1, v0) + sat(u0, v0);
    }
  }
  return out;
}

// Any element symmetric about its centre row decomposes into one horizontal
// run per dy; each run is a difference of row prefix sums.
CountGrid run_counts(const BinaryMask& m, const StructuringElement& se) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Plane<std::int32_t> prefix = Plane<std::int32_t>::Zero(rows, cols + 1);
  for (Eigen::Index y = 0; y < rows; ++y)
    for (Eigen::Index x = 0; x < cols; ++x) prefix(y, x + 1) = prefix(y, x) + (m(y, x) ? 1 : 0);

  struct Run {
    int dy, lo, hi;
  };
  std::vector<Run> runs;
  for (const auto& off : se.offsets) {
    if (!runs.empty() && runs.back().dy == off.dy && runs.back().hi + 1 == off.dx) {
      runs.back().hi = off.dx;
    } else {
      runs.push_back({off.dy, off.dx, off.dx});
    }
  }

  CountGrid out = CountGrid::Zero(rows, cols);
  for (const auto& run : runs) {
    for (Eigen::Index y = 0; y < rows; ++y) {
      const Eigen::Index sy = y + run.dy;
      if (sy < 0 || sy >= rows) continue;
      for (Eigen::Index x = 0; x < cols; ++x) {
        const Eigen::Index lo = std::clamp<Eigen::Index>(x + run.lo, 0, cols);
        const Eigen::Index hi = std::clamp<Eigen::Index>(x + run.hi + 1, 0, cols);
        if (hi > lo) out(y, x) += prefix(sy, hi) - prefix(sy, lo);
      }
    }
  }
  return out;
}

}  // namespace

CountGrid neighbor_counts(const BinaryMask& m, const StructuringElement& se) {
  if (m.size() == 0) return CountGrid(m.rows(), m.cols());
  if (se.shape == ElementShape::Diamond) return diamond_counts(m, se.radius);
  return run_counts(m, se);
}

BinaryMask dilate(const BinaryMask& m, const StructuringElement& se) {
  // Elements are point-symmetric, so dilation is "any foreground under the
  // element centred here".
  return neighbor_counts(m, se) > 0;
}

BBox tight_bbox(const BinaryMask& m) {
  const auto rows_any = m.rowwise().any().eval();
  const auto cols_any = m.colwise().any().eval();
  if (!rows_any.any()) throw Error(ErrorCode::EmptyMask, "mask has no foreground");
  int top = 0;
  while (!rows_any(top)) ++top;
  int bottom = static_cast<int>(m.rows()) - 1;
  while (!rows_any(bottom)) --bottom;
  int left = 0;
  while (!cols_any(left)) ++left;
  int right = static_cast<int>(m.cols()) - 1;
  while (!cols_any(right)) --right;
  return {top, left, bottom - top + 1, right - left + 1};
}

BinaryMask crop(const BinaryMask& m, const BBox& box) {
  if (box.top < 0 || box.left < 0 || box.bottom() >= m.rows() || box.right() >= m.cols())
    throw Error(ErrorCode::DimensionMismatch, "crop box outside mask");
  return m.block(box.top, box.left, box.height, box.width);
}

namespace {

inline Eigen::Index nn_source(Eigen::Index dst, Eigen::Index dst_size, Eigen::Index src_size) {
  // floor((dst + 0.5) * src / dst_size) in exact integer arithmetic
  const Eigen::Index s = ((2 * dst + 1) * src_size) / (2 * dst_size);
  return std::min(s, src_size - 1);
}

}  // namespace

BinaryMask resize_mask_nn(const BinaryMask& m, Eigen::Index height, Eigen::Index width) {
  if (height < 1 || width < 1) throw Error(ErrorCode::InvalidConfig, "resize target must be >= 1");
  if (height == m.rows() && width == m.cols()) return m;
  std::vector<Eigen::Index> src_x(static_cast<std::size_t>(width));
  for (Eigen::Index x = 0; x < width; ++x) src_x[x] = nn_source(x, width, m.cols());
  BinaryMask out(height, width);
  for (Eigen::Index y = 0; y < height; ++y) {
    const Eigen::Index sy = nn_source(y, height, m.rows());
    for (Eigen::Index x = 0; x < width; ++x) out(y, x) = m(sy, src_x[x]);
  }
  return out;
}

namespace {

struct LinearTap {
  Eigen::Index lo;
  Eigen::Index hi;
  float frac;
};

std::vector<LinearTap> bilinear_taps(Eigen::Index dst_size, Eigen::Index src_size) {
  std::vector<LinearTap> taps(static_cast<std::size_t>(dst_size));
  const double scale = static_cast<double>(src_size) / static_cast<double>(dst_size);
  for (Eigen::Index i = 0; i < dst_size; ++i) {
    double s = (static_cast<double>(i) + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_size - 1));
    const auto lo = static_cast<Eigen::Index>(std::floor(s));
    const Eigen::Index hi = std::min(lo + 1, src_size - 1);
    taps[i] = {lo, hi, static_cast<float>(s - static_cast<double>(lo))};
  }
  return taps;
}

}  // namespace

RasterImage resize_image(const RasterImage& x, Eigen::Index height, Eigen::Index width) {
  if (height < 1 || width < 1) throw Error(ErrorCode::InvalidConfig, "resize target must be >= 1");
  if (height == x.height() && width == x.width()) return x;
  const auto ty = bilinear_taps(height, x.height());
  const auto tx = bilinear_taps(width, x.width());
  RasterImage out;
  out.planes.reserve(x.planes.size());
  for (const auto& src : x.planes) {
    Plane<float> dst(height, width);
    for (Eigen::Index y = 0; y < height; ++y) {
      const auto& vy = ty[y];
      for (Eigen::Index c = 0; c < width; ++c) {
        const auto& vx = tx[c];
        const float top = src(vy.lo, vx.lo) + vx.frac * (src(vy.lo, vx.hi) - src(vy.lo, vx.lo));
        const float bot = src(vy.hi, vx.lo) + vx.frac * (src(vy.hi, vx.hi) - src(vy.hi, vx.lo));
        dst(y, c) = std::clamp(top + vy.frac * (bot - top), 0.0f, 255.0f);
      }
    }
    out.planes.push_back(std::move(dst));
  }
  return out;
}

RasterImage promote_to_rgb(const RasterImage& x) {
  if (x.channels() == 3) return x;
  if (x.channels() != 1)
    throw Error(ErrorCode::ChannelMismatch,
                "cannot promote " + std::to_string(x.channels()) + "-channel image to RGB");
  RasterImage out;
  out.planes.assign(3, x.planes.front());
  return out;
}

}  // namespace segmetrics
