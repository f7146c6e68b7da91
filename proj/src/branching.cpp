#include <algorithm>
#include <cmath>

#include "segmetrics/synthgen.hpp"

namespace segmetrics {

namespace {

struct Point {
  double y;
  double x;
};

class TreeCanvas {
 public:
  TreeCanvas(const BranchingSpec& spec) : spec_(spec), mask_(BinaryMask::Constant(spec.size, spec.size, false)) {}

  bool inside(const Point& p) const {
    const double lo = spec_.margin;
    const double hi = spec_.size - 1 - spec_.margin;
    return p.y >= lo && p.y <= hi && p.x >= lo && p.x <= hi;
  }

  // Bresenham; 8-connected.
  void line(int y0, int x0, int y1, int x1) {
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
      mask_(y0, x0) = true;
      if (y0 == y1 && x0 == x1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  /// Draws a wiggly branch and returns where it actually ended.
  Point branch(const Point& from, double angle, double length, Rng& rng) {
    const int pieces = std::max(2, static_cast<int>(length / 8.0));
    Point cur = from;
    for (int i = 0; i < pieces; ++i) {
      Point next{cur.y + std::sin(angle) * length / pieces, cur.x + std::cos(angle) * length / pieces};
      if (spec_.segment_jitter > 0) {
        next.y += uniform_real(rng, -spec_.segment_jitter, spec_.segment_jitter);
        next.x += uniform_real(rng, -spec_.segment_jitter, spec_.segment_jitter);
      }
      if (!inside(next)) break;
      line(static_cast<int>(std::lround(cur.y)), static_cast<int>(std::lround(cur.x)),
           static_cast<int>(std::lround(next.y)), static_cast<int>(std::lround(next.x)));
      cur = next;
    }
    return cur;
  }

  void grow(const Point& from, double angle, double length, int depth, Rng& rng) {
    const Point end = branch(from, angle, length, rng);
    if (depth >= spec_.max_depth || length < 4.0) return;
    const auto span = static_cast<std::uint64_t>(spec_.max_children - spec_.min_children + 1);
    const int children = spec_.min_children + static_cast<int>(uniform_index(rng, span));
    for (int c = 0; c < children; ++c) {
      const double turn = uniform_real(rng, -spec_.max_turn, spec_.max_turn);
      const double child_length = length * spec_.length_decay * uniform_real(rng, 0.7, 1.1);
      grow(end, angle + turn, child_length, depth + 1, rng);
    }
  }

  BinaryMask take() { return std::move(mask_); }

 private:
  const BranchingSpec& spec_;
  BinaryMask mask_;
};

}  // namespace

BinaryMask generate_branching_skeleton(const BranchingSpec& spec, Rng& rng) {
  if (spec.size < 2 * spec.margin + 8)
    throw Error(ErrorCode::InvalidConfig, "canvas too small for the margin");
  if (spec.min_children < 0 || spec.max_children < spec.min_children || spec.max_depth < 0)
    throw Error(ErrorCode::InvalidConfig, "invalid branching parameters");
  TreeCanvas canvas(spec);
  const double centre = 0.5 * (spec.size - 1);
  const double spread = 0.25 * spec.size;
  const Point root{centre + uniform_real(rng, -spread, spread), centre + uniform_real(rng, -spread, spread)};
  const double angle = uniform_real(rng, 0.0, 6.283185307179586);
  const double length = spec.trunk_length * spec.size;
  canvas.line(static_cast<int>(std::lround(root.y)), static_cast<int>(std::lround(root.x)),
              static_cast<int>(std::lround(root.y)), static_cast<int>(std::lround(root.x)));
  // Two opposite trunks so the tree fills the canvas around its root.
  canvas.grow(root, angle, length, 0, rng);
  canvas.grow(root, angle + 3.141592653589793, length * 0.6, 1, rng);
  return canvas.take();
}

BinaryMask generate_tree_mask(const BranchingSpec& spec, int width, Rng& rng) {
  if (width < 1) throw Error(ErrorCode::InvalidConfig, "line width must be >= 1");
  BinaryMask skeleton = generate_branching_skeleton(spec, rng);
  if (width == 1) return skeleton;
  return dilate(skeleton, make_element(ElementShape::Disk, width / 2));
}

}  // namespace segmetrics
