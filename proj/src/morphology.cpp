#include <array>
#include <vector>

#include "segmetrics/imgcore.hpp"

namespace segmetrics {

LabeledComponents connected_components(const BinaryMask& m, Connectivity connectivity) {
  static constexpr std::array<Offset, 8> kNeighbours{
      {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};
  const int n_neigh = connectivity == Connectivity::Eight ? 8 : 4;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());

  LabeledComponents out;
  out.labels = LabelGrid::Zero(rows, cols);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      if (!m(y, x) || out.labels(y, x) != 0) continue;
      const int label = ++out.count;
      out.labels(y, x) = label;
      stack.emplace_back(y, x);
      while (!stack.empty()) {
        const auto [cy, cx] = stack.back();
        stack.pop_back();
        for (int k = 0; k < n_neigh; ++k) {
          const int ny = cy + kNeighbours[k].dy;
          const int nx = cx + kNeighbours[k].dx;
          if (ny < 0 || ny >= rows || nx < 0 || nx >= cols) continue;
          if (!m(ny, nx) || out.labels(ny, nx) != 0) continue;
          out.labels(ny, nx) = label;
          stack.emplace_back(ny, nx);
        }
      }
    }
  }
  return out;
}

namespace {

// Neighbourhood P2..P9, clockwise from north.
struct Ring {
  std::array<bool, 8> p;

  int count() const {
    int n = 0;
    for (bool b : p) n += b;
    return n;
  }
  int transitions() const {
    int t = 0;
    for (int i = 0; i < 8; ++i) t += (!p[i] && p[(i + 1) % 8]);
    return t;
  }
};

Ring ring_at(const BinaryMask& m, int y, int x) {
  const auto at = [&](int yy, int xx) {
    return yy >= 0 && yy < m.rows() && xx >= 0 && xx < m.cols() && m(yy, xx);
  };
  return Ring{{at(y - 1, x), at(y - 1, x + 1), at(y, x + 1), at(y + 1, x + 1), at(y + 1, x),
               at(y + 1, x - 1), at(y, x - 1), at(y - 1, x - 1)}};
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& m) {
  BinaryMask skel = m;
  std::vector<std::pair<int, int>> marked;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      marked.clear();
      for (int y = 0; y < skel.rows(); ++y) {
        for (int x = 0; x < skel.cols(); ++x) {
          if (!skel(y, x)) continue;
          const Ring r = ring_at(skel, y, x);
          const int b = r.count();
          if (b < 2 || b > 6 || r.transitions() != 1) continue;
          const auto& p = r.p;  // p[0]=N p[2]=E p[4]=S p[6]=W
          const bool keep = pass == 0 ? (p[0] && p[2] && p[4]) || (p[2] && p[4] && p[6])
                                      : (p[0] && p[2] && p[6]) || (p[0] && p[4] && p[6]);
          if (!keep) marked.emplace_back(y, x);
        }
      }
      for (const auto& [y, x] : marked) skel(y, x) = false;
      changed = changed || !marked.empty();
    }
  }

  // Zhang-Suen can leave 2-pixel-thick diagonal staircases; drop corner pixels
  // of such L-shapes when removal keeps the local neighbourhood connected.
  for (int y = 0; y < skel.rows(); ++y) {
    for (int x = 0; x < skel.cols(); ++x) {
      if (!skel(y, x)) continue;
      const Ring r = ring_at(skel, y, x);
      const auto& p = r.p;
      const bool staircase = (p[0] && p[2] && !p[5] && !p[4] && !p[6]) ||
                             (p[2] && p[4] && !p[7] && !p[6] && !p[0]) ||
                             (p[4] && p[6] && !p[1] && !p[0] && !p[2]) ||
                             (p[6] && p[0] && !p[3] && !p[2] && !p[4]);
      if (staircase && r.transitions() == 1) skel(y, x) = false;
    }
  }

  // Thinning erases some tiny components (e.g. 2x2 blocks) entirely.
  const auto comps = connected_components(m, Connectivity::Eight);
  std::vector<bool> survived(static_cast<std::size_t>(comps.count) + 1, false);
  for (int y = 0; y < m.rows(); ++y)
    for (int x = 0; x < m.cols(); ++x)
      if (skel(y, x)) survived[comps.labels(y, x)] = true;
  for (int y = 0; y < m.rows(); ++y) {
    for (int x = 0; x < m.cols(); ++x) {
      const int label = comps.labels(y, x);
      if (label != 0 && !survived[label]) {
        skel(y, x) = true;
        survived[label] = true;
      }
    }
  }
  return skel;
}

}  // namespace segmetrics
