#pragma once

#include <Eigen/Core>

#include "segmetrics/imgcore.hpp"

namespace segmetrics {

/// Contour radius and the global/local window sizes used by the tree-likeness
/// metrics. Defaults are the published grid-search optimum.
struct TreelikeConfig {
  int contour_radius = 5;
  int global_window = 127;
  int local_window = 3;

  void validate() const;
};

/// Gini impurity of every fully-contained k×k window; values(h0, w0)
/// describes m[h0..h0+k, w0..w0+k].
struct GiniMap {
  int window = 0;
  Plane<double> values;
};

/// Contour Pixel Rate: fraction of foreground pixels with at least one
/// background pixel (image exterior included) within L1 distance R.
double cpr(const BinaryMask& m, int contour_radius);

/// Foreground pixels counted by cpr().
BinaryMask contour_pixels(const BinaryMask& m, int contour_radius);

GiniMap gini_map(const BinaryMask& m, int window);

/// Population standard deviation of the window Gini impurities. Computed from
/// integer window counts with exact 128-bit accumulation, so the only rounding
/// is the final square root.
double gini_std(const BinaryMask& m, int window);

/// Difference of Gini impurity deviation: gini_std(a) - gini_std(b).
double dogd(const BinaryMask& m, int global_window, int local_window);

inline double dogd(const BinaryMask& m, const TreelikeConfig& cfg) {
  return dogd(m, cfg.global_window, cfg.local_window);
}

}  // namespace segmetrics
