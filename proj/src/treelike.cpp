#include "segmetrics/treelike.hpp"

#include <cmath>
#include <string>

namespace segmetrics {

void TreelikeConfig::validate() const {
  if (contour_radius < 1) throw Error(ErrorCode::InvalidConfig, "contour radius must be >= 1");
  if (local_window < 1) throw Error(ErrorCode::InvalidConfig, "local window must be >= 1");
  if (global_window <= local_window)
    throw Error(ErrorCode::InvalidConfig, "global window must exceed local window");
}

BinaryMask contour_pixels(const BinaryMask& m, int contour_radius) {
  if (contour_radius < 1) throw Error(ErrorCode::InvalidConfig, "contour radius must be >= 1");
  const auto se = make_element(ElementShape::Diamond, contour_radius);
  const auto counts = neighbor_counts(m, se);
  return m && (counts < static_cast<std::int32_t>(se.size()));
}

double cpr(const BinaryMask& m, int contour_radius) {
  const auto fg = foreground_count(m);
  if (fg == 0) throw Error(ErrorCode::EmptyMask, "CPR of an empty mask");
  const auto contour = foreground_count(contour_pixels(m, contour_radius));
  return static_cast<double>(contour) / static_cast<double>(fg);
}

namespace {

void check_window(const BinaryMask& m, int window) {
  if (window < 1) throw Error(ErrorCode::InvalidConfig, "window must be >= 1");
  if (window > m.rows() || window > m.cols())
    throw Error(ErrorCode::WindowTooLarge, "window " + std::to_string(window) + " exceeds mask " +
                                               std::to_string(m.rows()) + "x" +
                                               std::to_string(m.cols()));
}

// Foreground count of every valid k×k window via a summed-area table.
Plane<std::int64_t> window_counts(const BinaryMask& m, int k) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Plane<std::int32_t> sat = Plane<std::int32_t>::Zero(rows + 1, cols + 1);
  for (Eigen::Index y = 0; y < rows; ++y) {
    std::int32_t row_sum = 0;
    for (Eigen::Index x = 0; x < cols; ++x) {
      row_sum += m(y, x) ? 1 : 0;
      sat(y + 1, x + 1) = sat(y, x + 1) + row_sum;
    }
  }
  const Eigen::Index out_rows = rows - k + 1;
  const Eigen::Index out_cols = cols - k + 1;
  Plane<std::int64_t> counts(out_rows, out_cols);
  for (Eigen::Index y = 0; y < out_rows; ++y)
    for (Eigen::Index x = 0; x < out_cols; ++x)
      counts(y, x) = sat(y + k, x + k) - sat(y, x + k) - sat(y + k, x) + sat(y, x);
  return counts;
}

}  // namespace

GiniMap gini_map(const BinaryMask& m, int window) {
  check_window(m, window);
  const double area = static_cast<double>(window) * window;
  const auto p = (window_counts(m, window).cast<double>() / area).eval();
  return {window, 1.0 - p.square() - (1.0 - p).square()};
}

double gini_std(const BinaryMask& m, int window) {
  check_window(m, window);
  // Gini = 1 - p² - (1-p)² = 2n(k²-n) / k⁴ for n foreground pixels.
  const std::int64_t area = static_cast<std::int64_t>(window) * window;
  const auto counts = window_counts(m, window);
  __int128 sum = 0;
  __int128 sum_sq = 0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    const std::int64_t n = counts.data()[i];
    const __int128 g = static_cast<__int128>(2 * n) * (area - n);
    sum += g;
    sum_sq += g * g;
  }
  const __int128 windows = counts.size();
  const __int128 spread = windows * sum_sq - sum * sum;  // windows² · Var · k⁸
  const long double k4 = static_cast<long double>(area) * static_cast<long double>(area);
  const long double sd = std::sqrt(static_cast<long double>(spread)) /
                         (static_cast<long double>(windows) * k4);
  return static_cast<double>(sd);
}

double dogd(const BinaryMask& m, int global_window, int local_window) {
  if (global_window <= local_window)
    throw Error(ErrorCode::InvalidConfig, "global window must exceed local window");
  return gini_std(m, global_window) - gini_std(m, local_window);
}

}  // namespace segmetrics
