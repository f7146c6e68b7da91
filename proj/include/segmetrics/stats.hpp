#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "segmetrics/error.hpp"
#include "segmetrics/imgcore.hpp"

namespace segmetrics {

double iou(const BinaryMask& a, const BinaryMask& b);

/// Pixel true iff strictly more than half of the inputs are true.
BinaryMask majority_vote(const std::vector<BinaryMask>& masks);

namespace detail {

template <typename DerivedX, typename DerivedY>
void check_pair(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "series lengths differ");
  if (x.size() < 2) throw Error(ErrorCode::Undefined, "need at least two observations");
}

template <typename Derived>
bool is_constant(const Eigen::DenseBase<Derived>& v) {
  return (v.derived().array() == v.derived().array()(0)).all();
}

// Number of tied pairs, sum over tie groups of t(t-1)/2; input must be sorted.
inline std::int64_t tied_pairs(const std::vector<double>& sorted) {
  std::int64_t ties = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    ties += t * (t - 1) / 2;
    i = j;
  }
  return ties;
}

// Bottom-up merge sort returning the number of inversions (swaps).
inline std::int64_t count_inversions(std::vector<double>& v) {
  std::int64_t swaps = 0;
  std::vector<double> buf(v.size());
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

}  // namespace detail

/// Pearson product-moment correlation.
template <typename DerivedX, typename DerivedY>
double pearson_r(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  detail::check_pair(x, y);
  if (detail::is_constant(x) || detail::is_constant(y))
    throw Error(ErrorCode::Undefined, "constant input");
  const Eigen::ArrayXd xa = x.derived().array().template cast<double>();
  const Eigen::ArrayXd ya = y.derived().array().template cast<double>();
  const Eigen::ArrayXd dx = xa - xa.mean();
  const Eigen::ArrayXd dy = ya - ya.mean();
  const double r = (dx * dy).sum() / std::sqrt(dx.square().sum() * dy.square().sum());
  return std::clamp(r, -1.0, 1.0);
}

/// Ranks starting at 1; tied values share the mean of their positions.
template <typename Derived>
Eigen::ArrayXd midranks(const Eigen::DenseBase<Derived>& v) {
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return v(a) < v(b); });
  Eigen::ArrayXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i + 1;
    while (j < n && v(order[j]) == v(order[i])) ++j;
    const double rank = 0.5 * static_cast<double>(i + j + 1);  // mean of i+1..j
    for (Eigen::Index k = i; k < j; ++k) ranks(order[k]) = rank;
    i = j;
  }
  return ranks;
}

/// Spearman's rho as the Pearson correlation of midranks.
template <typename DerivedX, typename DerivedY>
double spearman_rho(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  detail::check_pair(x, y);
  if (detail::is_constant(x) || detail::is_constant(y))
    throw Error(ErrorCode::Undefined, "constant input");
  return pearson_r(midranks(x), midranks(y));
}

/// Kendall tau-b in O(n log n) (Knight's algorithm).
template <typename DerivedX, typename DerivedY>
double kendall_tau(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  detail::check_pair(x, y);
  if (detail::is_constant(x) || detail::is_constant(y))
    throw Error(ErrorCode::Undefined, "constant input");
  const auto n = static_cast<std::size_t>(x.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double xa = x(a), xb = x(b);
    return xa < xb || (xa == xb && static_cast<double>(y(a)) < static_cast<double>(y(b)));
  });

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = static_cast<double>(x(order[i]));
    ys[i] = static_cast<double>(y(order[i]));
  }

  const auto pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t x_ties = detail::tied_pairs(xs);
  std::int64_t joint_ties = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && xs[j] == xs[i] && ys[j] == ys[i]) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    joint_ties += t * (t - 1) / 2;
    i = j;
  }
  const std::int64_t swaps = detail::count_inversions(ys);  // ys is now sorted
  const std::int64_t y_ties = detail::tied_pairs(ys);

  const auto numerator =
      static_cast<double>(pairs - x_ties - y_ties + joint_ties - 2 * swaps);
  const double denom = std::sqrt(static_cast<double>(pairs - x_ties)) *
                       std::sqrt(static_cast<double>(pairs - y_ties));
  return std::clamp(numerator / denom, -1.0, 1.0);
}

/// Paired (metric, IoU) observations.
struct MetricSeries {
  std::vector<std::string> record_ids;
  std::vector<double> metric_values;
  std::vector<double> iou_values;

  std::size_t size() const { return record_ids.size(); }
  void push_back(std::string id, double metric, double iou_value);
};

/// Sort by metric (ties by record id), average consecutive chunks of
/// `group_size` in both coordinates; a trailing partial chunk is kept.
/// Aggregated ids join their members with ';'.
MetricSeries aggregate(const MetricSeries& series, std::size_t group_size);

struct CorrelationReport {
  std::string metric_name;
  std::size_t n = 0;           // datapoints after aggregation
  std::size_t group_size = 1;
  std::optional<double> kendall_tau;
  std::optional<double> spearman_rho;
  std::optional<double> pearson_r;
  std::string reason;          // set when coefficients are undefined
};

/// Aggregates, then computes tau-b, rho and r of metric against IoU.
CorrelationReport correlate(const MetricSeries& series, std::size_t group_size,
                            std::string metric_name);

enum class ContiguityWeights { Rook, Queen };

/// Moran's I with binary contiguity weights (not row-standardised).
double morans_i(const Plane<double>& map, ContiguityWeights weighting = ContiguityWeights::Rook);

}  // namespace segmetrics
