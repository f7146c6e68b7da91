#include "segmetrics/stats.hpp"

#include <array>

namespace segmetrics {

double iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "IoU of masks with different shapes");
  const auto inter = (a && b).count();
  const auto uni = (a || b).count();
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMask majority_vote(const std::vector<BinaryMask>& masks) {
  if (masks.empty()) throw Error(ErrorCode::EmptyList, "majority vote over zero masks");
  const auto rows = masks.front().rows();
  const auto cols = masks.front().cols();
  CountGrid votes = CountGrid::Zero(rows, cols);
  for (const auto& m : masks) {
    if (m.rows() != rows || m.cols() != cols)
      throw Error(ErrorCode::DimensionMismatch, "majority vote over masks of different shapes");
    votes += m.cast<std::int32_t>();
  }
  return 2 * votes > static_cast<std::int32_t>(masks.size());
}

void MetricSeries::push_back(std::string id, double metric, double iou_value) {
  record_ids.push_back(std::move(id));
  metric_values.push_back(metric);
  iou_values.push_back(iou_value);
}

MetricSeries aggregate(const MetricSeries& series, std::size_t group_size) {
  if (group_size < 1) throw Error(ErrorCode::InvalidConfig, "group size must be >= 1");
  if (series.metric_values.size() != series.size() || series.iou_values.size() != series.size())
    throw Error(ErrorCode::LengthMismatch, "metric series columns differ in length");

  std::vector<std::size_t> order(series.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (series.metric_values[a] != series.metric_values[b])
      return series.metric_values[a] < series.metric_values[b];
    return series.record_ids[a] < series.record_ids[b];
  });

  MetricSeries out;
  for (std::size_t start = 0; start < order.size(); start += group_size) {
    const std::size_t stop = std::min(start + group_size, order.size());
    double metric = 0.0, iou_value = 0.0;
    std::string id;
    for (std::size_t i = start; i < stop; ++i) {
      metric += series.metric_values[order[i]];
      iou_value += series.iou_values[order[i]];
      if (!id.empty()) id += ';';
      id += series.record_ids[order[i]];
    }
    const auto count = static_cast<double>(stop - start);
    out.push_back(std::move(id), metric / count, iou_value / count);
  }
  return out;
}

CorrelationReport correlate(const MetricSeries& series, std::size_t group_size,
                            std::string metric_name) {
  CorrelationReport report;
  report.metric_name = std::move(metric_name);
  report.group_size = group_size;
  const auto agg = aggregate(series, group_size);
  report.n = agg.size();
  const Eigen::Map<const Eigen::ArrayXd> metric(agg.metric_values.data(),
                                                static_cast<Eigen::Index>(agg.size()));
  const Eigen::Map<const Eigen::ArrayXd> iou_values(agg.iou_values.data(),
                                                    static_cast<Eigen::Index>(agg.size()));
  try {
    report.kendall_tau = kendall_tau(metric, iou_values);
    report.spearman_rho = spearman_rho(metric, iou_values);
    report.pearson_r = pearson_r(metric, iou_values);
  } catch (const Error& e) {
    report.kendall_tau.reset();
    report.spearman_rho.reset();
    report.pearson_r.reset();
    if (agg.size() < 2) {
      report.reason = "too few datapoints";
    } else {
      report.reason = "constant input";
    }
  }
  return report;
}

double morans_i(const Plane<double>& map, ContiguityWeights weighting) {
  const Eigen::Index rows = map.rows();
  const Eigen::Index cols = map.cols();
  if (map.size() < 2) throw Error(ErrorCode::Undefined, "Moran's I needs at least two cells");
  if (!map.allFinite()) throw Error(ErrorCode::Undefined, "non-finite attention value");
  const Plane<double> dev = map - map.mean();
  const double variance_sum = dev.square().sum();
  if ((map == map(0, 0)).all() || variance_sum == 0.0)
    throw Error(ErrorCode::Undefined, "constant map");

  // Each unordered neighbour pair is visited once and counted for both
  // directions (w_ij = w_ji = 1).
  static constexpr std::array<Offset, 4> kForward{{{0, 1}, {1, 0}, {1, 1}, {1, -1}}};
  const int n_dirs = weighting == ContiguityWeights::Queen ? 4 : 2;
  double cross = 0.0;
  double weight_sum = 0.0;
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      for (int d = 0; d < n_dirs; ++d) {
        const Eigen::Index ny = y + kForward[d].dy;
        const Eigen::Index nx = x + kForward[d].dx;
        if (ny >= rows || nx < 0 || nx >= cols) continue;
        cross += 2.0 * dev(y, x) * dev(ny, nx);
        weight_sum += 2.0;
      }
    }
  }
  if (weight_sum == 0.0) throw Error(ErrorCode::Undefined, "no contiguous neighbours");
  const auto n = static_cast<double>(map.size());
  return (n / weight_sum) * cross / variance_sum;
}

}  // namespace segmetrics
