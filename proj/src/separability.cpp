#include "segmetrics/separability.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>

#include "segmetrics/probe.hpp"

namespace segmetrics {

FeatureMap extract_features(const RasterImage& x, const ConvFilterBank& bank) {
  bank.validate();
  if (x.channels() != bank.in_channels)
    throw Error(ErrorCode::ChannelMismatch, "image has " + std::to_string(x.channels()) +
                                                " channels, bank expects " +
                                                std::to_string(bank.in_channels));
  const auto in_h = static_cast<int>(x.height());
  const auto in_w = static_cast<int>(x.width());
  const int pad = bank.padding;
  const int out_h = (in_h + 2 * pad - bank.kernel_h) / bank.stride + 1;
  const int out_w = (in_w + 2 * pad - bank.kernel_w) / bank.stride + 1;
  if (in_h + 2 * pad < bank.kernel_h || in_w + 2 * pad < bank.kernel_w)
    throw Error(ErrorCode::DimensionMismatch, "image smaller than filter kernel");

  // Normalise, then zero-pad in normalised space.
  std::vector<Plane<float>> padded;
  padded.reserve(static_cast<std::size_t>(bank.in_channels));
  for (int c = 0; c < bank.in_channels; ++c) {
    Plane<float> p = Plane<float>::Zero(in_h + 2 * pad, in_w + 2 * pad);
    p.block(pad, pad, in_h, in_w) =
        (x.planes[c] / 255.0f - bank.input_mean(c)) / bank.input_std(c);
    padded.push_back(std::move(p));
  }

  FeatureMap out;
  out.channels = bank.num_filters;
  out.height = out_h;
  out.width = out_w;
  out.values.resize(bank.num_filters, static_cast<Eigen::Index>(out_h) * out_w);

  const Eigen::Index fan_in = bank.weights.cols();
  Eigen::MatrixXf patches(fan_in, out_w);
  for (int oy = 0; oy < out_h; ++oy) {
    const int y0 = oy * bank.stride;
    for (int ox = 0; ox < out_w; ++ox) {
      const int x0 = ox * bank.stride;
      Eigen::Index k = 0;
      for (int c = 0; c < bank.in_channels; ++c)
        for (int r = 0; r < bank.kernel_h; ++r)
          for (int s = 0; s < bank.kernel_w; ++s) patches(k++, ox) = padded[c](y0 + r, x0 + s);
    }
    out.values.middleCols(static_cast<Eigen::Index>(oy) * out_w, out_w).noalias() =
        bank.weights * patches;
  }
  return out;
}

BinaryMask boundary_band(const BinaryMask& m, int radius) {
  return dilate(m, make_element(ElementShape::Disk, radius)) && !m;
}

void ProbeConfig::validate() const {
  if (!(inverse_regularization > 0.0))
    throw Error(ErrorCode::InvalidConfig, "inverse regularisation C must be > 0");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error(ErrorCode::InvalidConfig, "test fraction must lie in (0, 1)");
  if (boundary_radius < 1) throw Error(ErrorCode::InvalidConfig, "boundary radius must be >= 1");
  if (max_samples_per_class < 2)
    throw Error(ErrorCode::InvalidConfig, "per-class sample cap must be >= 2");
  if (max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max iterations must be >= 1");
}

namespace {

std::vector<Eigen::Index> true_indices(const BinaryMask& m) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m.data()[i]) idx.push_back(i);
  return idx;
}

std::vector<Eigen::Index> subsample(const std::vector<Eigen::Index>& idx, std::size_t target,
                                    Rng& rng) {
  if (idx.size() <= target) return idx;
  auto picks = sample_without_replacement(idx.size(), target, rng);
  std::sort(picks.begin(), picks.end());
  std::vector<Eigen::Index> out;
  out.reserve(target);
  for (auto p : picks) out.push_back(idx[p]);
  return out;
}

}  // namespace

LabeledSamples collect_samples(const FeatureMap& feat, const BinaryMask& object,
                               const BinaryMask& band, const ProbeConfig& cfg, Rng& rng) {
  if (object.rows() != feat.height || object.cols() != feat.width || band.rows() != feat.height ||
      band.cols() != feat.width)
    throw Error(ErrorCode::DimensionMismatch, "masks must match the feature map resolution");
  if ((object && band).any())
    throw Error(ErrorCode::InvalidConfig, "object and boundary band overlap");
  const auto obj_idx = true_indices(object);
  const auto band_idx = true_indices(band);
  if (obj_idx.empty())
    throw Error(ErrorCode::DegenerateObject, "object vanishes at feature resolution");
  if (band_idx.empty())
    throw Error(ErrorCode::DegenerateObject, "boundary band is empty at feature resolution");

  const std::size_t target =
      std::min({obj_idx.size(), band_idx.size(), cfg.max_samples_per_class});
  const auto obj_pick = subsample(obj_idx, target, rng);
  const auto band_pick = subsample(band_idx, target, rng);

  LabeledSamples samples;
  const auto n = static_cast<Eigen::Index>(2 * target);
  samples.features.resize(n, feat.channels);
  samples.labels.resize(n);
  Eigen::Index row = 0;
  for (auto i : obj_pick) {
    samples.features.row(row) = feat.values.col(i).cast<double>().transpose();
    samples.labels(row++) = 1.0;
  }
  for (auto i : band_pick) {
    samples.features.row(row) = feat.values.col(i).cast<double>().transpose();
    samples.labels(row++) = 0.0;
  }
  return samples;
}

Eigen::VectorXd LinearProbe::decision(const Eigen::MatrixXd& raw_features) const {
  const Eigen::MatrixXd standardised =
      (raw_features.rowwise() - feature_mean.transpose()).array().rowwise() /
      feature_scale.transpose().array();
  return (standardised * weights).array() + bias;
}

namespace {

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(rows[i]);
  return out;
}

}  // namespace

ProbeResult train_probe(const LabeledSamples& samples, const ProbeConfig& cfg, Rng& rng) {
  cfg.validate();
  if (samples.features.rows() != samples.labels.size())
    throw Error(ErrorCode::LengthMismatch, "features and labels differ in length");

  std::vector<Eigen::Index> train, test;
  // Classes are split in order of first appearance so relabelling leaves the split unchanged.
  const int first = samples.labels.size() > 0 && samples.labels(0) > 0.5 ? 1 : 0;
  for (int label : {first, 1 - first}) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < samples.labels.size(); ++i)
      if (samples.labels(i) == static_cast<double>(label)) members.push_back(i);
    if (members.size() < 2)
      throw Error(ErrorCode::TooFewSamples, "need at least two samples per class");
    shuffle(members, rng);
    const auto n = static_cast<long long>(members.size());
    const long long n_test = std::clamp<long long>(
        std::llround(cfg.test_fraction * static_cast<double>(n)), 1, n - 1);
    test.insert(test.end(), members.begin(), members.begin() + n_test);
    train.insert(train.end(), members.begin() + n_test, members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());

  const Eigen::MatrixXd x_raw = gather_rows(samples.features, train);
  const Eigen::VectorXd y = gather(samples.labels, train);

  ProbeResult result;
  auto& probe = result.probe;
  probe.feature_mean = x_raw.colwise().mean().transpose();
  const Eigen::MatrixXd centred = x_raw.rowwise() - probe.feature_mean.transpose();
  probe.feature_scale =
      (centred.array().square().colwise().sum() / static_cast<double>(x_raw.rows()))
          .sqrt()
          .transpose();
  for (Eigen::Index j = 0; j < probe.feature_scale.size(); ++j)
    if (!(probe.feature_scale(j) > 1e-12)) probe.feature_scale(j) = 1.0;
  const Eigen::MatrixXd x =
      centred.array().rowwise() / probe.feature_scale.transpose().array();

  const LogisticObjective<double> objective{x, y, cfg.inverse_regularization};
  const Eigen::Index d = x.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  double current = objective.value(w, b);
  for (; result.iterations < cfg.max_iterations; ++result.iterations) {
    const Eigen::VectorXd g = objective.gradient(w, b);
    result.gradient_norm = g.norm();
    if (result.gradient_norm <= cfg.gradient_tolerance) break;
    const Eigen::VectorXd step = objective.hessian(w, b).ldlt().solve(g);
    double slope = g.dot(step);
    Eigen::VectorXd direction = step;
    if (!(slope > 0.0) || !step.allFinite()) {
      direction = g;  // fall back to steepest descent
      slope = g.squaredNorm();
    }
    double t = 1.0;
    double candidate = current;
    Eigen::VectorXd w_next;
    double b_next = b;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      w_next = w - t * direction.head(d);
      b_next = b - t * direction(d);
      candidate = objective.value(w_next, b_next);
      if (candidate <= current - 1e-4 * t * slope) break;
    }
    if (!(candidate < current)) break;  // no further progress representable
    w = std::move(w_next);
    b = b_next;
    current = candidate;
  }
  if (result.iterations == cfg.max_iterations || result.gradient_norm > cfg.gradient_tolerance)
    result.gradient_norm = objective.gradient(w, b).norm();
  probe.weights = w;
  probe.bias = b;

  const Eigen::VectorXd scores = probe.decision(gather_rows(samples.features, test));
  Eigen::Index correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const bool predicted = scores(static_cast<Eigen::Index>(i)) > 0.0;
    const bool actual = samples.labels(test[i]) > 0.5;
    correct += predicted == actual;
  }
  result.test_accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  return result;
}

double textural_separability(const RasterImage& x, const BinaryMask& m,
                             const ConvFilterBank& bank, const ProbeConfig& cfg, Rng& rng) {
  cfg.validate();
  if (m.rows() != x.height() || m.cols() != x.width())
    throw Error(ErrorCode::DimensionMismatch, "mask and image shapes differ");
  if (foreground_count(m) == 0) throw Error(ErrorCode::EmptyMask, "separability of empty mask");
  const RasterImage input = (bank.in_channels == 3 && x.channels() == 1) ? promote_to_rgb(x) : x;
  const FeatureMap feat = extract_features(input, bank);
  const BinaryMask object = resize_mask_nn(m, feat.height, feat.width);
  const BinaryMask band = boundary_band(object, cfg.boundary_radius);
  const LabeledSamples samples = collect_samples(feat, object, band, cfg, rng);
  return train_probe(samples, cfg, rng).test_accuracy;
}

}  // namespace segmetrics
