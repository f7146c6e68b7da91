#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "segmetrics/imgcore.hpp"
#include "segmetrics/rng.hpp"

namespace segmetrics {

/// Fixed first-layer convolution weights used as the texture feature
/// extractor. Weights are stored as a num_filters × (in_channels·kh·kw) matrix
/// whose columns follow [channel][row][col] order.
struct ConvFilterBank {
  int num_filters = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  int stride = 1;
  int padding = 0;
  Eigen::VectorXf input_mean;
  Eigen::VectorXf input_std;
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weights;

  void validate() const;

  float weight(int filter, int channel, int row, int col) const {
    return weights(filter, (channel * kernel_h + row) * kernel_w + col);
  }

  /// He-initialised bank with the canonical 64×3×7×7 / stride 2 / pad 3
  /// geometry and ImageNet input statistics.
  static ConvFilterBank random(std::uint64_t seed, int num_filters = 64, int in_channels = 3,
                               int kernel = 7, int stride = 2, int padding = 3);

  bool operator==(const ConvFilterBank& other) const;
};

ConvFilterBank read_filter_bank(std::istream& in);
void write_filter_bank(std::ostream& out, const ConvFilterBank& bank);
ConvFilterBank load_filter_bank(const std::filesystem::path& path);
void save_filter_bank(const std::filesystem::path& path, const ConvFilterBank& bank);

/// C′ × (H′·W′) activations; column index = row · W′ + col.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  Eigen::MatrixXf values;
};

FeatureMap extract_features(const RasterImage& x, const ConvFilterBank& bank);

/// dilate(m, Disk(radius)) minus m.
BinaryMask boundary_band(const BinaryMask& m, int radius);

struct ProbeConfig {
  double inverse_regularization = 2.0;
  int boundary_radius = 5;
  double test_fraction = 0.3;
  std::size_t max_samples_per_class = 20000;
  std::uint64_t seed = 0;
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;

  void validate() const;
};

/// Row-per-sample features with labels 1 = object, 0 = boundary.
struct LabeledSamples {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;

  Eigen::Index count(int label) const {
    return (labels.array() == static_cast<double>(label)).count();
  }
};

LabeledSamples collect_samples(const FeatureMap& feat, const BinaryMask& object,
                               const BinaryMask& band, const ProbeConfig& cfg, Rng& rng);

struct LinearProbe {
  Eigen::VectorXd weights;  // in standardised feature space
  double bias = 0.0;
  Eigen::VectorXd feature_mean;
  Eigen::VectorXd feature_scale;

  Eigen::VectorXd decision(const Eigen::MatrixXd& raw_features) const;
};

struct ProbeResult {
  LinearProbe probe;
  double test_accuracy = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
};

/// Stratified split, standardisation on the training split, then Newton
/// iterations with backtracking on the L2-regularised logistic loss.
ProbeResult train_probe(const LabeledSamples& samples, const ProbeConfig& cfg, Rng& rng);

/// Held-out accuracy of a linear probe separating object activations from
/// those in the boundary band just outside it.
double textural_separability(const RasterImage& x, const BinaryMask& m,
                             const ConvFilterBank& bank, const ProbeConfig& cfg, Rng& rng);

}  // namespace segmetrics
