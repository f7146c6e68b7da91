#pragma once

// On-disk corpora for command-level tests.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "segmetrics/image_io.hpp"
#include "segmetrics/manifest.hpp"
#include "segmetrics/synthgen.hpp"

namespace fixture {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("segmetrics_" + tag + "_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline segmetrics::RasterImage noise_image(int size, std::uint64_t seed, float lo, float hi) {
  segmetrics::RasterImage img(size, size, 3);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<float> u(lo, hi);
  for (auto& p : img.planes)
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = u(gen);
  return img;
}

/// Flip a random fraction of pixels.
inline segmetrics::BinaryMask perturb(const segmetrics::BinaryMask& m, double rate,
                                      std::uint64_t seed) {
  segmetrics::BinaryMask out = m;
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution flip(rate);
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (flip(gen)) out.data()[i] = !out.data()[i];
  return out;
}

/// `count` records of procedural trees on `size`² canvases with textured
/// images and `preds` noisy predictions each. Returns the manifest path.
inline fs::path write_corpus(const fs::path& dir, int count, int size, int preds,
                             std::uint64_t seed) {
  using namespace segmetrics;
  std::vector<ManifestRecord> records;
  const std::vector<int> widths{1, 3, 5, 9, 15};
  for (int i = 0; i < count; ++i) {
    const std::string id = "rec_" + std::to_string(1000 + i);
    BranchingSpec spec;
    spec.size = size;
    spec.margin = size / 16;
    Rng rng(derive_seed(seed, id));
    const BinaryMask gt = generate_tree_mask(spec, widths[i % widths.size()], rng);
    const auto fg = noise_image(17, seed + 2 * i, 150.0f, 255.0f);
    const auto bg = noise_image(23, seed + 2 * i + 1, 0.0f, 120.0f);
    ManifestRecord r;
    r.id = id;
    r.dataset = i % 2 ? "trees_a" : "trees_b";
    r.object_class = "tree";
    r.image_path = dir / (id + "_img.png");
    r.gt_mask_path = dir / (id + "_gt.png");
    write_image_png(r.image_path, texturize(gt, fg, bg));
    write_mask_png(r.gt_mask_path, gt);
    for (int k = 0; k < preds; ++k) {
      r.pred_mask_paths.push_back(dir / (id + "_pred" + std::to_string(k) + ".png"));
      write_mask_png(r.pred_mask_paths.back(), perturb(gt, 0.02 * (1 + i % 4), seed * 31 + i * 7 + k));
    }
    records.push_back(std::move(r));
  }
  const fs::path manifest = dir / "manifest.jsonl";
  write_manifest(manifest, records);
  return manifest;
}

}  // namespace fixture
