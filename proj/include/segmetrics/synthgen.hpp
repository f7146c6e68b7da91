#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segmetrics/imgcore.hpp"
#include "segmetrics/rng.hpp"

namespace segmetrics {

struct TextureBank {
  std::vector<RasterImage> textures;
  std::vector<std::string> names;

  void validate() const;
  std::size_t size() const { return textures.size(); }
};

/// Every readable PNG/JPEG tile in `dir`, sorted by file name, promoted to RGB.
TextureBank load_texture_bank(const std::filesystem::path& dir);

struct SynthSpec {
  int canvas = 1024;
  int target_bbox = 512;
  int texture_pairs = 7;
  std::uint64_t seed = 0;
  bool preserve_aspect = false;  // scale longer bbox edge to target_bbox instead

  void validate() const;
};

struct Pixel {
  int row = 0;
  int col = 0;
  bool operator==(const Pixel&) const = default;
};

struct PromptSet {
  BBox bbox;
  std::vector<Pixel> positives;
  std::vector<Pixel> negatives;
};

/// One 8-connected component of m, chosen uniformly.
BinaryMask sample_component(const BinaryMask& m, Rng& rng);

/// Crops the component to its tight bbox, resizes it (nearest neighbour) to
/// target_bbox×target_bbox and pastes it at a uniform position on a blank
/// canvas×canvas mask.
BinaryMask place_object(const BinaryMask& component, const SynthSpec& spec, Rng& rng);

/// Foreground pixels from `fg`, background from `bg`; tiles wrap.
RasterImage texturize(const BinaryMask& m, const RasterImage& fg, const RasterImage& bg);

struct SynthObject {
  BinaryMask mask;
  std::vector<RasterImage> images;
  std::vector<std::pair<std::size_t, std::size_t>> texture_pairs;  // (fg, bg) bank indices
};

/// Deterministic per-object seed used by generate_dataset.
std::uint64_t object_seed(std::uint64_t seed, std::size_t index);

SynthObject generate_object(const BinaryMask& source, const TextureBank& bank,
                            const SynthSpec& spec, std::size_t index);

std::vector<SynthObject> generate_dataset(const std::vector<BinaryMask>& source_masks,
                                          const TextureBank& bank, const SynthSpec& spec);

/// dilate(skeletonize(m), Disk(radius)).
BinaryMask thicken_skeleton(const BinaryMask& m, int radius);

struct ZoomResult {
  RasterImage image;
  BinaryMask mask;
  double scale = 1.0;
};

/// Rescales about the bbox centre so the longer bbox edge becomes `p` pixels,
/// keeping the original canvas size (zero padding when zooming out). Returns
/// nullopt when the scaled object would leave the canvas.
std::optional<ZoomResult> zoom_to_scale(const RasterImage& x, const BinaryMask& m, int p);

/// Uniform without replacement: positives from the foreground, negatives
/// from background pixels inside the tight bbox.
PromptSet sample_prompts(const BinaryMask& m, int n_pos, int n_neg, Rng& rng);

/// Parameters of the procedural branching-tree mask generator.
struct BranchingSpec {
  int size = 256;
  int margin = 12;        // keeps skeletons away from the border
  int max_depth = 5;
  int min_children = 1;
  int max_children = 3;
  double trunk_length = 0.35;  // fraction of size
  double length_decay = 0.7;
  double max_turn = 0.9;       // radians
  int segment_jitter = 2;      // polyline wiggle
};

/// Random recursive tree drawn as 8-connected polylines of width 1.
BinaryMask generate_branching_skeleton(const BranchingSpec& spec, Rng& rng);

/// A skeleton dilated with Disk(width / 2); width 1 keeps the skeleton.
BinaryMask generate_tree_mask(const BranchingSpec& spec, int width, Rng& rng);

}  // namespace segmetrics
