#include "segmetrics/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include "segmetrics/image_io.hpp"

namespace segmetrics {

void TextureBank::validate() const {
  if (textures.size() < 2)
    throw Error(ErrorCode::InsufficientTextures, "texture bank needs at least two tiles, has " +
                                                     std::to_string(textures.size()));
  if (names.size() != textures.size())
    throw Error(ErrorCode::InvalidConfig, "texture names and tiles differ in count");
  for (const auto& t : textures)
    if (t.height() < 1 || t.width() < 1)
      throw Error(ErrorCode::InvalidConfig, "empty texture tile");
}

TextureBank load_texture_bank(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorCode::IoError, "texture directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  TextureBank bank;
  for (const auto& f : files) {
    bank.textures.push_back(read_image(f));
    bank.names.push_back(f.filename().string());
  }
  bank.validate();
  return bank;
}

void SynthSpec::validate() const {
  if (canvas < 1 || target_bbox < 1) throw Error(ErrorCode::InvalidConfig, "sizes must be >= 1");
  if (target_bbox > canvas)
    throw Error(ErrorCode::InvalidConfig, "target bbox larger than canvas");
  if (texture_pairs < 1) throw Error(ErrorCode::InvalidConfig, "need at least one texture pair");
}

BinaryMask sample_component(const BinaryMask& m, Rng& rng) {
  const auto comps = connected_components(m, Connectivity::Eight);
  if (comps.count == 0) throw Error(ErrorCode::EmptyMask, "no component to sample");
  const auto label = static_cast<std::int32_t>(uniform_index(rng, static_cast<std::uint64_t>(comps.count)) + 1);
  return comps.labels == label;
}

namespace {

// Per axis: nearest neighbour when enlarging, OR over the source footprint
// when shrinking. Both keep every source edge row/column represented, so a
// tight bbox maps onto the full output.
std::vector<std::pair<Eigen::Index, Eigen::Index>> axis_sources(Eigen::Index dst, Eigen::Index src) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> spans(static_cast<std::size_t>(dst));
  for (Eigen::Index i = 0; i < dst; ++i) {
    if (dst >= src) {
      const Eigen::Index s = std::min(((2 * i + 1) * src) / (2 * dst), src - 1);
      spans[i] = {s, s + 1};
    } else {
      const Eigen::Index lo = (i * src) / dst;
      const Eigen::Index hi = ((i + 1) * src + dst - 1) / dst;
      spans[i] = {lo, std::min(hi, src)};
    }
  }
  return spans;
}

BinaryMask resize_mask_cover(const BinaryMask& m, Eigen::Index height, Eigen::Index width) {
  const auto ys = axis_sources(height, m.rows());
  const auto xs = axis_sources(width, m.cols());
  // rows first, then columns
  BinaryMask tmp(height, m.cols());
  for (Eigen::Index y = 0; y < height; ++y)
    tmp.row(y) = m.middleRows(ys[y].first, ys[y].second - ys[y].first).colwise().any();
  BinaryMask out(height, width);
  for (Eigen::Index x = 0; x < width; ++x)
    out.col(x) = tmp.middleCols(xs[x].first, xs[x].second - xs[x].first).rowwise().any();
  return out;
}

}  // namespace

BinaryMask place_object(const BinaryMask& component, const SynthSpec& spec, Rng& rng) {
  spec.validate();
  const BBox box = tight_bbox(component);
  int th = spec.target_bbox;
  int tw = spec.target_bbox;
  if (spec.preserve_aspect) {
    const double s = static_cast<double>(spec.target_bbox) / std::max(box.height, box.width);
    th = std::clamp(static_cast<int>(std::lround(box.height * s)), 1, spec.target_bbox);
    tw = std::clamp(static_cast<int>(std::lround(box.width * s)), 1, spec.target_bbox);
  }
  const BinaryMask resized = resize_mask_cover(crop(component, box), th, tw);
  const auto top = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(spec.canvas - th + 1)));
  const auto left = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(spec.canvas - tw + 1)));
  BinaryMask out = BinaryMask::Constant(spec.canvas, spec.canvas, false);
  out.block(top, left, th, tw) = resized;
  return out;
}

RasterImage texturize(const BinaryMask& m, const RasterImage& fg, const RasterImage& bg) {
  if (fg.channels() != bg.channels())
    throw Error(ErrorCode::ChannelMismatch, "foreground and background textures differ in channels");
  if (fg.height() < 1 || fg.width() < 1 || bg.height() < 1 || bg.width() < 1)
    throw Error(ErrorCode::InvalidConfig, "empty texture tile");
  RasterImage out(m.rows(), m.cols(), fg.channels());
  for (int c = 0; c < fg.channels(); ++c) {
    const auto& f = fg.planes[c];
    const auto& b = bg.planes[c];
    auto& o = out.planes[c];
    for (Eigen::Index y = 0; y < m.rows(); ++y)
      for (Eigen::Index x = 0; x < m.cols(); ++x)
        o(y, x) = m(y, x) ? f(y % f.rows(), x % f.cols()) : b(y % b.rows(), x % b.cols());
  }
  return out;
}

std::uint64_t object_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, "object/" + std::to_string(index));
}

SynthObject generate_object(const BinaryMask& source, const TextureBank& bank,
                            const SynthSpec& spec, std::size_t index) {
  bank.validate();
  spec.validate();
  Rng rng(object_seed(spec.seed, index));
  SynthObject obj;
  obj.mask = place_object(sample_component(source, rng), spec, rng);
  const auto n = static_cast<std::uint64_t>(bank.size());
  for (int k = 0; k < spec.texture_pairs; ++k) {
    const auto fg = static_cast<std::size_t>(uniform_index(rng, n));
    auto bg = static_cast<std::size_t>(uniform_index(rng, n - 1));
    if (bg >= fg) ++bg;
    obj.texture_pairs.emplace_back(fg, bg);
    obj.images.push_back(texturize(obj.mask, bank.textures[fg], bank.textures[bg]));
  }
  return obj;
}

std::vector<SynthObject> generate_dataset(const std::vector<BinaryMask>& source_masks,
                                          const TextureBank& bank, const SynthSpec& spec) {
  std::vector<SynthObject> out;
  out.reserve(source_masks.size());
  for (std::size_t i = 0; i < source_masks.size(); ++i)
    out.push_back(generate_object(source_masks[i], bank, spec, i));
  return out;
}

BinaryMask thicken_skeleton(const BinaryMask& m, int radius) {
  return dilate(skeletonize(m), make_element(ElementShape::Disk, radius));
}

std::optional<ZoomResult> zoom_to_scale(const RasterImage& x, const BinaryMask& m, int p) {
  if (p < 1) throw Error(ErrorCode::InvalidConfig, "target edge must be >= 1");
  if (m.rows() != x.height() || m.cols() != x.width())
    throw Error(ErrorCode::DimensionMismatch, "mask and image shapes differ");
  const BBox box = tight_bbox(m);
  const double scale = static_cast<double>(p) / std::max(box.height, box.width);
  const double cy = box.top + 0.5 * (box.height - 1);
  const double cx = box.left + 0.5 * (box.width - 1);
  const auto rows = m.rows();
  const auto cols = m.cols();

  // Continuous extent of the scaled bbox must stay on the canvas.
  constexpr double kSlack = 1e-9;
  const double top = cy + (box.top - 0.5 - cy) * scale;
  const double bottom = cy + (box.bottom() + 0.5 - cy) * scale;
  const double left = cx + (box.left - 0.5 - cx) * scale;
  const double right = cx + (box.right() + 0.5 - cx) * scale;
  if (top < -0.5 - kSlack || left < -0.5 - kSlack || bottom > rows - 0.5 + kSlack ||
      right > cols - 0.5 + kSlack)
    return std::nullopt;

  ZoomResult out;
  out.scale = scale;
  out.mask = BinaryMask::Constant(rows, cols, false);
  out.image = RasterImage(rows, cols, x.channels());
  for (Eigen::Index y = 0; y < rows; ++y) {
    const double sy = cy + (static_cast<double>(y) - cy) / scale;
    const auto ny = static_cast<Eigen::Index>(std::floor(sy + 0.5));
    const auto y0 = static_cast<Eigen::Index>(std::floor(sy));
    const double fy = sy - static_cast<double>(y0);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double sx = cx + (static_cast<double>(c) - cx) / scale;
      const auto nx = static_cast<Eigen::Index>(std::floor(sx + 0.5));
      if (ny >= 0 && ny < rows && nx >= 0 && nx < cols) out.mask(y, c) = m(ny, nx);
      const auto x0 = static_cast<Eigen::Index>(std::floor(sx));
      const double fx = sx - static_cast<double>(x0);
      for (int ch = 0; ch < x.channels(); ++ch) {
        const auto& src = x.planes[ch];
        const auto at = [&](Eigen::Index yy, Eigen::Index xx) -> double {
          return (yy >= 0 && yy < rows && xx >= 0 && xx < cols) ? src(yy, xx) : 0.0;
        };
        const double v = (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x0 + 1)) +
                         fy * ((1 - fx) * at(y0 + 1, x0) + fx * at(y0 + 1, x0 + 1));
        out.image.planes[ch](y, c) = static_cast<float>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return out;
}

PromptSet sample_prompts(const BinaryMask& m, int n_pos, int n_neg, Rng& rng) {
  if (n_pos < 0 || n_neg < 0) throw Error(ErrorCode::InvalidConfig, "prompt counts must be >= 0");
  PromptSet prompts;
  prompts.bbox = tight_bbox(m);
  const auto& box = prompts.bbox;
  std::vector<Pixel> fg, bg;
  for (int y = box.top; y <= box.bottom(); ++y) {
    for (int x = box.left; x <= box.right(); ++x) {
      (m(y, x) ? fg : bg).push_back({y, x});
    }
  }
  if (static_cast<std::size_t>(n_pos) > fg.size())
    throw Error(ErrorCode::InsufficientPixels, "not enough foreground pixels for positive prompts");
  if (static_cast<std::size_t>(n_neg) > bg.size())
    throw Error(ErrorCode::InsufficientPixels, "not enough background pixels inside the bbox");
  for (auto i : sample_without_replacement(fg.size(), static_cast<std::size_t>(n_pos), rng))
    prompts.positives.push_back(fg[i]);
  for (auto i : sample_without_replacement(bg.size(), static_cast<std::size_t>(n_neg), rng))
    prompts.negatives.push_back(bg[i]);
  return prompts;
}

}  // namespace segmetrics
