#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace segmetrics {

/// One evaluation unit of a corpus manifest (one JSON object per line).
struct ManifestRecord {
  std::string id;
  std::filesystem::path image_path;
  std::filesystem::path gt_mask_path;
  std::vector<std::filesystem::path> pred_mask_paths;
  std::string dataset;
  std::string object_class;
  std::optional<std::filesystem::path> attention_map_path;
  std::vector<std::filesystem::path> texture_variants;  // synthetic sets: all K images
};

/// Relative paths are resolved against the manifest's directory. Throws
/// Error(InvalidManifest) on malformed lines, missing fields or duplicate ids.
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

/// Paths under `path`'s directory are written relative to it.
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records);

}  // namespace segmetrics
