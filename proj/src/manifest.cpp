#include "segmetrics/manifest.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "segmetrics/error.hpp"

namespace segmetrics {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string relativise(const std::filesystem::path& base, const std::filesystem::path& p) {
  if (p.is_relative()) return p.generic_string();
  const auto rel = p.lexically_relative(base);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

std::string required_string(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j[key].is_string())
    throw Error(ErrorCode::InvalidManifest,
                "line " + std::to_string(line) + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

std::string optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return {};
  if (!j[key].is_string()) throw Error(ErrorCode::InvalidManifest, std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<std::filesystem::path> path_list(const json& j, const char* key,
                                             const std::filesystem::path& base) {
  std::vector<std::filesystem::path> out;
  if (!j.contains(key) || j[key].is_null()) return out;
  if (!j[key].is_array()) throw Error(ErrorCode::InvalidManifest, std::string("field '") + key + "' must be a list");
  for (const auto& v : j[key]) {
    if (!v.is_string()) throw Error(ErrorCode::InvalidManifest, std::string("field '") + key + "' must hold strings");
    out.push_back(resolve(base, v.get<std::string>()));
  }
  return out;
}

}  // namespace

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  const auto base = path.parent_path();
  std::vector<ManifestRecord> records;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidManifest, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object())
      throw Error(ErrorCode::InvalidManifest, "line " + std::to_string(line_no) + ": not an object");
    ManifestRecord r;
    r.id = required_string(j, "id", line_no);
    r.image_path = resolve(base, required_string(j, "image_path", line_no));
    r.gt_mask_path = resolve(base, required_string(j, "gt_mask_path", line_no));
    r.pred_mask_paths = path_list(j, "pred_mask_paths", base);
    r.dataset = optional_string(j, "dataset");
    r.object_class = optional_string(j, "object_class");
    if (const auto att = optional_string(j, "attention_map_path"); !att.empty())
      r.attention_map_path = resolve(base, att);
    r.texture_variants = path_list(j, "texture_variants", base);
    if (!seen.insert(r.id).second)
      throw Error(ErrorCode::InvalidManifest, "duplicate record id '" + r.id + "'");
    records.push_back(std::move(r));
  }
  return records;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records) {
  const auto base = path.parent_path();
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write manifest " + path.string());
    for (const auto& r : records) {
      json j;
      j["id"] = r.id;
      j["image_path"] = relativise(base, r.image_path);
      j["gt_mask_path"] = relativise(base, r.gt_mask_path);
      json preds = json::array();
      for (const auto& p : r.pred_mask_paths) preds.push_back(relativise(base, p));
      j["pred_mask_paths"] = preds;
      j["dataset"] = r.dataset;
      if (!r.object_class.empty()) j["object_class"] = r.object_class;
      if (r.attention_map_path) j["attention_map_path"] = relativise(base, *r.attention_map_path);
      if (!r.texture_variants.empty()) {
        json variants = json::array();
        for (const auto& p : r.texture_variants) variants.push_back(relativise(base, p));
        j["texture_variants"] = variants;
      }
      out << j.dump() << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace segmetrics
