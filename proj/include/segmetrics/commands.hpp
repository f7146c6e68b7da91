#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segmetrics/manifest.hpp"
#include "segmetrics/separability.hpp"
#include "segmetrics/stats.hpp"
#include "segmetrics/synthgen.hpp"
#include "segmetrics/treelike.hpp"

namespace segmetrics {

inline constexpr const char* kFilterBankEnv = "SEGMETRICS_FILTER_BANK";

struct RunConfig {
  TreelikeConfig treelike;
  std::size_t group_size = 5;
  ProbeConfig probe;
  int resize_to = 1024;
  bool resize = true;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::optional<std::filesystem::path> filter_bank_path;
  bool separability = true;

  void validate() const;
};

/// --filter-bank, then $SEGMETRICS_FILTER_BANK, then a seeded random bank
/// with the canonical geometry (reported through `source`).
ConvFilterBank resolve_filter_bank(const RunConfig& cfg, std::string* source = nullptr);

struct MetricsRow {
  std::string id;
  std::string dataset;
  std::string object_class;
  std::optional<double> cpr;
  std::optional<double> dogd;
  std::optional<double> separability;
  std::optional<double> iou;
  std::int64_t fg_pixels = 0;
  std::string skipped_reason;
  std::string error_message;

  bool ok() const { return skipped_reason.empty(); }
};

/// Ground truth, fused prediction and image at working resolution.
struct PreparedRecord {
  BinaryMask gt;
  std::optional<BinaryMask> prediction;  // majority vote when several
  RasterImage image;
};

PreparedRecord prepare_record(const ManifestRecord& record, const RunConfig& cfg,
                              bool load_image = true);

std::vector<MetricsRow> compute_metrics(const std::vector<ManifestRecord>& records,
                                        const RunConfig& cfg, const ConvFilterBank* bank);

const std::vector<std::string>& metrics_columns();
void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);
/// Rows keyed by column name, plus the header order.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

struct RunSummary {
  std::size_t total = 0;
  std::size_t succeeded = 0;
  std::size_t skipped = 0;
};

/// Writes `out_csv` plus `<out_csv>.errors.jsonl`; throws when no record
/// succeeds.
RunSummary cmd_metrics(const std::filesystem::path& manifest, const std::filesystem::path& out_csv,
                       const RunConfig& cfg);

/// Where synthetic source masks come from.
struct SynthSource {
  std::optional<std::filesystem::path> mask_dir;  // real masks, one object per file
  std::size_t count = 10;                         // procedural trees otherwise
  BranchingSpec branching;
  std::vector<int> widths{1, 3, 5, 9, 15};
  std::optional<int> thicken_radius;              // skeleton-dilation ablation
};

/// Writes <out>/<id>/mask.png, <out>/<id>/img_<k>.png and <out>/manifest.jsonl.
std::filesystem::path cmd_synth(const std::filesystem::path& texture_dir,
                                const std::filesystem::path& out_dir, const SynthSpec& spec,
                                const SynthSource& source, int jobs = 1);

/// Metric/IoU series from a metrics CSV, skipping rows with a skipped_reason
/// or an empty value in either column.
MetricSeries load_series(const std::filesystem::path& metrics_csv, const std::string& metric_column,
                         const std::string& iou_column = "iou");

std::string report_json(const CorrelationReport& report);

CorrelationReport cmd_correlate(const std::filesystem::path& metrics_csv,
                                const std::string& metric_column, std::size_t group_size,
                                const std::filesystem::path& out_json,
                                const std::filesystem::path& out_scatter_csv,
                                const std::string& iou_column = "iou");

enum class SweepKind { ContourRadius, Windows, InverseRegularization };

struct SweepGrid {
  SweepKind kind = SweepKind::ContourRadius;
  std::vector<int> radii{1, 3, 5, 7, 9, 11};
  std::vector<int> global_windows{63, 127, 255};
  std::vector<int> local_windows{3, 7, 15, 31};
  std::vector<double> inverse_regularization{2.0, 1.0, 0.5};

  std::size_t points() const;
};

struct SweepRow {
  std::string parameter;
  int r = 0, a = 0, b = 0;
  double clf_c = 0.0;
  std::string metric;
  std::size_t n_records = 0;
  CorrelationReport report;
  std::string error;
};

std::vector<SweepRow> run_sweep(const std::vector<ManifestRecord>& records, const SweepGrid& grid,
                                const RunConfig& cfg, const ConvFilterBank* bank);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
std::vector<SweepRow> cmd_sweep(const std::filesystem::path& manifest, const SweepGrid& grid,
                                const RunConfig& cfg, const std::filesystem::path& out_csv);

struct ThicknessRow {
  std::string id;
  int radius = 0;
  std::optional<double> cpr;
  std::optional<double> dogd;
  std::int64_t fg_pixels = 0;
  std::string skipped_reason;
};

std::vector<ThicknessRow> run_ablate_thickness(const std::vector<ManifestRecord>& records,
                                               const std::vector<int>& radii, const RunConfig& cfg);
std::vector<ThicknessRow> cmd_ablate_thickness(const std::filesystem::path& manifest,
                                               const std::vector<int>& radii, const RunConfig& cfg,
                                               const std::filesystem::path& out_csv);

struct MoranRow {
  std::string id;
  std::optional<double> morans_i;
  std::optional<double> cpr;
  std::string skipped_reason;
};

/// Moran's I of each record's attention map alongside the mask CPR.
std::vector<MoranRow> cmd_moran(const std::filesystem::path& manifest, ContiguityWeights weighting,
                                const RunConfig& cfg, const std::filesystem::path& out_csv);

std::string prompts_json(const PromptSet& prompts);

}  // namespace segmetrics
