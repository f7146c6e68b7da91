#include "segmetrics/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"
#include "segmetrics/csv.hpp"
#include "segmetrics/image_io.hpp"

namespace segmetrics {

namespace {

using ordered_json = nlohmann::ordered_json;

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// thrown by any task is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string error_name(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return std::string(to_string(err->code()));
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return "IoError";
  return "InternalError";
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void check_grid_values(const std::vector<int>& values, int min_value, const char* what) {
  if (values.empty()) throw Error(ErrorCode::InvalidGrid, std::string("empty ") + what + " grid");
  for (int v : values)
    if (v < min_value)
      throw Error(ErrorCode::InvalidGrid, std::string(what) + " value " + std::to_string(v) +
                                              " below " + std::to_string(min_value));
}

}  // namespace

void RunConfig::validate() const {
  if (treelike.contour_radius < 1) throw Error(ErrorCode::InvalidConfig, "--r must be >= 1");
  if (treelike.local_window < 1 || treelike.global_window <= treelike.local_window)
    throw Error(ErrorCode::InvalidConfig, "--a must exceed --b and --b must be >= 1");
  if (group_size < 1) throw Error(ErrorCode::InvalidConfig, "--group-size must be >= 1");
  if (resize && resize_to < 1) throw Error(ErrorCode::InvalidConfig, "--resize-to must be >= 1");
  if (jobs < 1) throw Error(ErrorCode::InvalidConfig, "--jobs must be >= 1");
  probe.validate();
}

ConvFilterBank resolve_filter_bank(const RunConfig& cfg, std::string* source) {
  if (cfg.filter_bank_path) {
    if (source) *source = cfg.filter_bank_path->string();
    return load_filter_bank(*cfg.filter_bank_path);
  }
  if (const char* env = std::getenv(kFilterBankEnv); env != nullptr && *env != '\0') {
    if (source) *source = env;
    return load_filter_bank(env);
  }
  if (source) *source = "random(seed=" + std::to_string(cfg.seed) + ")";
  return ConvFilterBank::random(cfg.seed);
}

PreparedRecord prepare_record(const ManifestRecord& record, const RunConfig& cfg, bool load_image) {
  PreparedRecord out;
  BinaryMask gt = read_mask(record.gt_mask_path);
  if (load_image) {
    out.image = read_image(record.image_path);
    if (out.image.height() != gt.rows() || out.image.width() != gt.cols())
      throw Error(ErrorCode::DimensionMismatch, "image and ground-truth mask shapes differ");
  }
  const Eigen::Index h = cfg.resize ? cfg.resize_to : gt.rows();
  const Eigen::Index w = cfg.resize ? cfg.resize_to : gt.cols();
  out.gt = resize_mask_nn(gt, h, w);
  if (load_image) out.image = resize_image(out.image, h, w);

  if (!record.pred_mask_paths.empty()) {
    std::vector<BinaryMask> preds;
    preds.reserve(record.pred_mask_paths.size());
    for (const auto& p : record.pred_mask_paths) {
      BinaryMask pred = read_mask(p);
      if (!cfg.resize && (pred.rows() != h || pred.cols() != w))
        throw Error(ErrorCode::DimensionMismatch, "prediction shape differs from ground truth");
      preds.push_back(resize_mask_nn(pred, h, w));
    }
    out.prediction = preds.size() == 1 ? std::move(preds.front()) : majority_vote(preds);
  }
  return out;
}

std::vector<MetricsRow> compute_metrics(const std::vector<ManifestRecord>& records,
                                        const RunConfig& cfg, const ConvFilterBank* bank) {
  cfg.validate();
  if (cfg.separability && bank == nullptr)
    throw Error(ErrorCode::InvalidConfig, "separability requested without a filter bank");
  std::vector<MetricsRow> rows(records.size());
  parallel_for(records.size(), cfg.jobs, [&](std::size_t i) {
    const auto& rec = records[i];
    auto& row = rows[i];
    row.id = rec.id;
    row.dataset = rec.dataset;
    row.object_class = rec.object_class;
    try {
      const auto prepared = prepare_record(rec, cfg, cfg.separability);
      row.fg_pixels = foreground_count(prepared.gt);
      if (row.fg_pixels == 0) throw Error(ErrorCode::EmptyMask, "ground-truth mask is empty");
      row.cpr = cpr(prepared.gt, cfg.treelike.contour_radius);
      row.dogd = dogd(prepared.gt, cfg.treelike);
      if (cfg.separability) {
        ProbeConfig probe = cfg.probe;
        probe.seed = derive_seed(cfg.seed, rec.id);
        Rng rng(probe.seed);
        row.separability = textural_separability(prepared.image, prepared.gt, *bank, probe, rng);
      }
      if (prepared.prediction) row.iou = iou(*prepared.prediction, prepared.gt);
    } catch (const std::exception& e) {
      row.cpr.reset();
      row.dogd.reset();
      row.separability.reset();
      row.iou.reset();
      row.skipped_reason = error_name(e);
      row.error_message = e.what();
    }
  });
  std::sort(rows.begin(), rows.end(),
            [](const MetricsRow& a, const MetricsRow& b) { return a.id < b.id; });
  return rows;
}

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols{"id",         "dataset", "object_class",
                                             "cpr",        "dogd",    "separability",
                                             "iou",        "fg_pixels", "skipped_reason"};
  return cols;
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows) {
  auto out = open_output(path);
  csv::write_row(out, metrics_columns());
  for (const auto& r : rows) {
    csv::write_row(out, {r.id, r.dataset, r.object_class, csv::number(r.cpr), csv::number(r.dogd),
                         csv::number(r.separability), csv::number(r.iou),
                         std::to_string(r.fg_pixels), r.skipped_reason});
  }
}

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  CsvTable table;
  if (!csv::read_row(in, table.header)) throw Error(ErrorCode::FormatError, "empty CSV " + path.string());
  std::vector<std::string> fields;
  while (csv::read_row(in, fields)) {
    if (fields.size() == 1 && fields.front().empty()) continue;
    if (fields.size() != table.header.size())
      throw Error(ErrorCode::FormatError, "CSV row width differs from header in " + path.string());
    table.rows.push_back(fields);
  }
  return table;
}

RunSummary cmd_metrics(const std::filesystem::path& manifest, const std::filesystem::path& out_csv,
                       const RunConfig& cfg) {
  cfg.validate();
  const auto records = read_manifest(manifest);
  std::optional<ConvFilterBank> bank;
  if (cfg.separability) {
    std::string source;
    bank = resolve_filter_bank(cfg, &source);
    if (!cfg.filter_bank_path && std::getenv(kFilterBankEnv) == nullptr)
      std::cerr << "warning: no filter bank given, using " << source << "\n";
  }
  const auto rows = compute_metrics(records, cfg, bank ? &*bank : nullptr);
  write_metrics_csv(out_csv, rows);

  RunSummary summary;
  summary.total = rows.size();
  auto errors = open_output(out_csv.string() + ".errors.jsonl");
  for (const auto& r : rows) {
    if (r.ok()) {
      ++summary.succeeded;
      continue;
    }
    ++summary.skipped;
    ordered_json j;
    j["id"] = r.id;
    j["reason"] = r.skipped_reason;
    j["message"] = r.error_message;
    errors << j.dump() << '\n';
  }
  if (summary.succeeded == 0)
    throw Error(ErrorCode::EmptyList, "no record succeeded (" + std::to_string(summary.total) + " total)");
  return summary;
}

std::filesystem::path cmd_synth(const std::filesystem::path& texture_dir,
                                const std::filesystem::path& out_dir, const SynthSpec& spec,
                                const SynthSource& source, int jobs) {
  spec.validate();
  const TextureBank bank = load_texture_bank(texture_dir);

  std::vector<BinaryMask> sources;
  if (source.mask_dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(*source.mask_dir))
      if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) sources.push_back(read_mask(f));
  } else {
    if (source.widths.empty()) throw Error(ErrorCode::InvalidConfig, "no tree line widths given");
    sources.resize(source.count);
    parallel_for(source.count, jobs, [&](std::size_t i) {
      Rng rng(derive_seed(spec.seed, "tree/" + std::to_string(i)));
      sources[i] = generate_tree_mask(source.branching, source.widths[i % source.widths.size()], rng);
    });
  }
  if (sources.empty()) throw Error(ErrorCode::EmptyList, "no source masks");

  std::filesystem::create_directories(out_dir);
  std::vector<ManifestRecord> records(sources.size());
  parallel_for(sources.size(), jobs, [&](std::size_t i) {
    char id[32];
    std::snprintf(id, sizeof(id), "obj_%05zu", i);
    BinaryMask src = sources[i];
    SynthObject obj;
    if (source.thicken_radius) {
      // Thicken the chosen component before it is resized and placed.
      Rng rng(object_seed(spec.seed, i));
      const BinaryMask comp = thicken_skeleton(sample_component(src, rng), *source.thicken_radius);
      obj = generate_object(comp, bank, spec, i);
    } else {
      obj = generate_object(src, bank, spec, i);
    }
    const auto dir = out_dir / id;
    std::filesystem::create_directories(dir);
    auto& rec = records[i];
    rec.id = id;
    rec.dataset = "synthetic";
    rec.gt_mask_path = dir / "mask.png";
    write_mask_png(rec.gt_mask_path, obj.mask);
    for (std::size_t k = 0; k < obj.images.size(); ++k) {
      const auto img = dir / ("img_" + std::to_string(k) + ".png");
      write_image_png(img, obj.images[k]);
      rec.texture_variants.push_back(img);
    }
    rec.image_path = rec.texture_variants.front();
  });
  const auto manifest = out_dir / "manifest.jsonl";
  write_manifest(manifest, records);
  return manifest;
}

MetricSeries load_series(const std::filesystem::path& metrics_csv, const std::string& metric_column,
                         const std::string& iou_column) {
  const auto table = read_csv(metrics_csv);
  const auto metric_col = table.column(metric_column);
  const auto iou_col = table.column(iou_column);
  if (!metric_col) throw Error(ErrorCode::FormatError, "no column '" + metric_column + "'");
  if (!iou_col) throw Error(ErrorCode::FormatError, "no column '" + iou_column + "'");
  const auto id_col = table.column("id");
  const auto skip_col = table.column("skipped_reason");
  MetricSeries series;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (skip_col && !row[*skip_col].empty()) continue;
    const auto m = csv::parse_number(row[*metric_col]);
    const auto v = csv::parse_number(row[*iou_col]);
    if (!m || !v) continue;
    series.push_back(id_col ? row[*id_col] : std::to_string(i), *m, *v);
  }
  return series;
}

std::string report_json(const CorrelationReport& report) {
  ordered_json j;
  const auto coef = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  j["metric"] = report.metric_name;
  j["n"] = report.n;
  j["group_size"] = report.group_size;
  j["kendall_tau"] = coef(report.kendall_tau);
  j["spearman_rho"] = coef(report.spearman_rho);
  j["pearson_r"] = coef(report.pearson_r);
  if (!report.reason.empty()) j["reason"] = report.reason;
  return j.dump(2);
}

CorrelationReport cmd_correlate(const std::filesystem::path& metrics_csv,
                                const std::string& metric_column, std::size_t group_size,
                                const std::filesystem::path& out_json,
                                const std::filesystem::path& out_scatter_csv,
                                const std::string& iou_column) {
  if (group_size < 1) throw Error(ErrorCode::InvalidConfig, "group size must be >= 1");
  const auto series = load_series(metrics_csv, metric_column, iou_column);
  const auto report = correlate(series, group_size, metric_column);
  {
    auto out = open_output(out_json);
    out << report_json(report) << '\n';
  }
  const auto agg = aggregate(series, group_size);
  auto out = open_output(out_scatter_csv);
  csv::write_row(out, {"members", metric_column, iou_column});
  for (std::size_t i = 0; i < agg.size(); ++i)
    csv::write_row(out, {agg.record_ids[i], csv::number(agg.metric_values[i]), csv::number(agg.iou_values[i])});
  return report;
}

std::size_t SweepGrid::points() const {
  switch (kind) {
    case SweepKind::ContourRadius: return radii.size();
    case SweepKind::Windows: return global_windows.size() * local_windows.size();
    case SweepKind::InverseRegularization: return inverse_regularization.size();
  }
  return 0;
}

namespace {

struct GridPoint {
  int r = 0, a = 0, b = 0;
  double c = 0.0;
};

std::vector<GridPoint> expand(const SweepGrid& grid, const RunConfig& cfg) {
  std::vector<GridPoint> points;
  const GridPoint base{cfg.treelike.contour_radius, cfg.treelike.global_window,
                       cfg.treelike.local_window, cfg.probe.inverse_regularization};
  switch (grid.kind) {
    case SweepKind::ContourRadius:
      check_grid_values(grid.radii, 1, "R");
      for (int r : grid.radii) {
        auto p = base;
        p.r = r;
        points.push_back(p);
      }
      break;
    case SweepKind::Windows:
      check_grid_values(grid.global_windows, 2, "a");
      check_grid_values(grid.local_windows, 1, "b");
      for (int a : grid.global_windows)
        for (int b : grid.local_windows) {
          auto p = base;
          p.a = a;
          p.b = b;
          points.push_back(p);
        }
      break;
    case SweepKind::InverseRegularization:
      if (grid.inverse_regularization.empty()) throw Error(ErrorCode::InvalidGrid, "empty C grid");
      for (double c : grid.inverse_regularization) {
        if (!(c > 0.0)) throw Error(ErrorCode::InvalidGrid, "C values must be > 0");
        auto p = base;
        p.c = c;
        points.push_back(p);
      }
      break;
  }
  return points;
}

}  // namespace

std::vector<SweepRow> run_sweep(const std::vector<ManifestRecord>& records, const SweepGrid& grid,
                                const RunConfig& cfg, const ConvFilterBank* bank) {
  cfg.validate();
  const auto points = expand(grid, cfg);
  const bool needs_image = grid.kind == SweepKind::InverseRegularization;
  if (needs_image && bank == nullptr)
    throw Error(ErrorCode::InvalidConfig, "C sweep requires a filter bank");

  struct PerRecord {
    std::optional<double> iou;
    std::vector<std::optional<double>> values;
    std::vector<std::string> errors;
  };
  std::vector<PerRecord> per(records.size());
  parallel_for(records.size(), cfg.jobs, [&](std::size_t i) {
    auto& out = per[i];
    out.values.assign(points.size(), std::nullopt);
    out.errors.assign(points.size(), std::string());
    PreparedRecord prepared;
    try {
      prepared = prepare_record(records[i], cfg, needs_image);
      if (!prepared.prediction) return;
      out.iou = iou(*prepared.prediction, prepared.gt);
    } catch (const std::exception& e) {
      out.errors.assign(points.size(), error_name(e));
      return;
    }
    std::optional<FeatureMap> feat;
    for (std::size_t p = 0; p < points.size(); ++p) {
      try {
        switch (grid.kind) {
          case SweepKind::ContourRadius:
            out.values[p] = cpr(prepared.gt, points[p].r);
            break;
          case SweepKind::Windows:
            out.values[p] = dogd(prepared.gt, points[p].a, points[p].b);
            break;
          case SweepKind::InverseRegularization: {
            ProbeConfig probe = cfg.probe;
            probe.inverse_regularization = points[p].c;
            probe.seed = derive_seed(cfg.seed, records[i].id);
            Rng rng(probe.seed);
            if (!feat) feat = extract_features(prepared.image, *bank);
            const BinaryMask object = resize_mask_nn(prepared.gt, feat->height, feat->width);
            const BinaryMask band = boundary_band(object, probe.boundary_radius);
            const auto samples = collect_samples(*feat, object, band, probe, rng);
            out.values[p] = train_probe(samples, probe, rng).test_accuracy;
            break;
          }
        }
      } catch (const std::exception& e) {
        out.errors[p] = error_name(e);
      }
    }
  });

  std::vector<SweepRow> rows;
  for (std::size_t p = 0; p < points.size(); ++p) {
    SweepRow row;
    row.r = points[p].r;
    row.a = points[p].a;
    row.b = points[p].b;
    row.clf_c = points[p].c;
    switch (grid.kind) {
      case SweepKind::ContourRadius: row.parameter = "r"; row.metric = "cpr"; break;
      case SweepKind::Windows: row.parameter = "a,b"; row.metric = "dogd"; break;
      case SweepKind::InverseRegularization: row.parameter = "clf_c"; row.metric = "separability"; break;
    }
    MetricSeries series;
    std::set<std::string> failures;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (per[i].values[p] && per[i].iou) series.push_back(records[i].id, *per[i].values[p], *per[i].iou);
      if (!per[i].errors[p].empty()) failures.insert(per[i].errors[p]);
    }
    row.n_records = series.size();
    row.report = correlate(series, cfg.group_size, row.metric);
    for (const auto& f : failures) row.error += (row.error.empty() ? "" : ";") + f;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto out = open_output(path);
  csv::write_row(out, {"parameter", "r", "a", "b", "clf_c", "metric", "n_records", "n_points",
                       "group_size", "kendall_tau", "spearman_rho", "pearson_r", "reason", "errors"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.parameter, std::to_string(r.r), std::to_string(r.a), std::to_string(r.b),
                         csv::number(r.clf_c), r.metric, std::to_string(r.n_records),
                         std::to_string(r.report.n), std::to_string(r.report.group_size),
                         csv::number(r.report.kendall_tau), csv::number(r.report.spearman_rho),
                         csv::number(r.report.pearson_r), r.report.reason, r.error});
  }
}

std::vector<SweepRow> cmd_sweep(const std::filesystem::path& manifest, const SweepGrid& grid,
                                const RunConfig& cfg, const std::filesystem::path& out_csv) {
  cfg.validate();
  expand(grid, cfg);  // reject empty grids before any I/O
  const auto records = read_manifest(manifest);
  std::optional<ConvFilterBank> bank;
  if (grid.kind == SweepKind::InverseRegularization) bank = resolve_filter_bank(cfg);
  auto rows = run_sweep(records, grid, cfg, bank ? &*bank : nullptr);
  write_sweep_csv(out_csv, rows);
  return rows;
}

std::vector<ThicknessRow> run_ablate_thickness(const std::vector<ManifestRecord>& records,
                                               const std::vector<int>& radii, const RunConfig& cfg) {
  cfg.validate();
  check_grid_values(radii, 0, "radius");
  std::vector<std::vector<ThicknessRow>> per(records.size());
  parallel_for(records.size(), cfg.jobs, [&](std::size_t i) {
    auto& rows = per[i];
    std::optional<BinaryMask> skeleton;
    std::string failure;
    try {
      const auto prepared = prepare_record(records[i], cfg, false);
      if (foreground_count(prepared.gt) == 0) throw Error(ErrorCode::EmptyMask, "ground-truth mask is empty");
      skeleton = skeletonize(prepared.gt);
    } catch (const std::exception& e) {
      failure = error_name(e);
    }
    for (int radius : radii) {
      ThicknessRow row;
      row.id = records[i].id;
      row.radius = radius;
      if (!skeleton) {
        row.skipped_reason = failure;
      } else {
        try {
          const BinaryMask thick = dilate(*skeleton, make_element(ElementShape::Disk, radius));
          row.fg_pixels = foreground_count(thick);
          row.cpr = cpr(thick, cfg.treelike.contour_radius);
          row.dogd = dogd(thick, cfg.treelike);
        } catch (const std::exception& e) {
          row.cpr.reset();
          row.dogd.reset();
          row.skipped_reason = error_name(e);
        }
      }
      rows.push_back(std::move(row));
    }
  });
  std::vector<ThicknessRow> rows;
  for (auto& r : per) rows.insert(rows.end(), r.begin(), r.end());
  std::sort(rows.begin(), rows.end(), [](const ThicknessRow& a, const ThicknessRow& b) {
    return a.id != b.id ? a.id < b.id : a.radius < b.radius;
  });
  return rows;
}

std::vector<ThicknessRow> cmd_ablate_thickness(const std::filesystem::path& manifest,
                                               const std::vector<int>& radii, const RunConfig& cfg,
                                               const std::filesystem::path& out_csv) {
  check_grid_values(radii, 0, "radius");
  const auto records = read_manifest(manifest);
  auto rows = run_ablate_thickness(records, radii, cfg);
  auto out = open_output(out_csv);
  csv::write_row(out, {"id", "radius", "cpr", "dogd", "fg_pixels", "skipped_reason"});
  for (const auto& r : rows)
    csv::write_row(out, {r.id, std::to_string(r.radius), csv::number(r.cpr), csv::number(r.dogd),
                         std::to_string(r.fg_pixels), r.skipped_reason});
  return rows;
}

std::vector<MoranRow> cmd_moran(const std::filesystem::path& manifest, ContiguityWeights weighting,
                                const RunConfig& cfg, const std::filesystem::path& out_csv) {
  cfg.validate();
  const auto records = read_manifest(manifest);
  std::vector<MoranRow> rows(records.size());
  parallel_for(records.size(), cfg.jobs, [&](std::size_t i) {
    auto& row = rows[i];
    row.id = records[i].id;
    try {
      if (!records[i].attention_map_path)
        throw Error(ErrorCode::IoError, "record has no attention map");
      row.morans_i = morans_i(read_attention_map(*records[i].attention_map_path), weighting);
      const auto prepared = prepare_record(records[i], cfg, false);
      row.cpr = cpr(prepared.gt, cfg.treelike.contour_radius);
    } catch (const std::exception& e) {
      row.morans_i.reset();
      row.cpr.reset();
      row.skipped_reason = error_name(e);
    }
  });
  std::sort(rows.begin(), rows.end(), [](const MoranRow& a, const MoranRow& b) { return a.id < b.id; });
  auto out = open_output(out_csv);
  csv::write_row(out, {"id", "morans_i", "cpr", "skipped_reason"});
  for (const auto& r : rows)
    csv::write_row(out, {r.id, csv::number(r.morans_i), csv::number(r.cpr), r.skipped_reason});
  return rows;
}

std::string prompts_json(const PromptSet& prompts) {
  ordered_json j;
  j["bbox"] = {prompts.bbox.top, prompts.bbox.left, prompts.bbox.height, prompts.bbox.width};
  ordered_json pos = ordered_json::array();
  for (const auto& p : prompts.positives) pos.push_back({p.row, p.col});
  ordered_json neg = ordered_json::array();
  for (const auto& p : prompts.negatives) neg.push_back({p.row, p.col});
  j["pos"] = pos;
  j["neg"] = neg;
  return j.dump();
}

}  // namespace segmetrics
