#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "segmetrics/commands.hpp"
#include "segmetrics/image_io.hpp"

namespace {

using namespace segmetrics;

void add_run_flags(CLI::App* cmd, RunConfig& cfg, std::string& bank_path, bool& no_resize) {
  cmd->add_option("--r", cfg.treelike.contour_radius, "CPR contour radius")->capture_default_str();
  cmd->add_option("--a", cfg.treelike.global_window, "DoGD global window")->capture_default_str();
  cmd->add_option("--b", cfg.treelike.local_window, "DoGD local window")->capture_default_str();
  cmd->add_option("--group-size", cfg.group_size, "aggregation group size")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "global seed")->capture_default_str();
  cmd->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();
  cmd->add_option("--resize-to", cfg.resize_to, "working resolution")->capture_default_str();
  cmd->add_flag("--no-resize", no_resize, "compute at native resolution");
  cmd->add_option("--clf-c", cfg.probe.inverse_regularization, "probe inverse regularisation C")
      ->capture_default_str();
  cmd->add_option("--boundary-radius", cfg.probe.boundary_radius, "boundary band radius")
      ->capture_default_str();
  cmd->add_option("--filter-bank", bank_path,
                  std::string("filter bank file (fallback: $") + kFilterBankEnv + ")");
}

void finish_run_flags(RunConfig& cfg, const std::string& bank_path, bool no_resize) {
  if (!bank_path.empty()) cfg.filter_bank_path = bank_path;
  cfg.resize = !no_resize;
}

std::vector<double> parse_doubles(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(std::stod(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-likeness, textural separability and correlation analysis for segmentation corpora"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string bank_path;
  bool no_resize = false;

  // metrics
  std::string manifest, out_path;
  bool no_sep = false;
  auto* metrics = app.add_subcommand("metrics", "per-record CPR, DoGD, separability and IoU");
  metrics->add_option("manifest", manifest, "JSONL manifest")->required()->check(CLI::ExistingFile);
  metrics->add_option("-o,--out", out_path, "output CSV")->required();
  metrics->add_flag("--no-separability", no_sep, "skip the texture probe");
  add_run_flags(metrics, cfg, bank_path, no_resize);

  // synth
  std::string texture_dir, out_dir, mask_dir;
  SynthSpec spec;
  SynthSource source;
  int thicken = -1;
  auto* synth = app.add_subcommand("synth", "generate a synthetic tree-like dataset");
  synth->add_option("textures", texture_dir, "directory of texture tiles")->required();
  synth->add_option("-o,--out", out_dir, "output directory")->required();
  synth->add_option("--masks", mask_dir, "directory of source masks (default: procedural trees)");
  synth->add_option("--count", source.count, "procedural objects to generate")->capture_default_str();
  synth->add_option("--widths", source.widths, "procedural line widths")->capture_default_str();
  synth->add_option("--tree-size", source.branching.size, "procedural canvas size")->capture_default_str();
  synth->add_option("--canvas", spec.canvas)->capture_default_str();
  synth->add_option("--bbox", spec.target_bbox, "placed object bbox edge")->capture_default_str();
  synth->add_option("--k", spec.texture_pairs, "texture pairs per object")->capture_default_str();
  synth->add_option("--seed", spec.seed)->capture_default_str();
  synth->add_flag("--preserve-aspect", spec.preserve_aspect, "keep aspect ratio when resizing");
  synth->add_option("--thicken", thicken, "skeletonize then dilate by this radius");
  synth->add_option("--jobs", cfg.jobs)->capture_default_str();

  // correlate
  std::string metrics_csv, metric_column = "cpr", target_column = "iou", report_path, scatter_path;
  std::size_t corr_group = 5;
  auto* correlate_cmd = app.add_subcommand("correlate", "rank/linear correlation of a metric with IoU");
  correlate_cmd->add_option("metrics_csv", metrics_csv)->required()->check(CLI::ExistingFile);
  correlate_cmd->add_option("--metric", metric_column, "metric column")->capture_default_str();
  correlate_cmd->add_option("--target", target_column, "paired column")->capture_default_str();
  correlate_cmd->add_option("--group-size", corr_group)->capture_default_str();
  correlate_cmd->add_option("--report", report_path, "report JSON")->required();
  correlate_cmd->add_option("--scatter", scatter_path, "aggregated scatter CSV")->required();

  // sweep
  std::string grid_kind = "r";
  std::vector<int> sweep_r, sweep_a, sweep_b;
  std::vector<std::string> sweep_c;
  auto* sweep = app.add_subcommand("sweep", "hyperparameter sweep over r, (a,b) or C");
  sweep->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", out_path)->required();
  sweep->add_option("--grid", grid_kind, "r | ab | c")->check(CLI::IsMember({"r", "ab", "c"}))->capture_default_str();
  sweep->add_option("--r-values", sweep_r);
  sweep->add_option("--a-values", sweep_a);
  sweep->add_option("--b-values", sweep_b);
  sweep->add_option("--c-values", sweep_c);
  add_run_flags(sweep, cfg, bank_path, no_resize);

  // ablate-thickness
  std::vector<int> radii{1, 2, 3, 4, 6, 8};
  auto* ablate = app.add_subcommand("ablate-thickness", "CPR/DoGD of skeleton-dilated masks");
  ablate->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  ablate->add_option("-o,--out", out_path)->required();
  ablate->add_option("--radii", radii)->capture_default_str();
  add_run_flags(ablate, cfg, bank_path, no_resize);

  // moran
  bool queen = false;
  auto* moran = app.add_subcommand("moran", "Moran's I of attention maps next to mask CPR");
  moran->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  moran->add_option("-o,--out", out_path)->required();
  moran->add_flag("--queen", queen, "queen contiguity (default rook)");
  add_run_flags(moran, cfg, bank_path, no_resize);

  // prompts
  std::string mask_path, profile = "ishape";
  int n_pos = -1, n_neg = -1;
  std::uint64_t prompt_seed = 0;
  auto* prompts = app.add_subcommand("prompts", "sample a bbox + point prompt set for a mask");
  prompts->add_option("mask", mask_path)->required()->check(CLI::ExistingFile);
  prompts->add_option("--profile", profile, "ishape | dis | mose | plittersdorf")
      ->check(CLI::IsMember({"ishape", "dis", "mose", "plittersdorf"}))->capture_default_str();
  prompts->add_option("--n-pos", n_pos, "override positive count");
  prompts->add_option("--n-neg", n_neg, "override negative count");
  prompts->add_option("--seed", prompt_seed)->capture_default_str();

  // make-bank
  std::uint64_t bank_seed = 0;
  auto* make_bank = app.add_subcommand("make-bank", "write a seeded random filter bank (64x3x7x7)");
  make_bank->add_option("-o,--out", out_path)->required();
  make_bank->add_option("--seed", bank_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    finish_run_flags(cfg, bank_path, no_resize);
    if (*metrics) {
      cfg.separability = !no_sep;
      const auto s = cmd_metrics(manifest, out_path, cfg);
      std::cerr << "records: " << s.total << " succeeded: " << s.succeeded << " skipped: " << s.skipped << "\n";
    } else if (*synth) {
      if (!mask_dir.empty()) source.mask_dir = mask_dir;
      if (thicken >= 0) source.thicken_radius = thicken;
      const auto m = cmd_synth(texture_dir, out_dir, spec, source, cfg.jobs);
      std::cerr << "wrote " << m.string() << "\n";
    } else if (*correlate_cmd) {
      const auto report = cmd_correlate(metrics_csv, metric_column, corr_group, report_path,
                                        scatter_path, target_column);
      std::cout << report_json(report) << "\n";
    } else if (*sweep) {
      SweepGrid grid;
      grid.kind = grid_kind == "r" ? SweepKind::ContourRadius
                  : grid_kind == "ab" ? SweepKind::Windows
                                      : SweepKind::InverseRegularization;
      if (sweep->count("--r-values")) grid.radii = sweep_r;
      if (sweep->count("--a-values")) grid.global_windows = sweep_a;
      if (sweep->count("--b-values")) grid.local_windows = sweep_b;
      if (sweep->count("--c-values")) grid.inverse_regularization = parse_doubles(sweep_c);
      const auto rows = cmd_sweep(manifest, grid, cfg, out_path);
      std::cerr << "grid points: " << rows.size() << "\n";
    } else if (*ablate) {
      cmd_ablate_thickness(manifest, radii, cfg, out_path);
    } else if (*moran) {
      cmd_moran(manifest, queen ? ContiguityWeights::Queen : ContiguityWeights::Rook, cfg, out_path);
    } else if (*prompts) {
      int pos = 5, neg = 5;
      if (profile == "dis" || profile == "mose") neg = 10;
      if (profile == "plittersdorf") {
        pos = 0;
        neg = 2;
      }
      if (n_pos >= 0) pos = n_pos;
      if (n_neg >= 0) neg = n_neg;
      Rng rng(prompt_seed);
      std::cout << prompts_json(sample_prompts(read_mask(mask_path), pos, neg, rng)) << "\n";
    } else if (*make_bank) {
      save_filter_bank(out_path, ConvFilterBank::random(bank_seed));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
