// Copyright 2026 The slidesep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "slidesep/dataset.hpp"
#include "slidesep/errors.hpp"
#include "slidesep/evaluation.hpp"
#include "slidesep/grid.hpp"
#include "slidesep/metrics.hpp"
#include "slidesep/npy.hpp"
#include "slidesep/parallel.hpp"
#include "slidesep/png.hpp"
#include "slidesep/postprocess.hpp"
#include "slidesep/rng.hpp"
#include "slidesep/synth.hpp"
#include "slidesep/version.hpp"

namespace slidesep::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Missing or inconsistent input; reported with exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs a loader and turns whatever it throws into an InputError.
template <typename Fn>
auto Load(const std::string& what, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw InputError(what + ": " + e.what());
  }
}

bool HasExt(const fs::path& p, const char* ext) { return p.extension() == ext; }

LabelMap LoadLabels(const fs::path& p) {
  return Load("labels " + p.string(),
              [&] { return HasExt(p, ".npy") ? read_labels(p) : read_labels_png(p); });
}

BinaryMask LoadMask(const fs::path& p) {
  return Load("mask " + p.string(),
              [&] { return HasExt(p, ".npy") ? read_mask(p) : read_mask_png(p); });
}

BinaryMask MaskOf(const LabelMap& labels) {
  BinaryMask m(labels.height(), labels.width(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) m[i] = labels[i] != 0;
  return m;
}

int Threads(int requested) { return requested > 0 ? requested : default_thread_count(); }

// ---------------------------------------------------------------- postprocess

struct PostprocessArgs {
  std::string tissue, pen, hdist, vdist;
  std::string input_dir;
  std::string out_dir;
  std::string gt_labels, gt_pen;
  PostProcessConfig cfg;
  bool subtract_pen = false;
  bool overlay = false;
  int threads = 0;
};

struct GtPair {
  LabelMap instances;
  BinaryMask pen;
};

ImageRow ProcessOne(const std::string& name, PredictionBundle bundle,
                    const std::optional<GtPair>& gt, const PostprocessArgs& a,
                    const fs::path& out_dir) {
  Load("bundle " + name, [&] {
    bundle.Validate();
    return 0;
  });
  if (gt) {
    Load("ground truth " + name, [&] {
      RequireSameShape(bundle.tissue_prob, gt->instances, "gt labels");
      RequireSameShape(bundle.tissue_prob, gt->pen, "gt pen");
      return 0;
    });
  }
  if (a.subtract_pen) {
    for (std::size_t i = 0; i < bundle.tissue_prob.size(); ++i) {
      if (bundle.pen_prob[i] >= a.cfg.prob_threshold) bundle.tissue_prob[i] = 0.0;
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Separation sep = separate(bundle, a.cfg);
  const auto t1 = std::chrono::steady_clock::now();

  ImageRow row;
  row.name = name;
  row.n_instances = sep.instance_count();
  row.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (gt) score_row(row, sep.instances, sep.tissue, sep.pen, gt->instances, gt->pen);
  write_prediction(out_dir, sep, report_to_json(make_report({row})), a.overlay);
  return row;
}

int RunPostprocess(const PostprocessArgs& a, std::ostream& out) {
  try {
    a.cfg.Validate();
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  const bool single = !a.tissue.empty() || !a.pen.empty() || !a.hdist.empty() || !a.vdist.empty();
  if (single == !a.input_dir.empty()) {
    throw InputError("give either --input-dir or all of --tissue --pen --hdist --vdist");
  }
  const fs::path out_dir = a.out_dir;

  if (single) {
    if (a.tissue.empty() || a.pen.empty() || a.hdist.empty() || a.vdist.empty()) {
      throw InputError("--tissue, --pen, --hdist and --vdist are all required");
    }
    if (a.gt_labels.empty() && !a.gt_pen.empty()) throw InputError("--gt-pen needs --gt-labels");
    PredictionBundle bundle{
        Load("--tissue", [&] { return read_scalar_map(a.tissue); }),
        Load("--pen", [&] { return read_scalar_map(a.pen); }),
        Load("--hdist", [&] { return read_scalar_map(a.hdist); }),
        Load("--vdist", [&] { return read_scalar_map(a.vdist); })};
    std::optional<GtPair> gt;
    if (!a.gt_labels.empty()) {
      LabelMap labels = LoadLabels(a.gt_labels);
      BinaryMask pen = a.gt_pen.empty() ? BinaryMask(labels.height(), labels.width(), 0)
                                        : LoadMask(a.gt_pen);
      gt = GtPair{std::move(labels), std::move(pen)};
    }
    const std::string name = fs::path(a.tissue).parent_path().filename().string();
    const ImageRow row = ProcessOne(name.empty() ? "image" : name, std::move(bundle), gt, a,
                                    out_dir);
    out << row.n_instances << " instance(s) written to " << out_dir.string() << "\n";
    return kExitOk;
  }

  if (!fs::is_directory(a.input_dir)) throw InputError("--input-dir is not a directory");
  const std::vector<std::string> names = list_bundle_dirs(a.input_dir);
  if (names.empty()) throw InputError("no bundles under " + a.input_dir);
  std::vector<ImageRow> rows(names.size());
  parallel_for(names.size(), Threads(a.threads), [&](std::size_t i) {
    const fs::path dir = fs::path(a.input_dir) / names[i];
    PredictionBundle bundle = Load(names[i], [&] { return read_bundle(dir); });
    std::optional<GtPair> gt;
    if (fs::exists(dir / files::kGtLabels)) {
      LabelMap labels = LoadLabels(dir / files::kGtLabels);
      BinaryMask pen = fs::exists(dir / files::kGtPen)
                           ? LoadMask(dir / files::kGtPen)
                           : BinaryMask(labels.height(), labels.width(), 0);
      gt = GtPair{std::move(labels), std::move(pen)};
    }
    rows[i] = ProcessOne(names[i], std::move(bundle), gt, a, out_dir / names[i]);
  });
  const RunReport report = make_report(std::move(rows));
  write_text(out_dir / files::kReport, report_to_json(report));
  out << names.size() << " image(s) written to " << out_dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------- synth

struct SynthArgs {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  SceneParams scene;
  int min_sections = 3;
  int max_sections = 3;
  NoiseParams noise;
  int threads = 0;
};

// Stream of the per-scene section count draw.
constexpr std::uint64_t kCountStream = 4;

ordered_json SceneParamsJson(const SynthArgs& a) {
  const SceneParams& p = a.scene;
  return {{"height", p.height},
          {"width", p.width},
          {"min_sections", a.min_sections},
          {"max_sections", a.max_sections},
          {"size_min", p.size_min},
          {"size_max", p.size_max},
          {"fragmentation_prob", p.fragmentation_prob},
          {"max_fragments", p.max_fragments},
          {"adjacency_prob", p.adjacency_prob},
          {"n_pen_strokes", p.n_pen_strokes},
          {"min_separation", p.min_separation}};
}

int RunSynth(const SynthArgs& a, std::ostream& out) {
  if (a.min_sections < 0 || a.min_sections > a.max_sections) {
    throw InputError("need 0 <= --min-sections <= --max-sections");
  }
  try {
    a.scene.Validate();
    a.noise.Validate();
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  const fs::path root = a.out_dir;
  fs::create_directories(root);

  std::vector<ordered_json> records(a.n);
  parallel_for(a.n, Threads(a.threads), [&](std::size_t i) {
    SceneParams p = a.scene;
    p.seed = scene_seed(a.seed, i);
    Rng count_rng(p.seed, kCountStream);
    p.n_sections = static_cast<int>(count_rng.uniform_int(a.min_sections, a.max_sections));
    SyntheticScene scene;
    try {
      scene = generate_scene(p);
    } catch (const GenerationError& e) {
      throw InputError(scene_name(i) + ": " + e.what());
    }
    NoiseParams noise = a.noise;
    noise.seed = splitmix64(p.seed ^ 0x4E4F'4953'45ull);
    write_scene(root / scene_name(i), scene, corrupt(scene, noise));
    records[i] = {{"name", scene_name(i)},
                  {"seed", p.seed},
                  {"gt_count", scene.section_count()},
                  {"n_adjacent", scene.adjacent_pairs.size()},
                  {"height", p.height},
                  {"width", p.width}};
  });

  ordered_json manifest{{"seed", a.seed},
                        {"n", a.n},
                        {"scene_params", SceneParamsJson(a)},
                        {"noise",
                         {{"dist_noise_sigma", a.noise.dist_noise_sigma},
                          {"mask_flip_prob", a.noise.mask_flip_prob},
                          {"boundary_jitter", a.noise.boundary_jitter},
                          {"prob_blur_sigma", a.noise.prob_blur_sigma}}},
                        {"scenes", ordered_json::array()}};
  for (ordered_json& r : records) manifest["scenes"].push_back(std::move(r));
  write_text(root / files::kManifest, manifest.dump(2) + "\n");
  out << a.n << " scene(s) written to " << root.string() << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred_dir;
  std::string gt_dir;
  std::string out;
};

std::set<std::string> SubdirsWith(const fs::path& root, const std::vector<const char*>& any_of) {
  std::set<std::string> names;
  for (const fs::directory_entry& e : fs::directory_iterator(root)) {
    if (!e.is_directory()) continue;
    for (const char* f : any_of) {
      if (fs::exists(e.path() / f)) {
        names.insert(e.path().filename().string());
        break;
      }
    }
  }
  return names;
}

int RunEval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(a.pred_dir)) throw InputError("--pred-dir is not a directory");
  if (!fs::is_directory(a.gt_dir)) throw InputError("--gt-dir is not a directory");
  const auto preds = SubdirsWith(a.pred_dir, {files::kInstancesPng, files::kInstancesNpy});
  const auto gts = SubdirsWith(a.gt_dir, {files::kGtLabels});

  std::vector<std::string> orphans;
  for (const std::string& n : preds)
    if (!gts.count(n)) orphans.push_back("prediction without ground truth: " + n);
  for (const std::string& n : gts)
    if (!preds.count(n)) orphans.push_back("ground truth without prediction: " + n);
  if (!orphans.empty()) {
    for (const std::string& o : orphans) err << o << "\n";
    throw InputError(std::to_string(orphans.size()) + " unpaired image(s)");
  }
  if (preds.empty()) throw InputError("no prediction/ground-truth pairs found");

  std::vector<ImageRow> rows;
  for (const std::string& name : preds) {
    const fs::path pd = fs::path(a.pred_dir) / name;
    const fs::path gd = fs::path(a.gt_dir) / name;
    const LabelMap instances = fs::exists(pd / files::kInstancesPng)
                                   ? LoadLabels(pd / files::kInstancesPng)
                                   : LoadLabels(pd / files::kInstancesNpy);
    const BinaryMask tissue = fs::exists(pd / files::kTissueMaskPng)
                                  ? LoadMask(pd / files::kTissueMaskPng)
                                  : MaskOf(instances);
    const BinaryMask pen = fs::exists(pd / files::kPenMaskPng)
                               ? LoadMask(pd / files::kPenMaskPng)
                               : BinaryMask(instances.height(), instances.width(), 0);
    const LabelMap gt_instances = LoadLabels(gd / files::kGtLabels);
    const BinaryMask gt_pen = fs::exists(gd / files::kGtPen)
                                  ? LoadMask(gd / files::kGtPen)
                                  : BinaryMask(gt_instances.height(), gt_instances.width(), 0);
    Load(name, [&] {
      RequireSameShape(instances, gt_instances, "instances vs gt");
      RequireSameShape(tissue, gt_instances, "tissue vs gt");
      RequireSameShape(pen, gt_pen, "pen vs gt");
      return 0;
    });

    ImageRow row;
    row.name = name;
    row.n_instances = max_label(instances);
    if (fs::exists(pd / files::kReport)) {
      const RunReport r = Load(name + " report", [&] {
        return report_from_json(read_text(pd / files::kReport));
      });
      if (r.rows.size() == 1) row.wall_time_ms = r.rows[0].wall_time_ms;
    }
    score_row(row, instances, tissue, pen, gt_instances, gt_pen);
    rows.push_back(std::move(row));
  }
  const RunReport report = make_report(std::move(rows));
  const std::string json = report_to_json(report);
  if (a.out.empty()) {
    out << json;
  } else {
    write_text(a.out, json);
    const Aggregate& g = report.aggregate;
    out << report.rows.size() << " image(s); dice_tissue " << g.dice_tissue.mean
        << ", dice_pen " << g.dice_pen.mean << ", count_error " << g.count_error.mean << " +- "
        << g.count_error.std << "\n";
  }
  return kExitOk;
}

// ----------------------------------------------------------------------- grid

struct GridArgs {
  std::string data_dir;
  GridSpec spec;
  std::string objective = "count_accuracy";
  std::string out_csv;
  std::string out_json;
  int threads = 0;
};

int RunGrid(GridArgs a, std::ostream& out) {
  try {
    a.spec.objective = parse_objective(a.objective);
    a.spec.Validate();
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  if (!fs::is_directory(a.data_dir)) throw InputError("--data-dir is not a directory");
  std::vector<LabelledBundle> data;
  for (const std::string& name : list_bundle_dirs(a.data_dir)) {
    const fs::path dir = fs::path(a.data_dir) / name;
    if (!fs::exists(dir / files::kGtLabels)) continue;
    data.push_back(Load(name, [&] { return read_scene(dir); }));
  }
  if (data.empty()) throw InputError("no labelled scenes under " + a.data_dir);

  const GridResult result = grid_search(a.spec, data, Threads(a.threads));
  if (!a.out_csv.empty()) write_text(a.out_csv, grid_to_csv(result));

  const GridCell& b = result.best;
  ordered_json best{{"objective", objective_name(a.spec.objective)},
                    {"scenes", data.size()},
                    {"cells", result.cells.size()},
                    {"best",
                     {{"k", b.config.k},
                      {"sigma", b.config.sigma},
                      {"window", b.config.window},
                      {"percentile", b.config.t_percentile},
                      {"prob_threshold", b.config.prob_threshold},
                      {"count_accuracy", b.count_accuracy},
                      {"mean_count_error", b.mean_count_error},
                      {"mean_dice", b.mean_dice}}}};
  if (!a.out_json.empty()) write_text(a.out_json, best.dump(2) + "\n");
  out << "best of " << result.cells.size() << " cell(s): k=" << b.config.k
      << " sigma=" << b.config.sigma << " window=" << b.config.window
      << " percentile=" << b.config.t_percentile << " " << objective_name(a.spec.objective)
      << "=" << b.objective << "\n";
  return kExitOk;
}

void AddConfigFlags(CLI::App* cmd, PostProcessConfig& cfg) {
  cmd->add_option("--k", cfg.k, "Histogram bin size in pixels")->capture_default_str();
  cmd->add_option("--sigma", cfg.sigma, "Gaussian smoothing std in bins")->capture_default_str();
  cmd->add_option("--window", cfg.window, "Max-filter window in bins (odd)")
      ->capture_default_str();
  cmd->add_option("--percentile", cfg.t_percentile, "Peak threshold percentile")
      ->capture_default_str();
  cmd->add_option("--prob-threshold", cfg.prob_threshold, "Probability to mask threshold")
      ->capture_default_str();
}

constexpr const char* kEvalLayout = R"(
Pairing: every subdirectory <name> of --pred-dir holding instances.png (or
instances.npy) is matched with <name> in --gt-dir holding gt_labels.png. The
prediction side may also hold tissue_mask.png (default: instances > 0),
pen_mask.png (default: empty) and report.json (wall time is carried over);
the ground-truth side may hold gt_pen.png (default: empty). This is the
layout written by 'postprocess --input-dir' and 'synth'. Unpaired names are
listed and the command exits with status 2.)";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separates tissue cross-sections in whole slide images from predicted "
               "distance-to-centroid maps.",
               "slidesep"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  PostprocessArgs pp;
  CLI::App* pp_cmd = app.add_subcommand("postprocess", "Separate one bundle or a directory");
  pp_cmd->add_option("--tissue", pp.tissue, "Tissue probability map (.npy)");
  pp_cmd->add_option("--pen", pp.pen, "Pen probability map (.npy)");
  pp_cmd->add_option("--hdist", pp.hdist, "Horizontal distance map (.npy)");
  pp_cmd->add_option("--vdist", pp.vdist, "Vertical distance map (.npy)");
  pp_cmd->add_option("--input-dir", pp.input_dir,
                     "Directory of bundle subdirectories (tissue_prob.npy, pen_prob.npy, "
                     "h_dist.npy, v_dist.npy); ground truth next to them is scored");
  pp_cmd->add_option("--out-dir", pp.out_dir, "Output directory")->required();
  pp_cmd->add_option("--gt-labels", pp.gt_labels, "Ground-truth labels (.png or .npy)");
  pp_cmd->add_option("--gt-pen", pp.gt_pen, "Ground-truth pen mask (.png or .npy)");
  AddConfigFlags(pp_cmd, pp.cfg);
  pp_cmd->add_flag("--subtract-pen", pp.subtract_pen, "Remove pen pixels from the tissue mask");
  pp_cmd->add_flag("--overlay", pp.overlay, "Also write overlay.png");
  pp_cmd->add_option("--threads", pp.threads, "Worker threads (0: SLIDESEP_THREADS or all)");

  SynthArgs sy;
  CLI::App* sy_cmd = app.add_subcommand("synth", "Generate synthetic scenes and bundles");
  sy_cmd->add_option("--n", sy.n, "Number of scenes")->required();
  sy_cmd->add_option("--seed", sy.seed, "Master seed")->required();
  sy_cmd->add_option("--out-dir", sy.out_dir, "Output directory")->required();
  sy_cmd->add_option("--height", sy.scene.height)->capture_default_str();
  sy_cmd->add_option("--width", sy.scene.width)->capture_default_str();
  sy_cmd->add_option("--min-sections", sy.min_sections)->capture_default_str();
  sy_cmd->add_option("--max-sections", sy.max_sections)->capture_default_str();
  sy_cmd->add_option("--size-min", sy.scene.size_min, "Smallest main-ellipse semi-axis")
      ->capture_default_str();
  sy_cmd->add_option("--size-max", sy.scene.size_max)->capture_default_str();
  sy_cmd->add_option("--fragmentation-prob", sy.scene.fragmentation_prob)->capture_default_str();
  sy_cmd->add_option("--max-fragments", sy.scene.max_fragments)->capture_default_str();
  sy_cmd->add_option("--adjacency-prob", sy.scene.adjacency_prob)->capture_default_str();
  sy_cmd->add_option("--pen-strokes", sy.scene.n_pen_strokes)->capture_default_str();
  sy_cmd->add_option("--min-separation", sy.scene.min_separation,
                     "Minimum distance between section centroids")
      ->capture_default_str();
  sy_cmd->add_option("--dist-noise", sy.noise.dist_noise_sigma)->capture_default_str();
  sy_cmd->add_option("--flip-prob", sy.noise.mask_flip_prob)->capture_default_str();
  sy_cmd->add_option("--jitter", sy.noise.boundary_jitter)->capture_default_str();
  sy_cmd->add_option("--blur", sy.noise.prob_blur_sigma)->capture_default_str();
  sy_cmd->add_option("--threads", sy.threads);

  EvalArgs ev;
  CLI::App* ev_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
  ev_cmd->add_option("--pred-dir", ev.pred_dir)->required();
  ev_cmd->add_option("--gt-dir", ev.gt_dir)->required();
  ev_cmd->add_option("--out", ev.out, "Report path (default: stdout)");
  ev_cmd->footer(kEvalLayout);

  GridArgs gr;
  CLI::App* gr_cmd = app.add_subcommand("grid", "Grid search of post-processing settings");
  gr_cmd->add_option("--data-dir", gr.data_dir, "Labelled scenes, as written by synth")
      ->required();
  gr_cmd->add_option("--sigmas", gr.spec.sigmas)->delimiter(',')->capture_default_str();
  gr_cmd->add_option("--windows", gr.spec.windows)->delimiter(',')->capture_default_str();
  gr_cmd->add_option("--percentiles", gr.spec.percentiles)->delimiter(',')
      ->capture_default_str();
  gr_cmd->add_option("--ks", gr.spec.ks)->delimiter(',')->capture_default_str();
  gr_cmd->add_option("--prob-threshold", gr.spec.prob_threshold)->capture_default_str();
  gr_cmd->add_option("--objective", gr.objective, "count_accuracy or mean_dice")
      ->capture_default_str();
  gr_cmd->add_option("--out-csv", gr.out_csv, "All cells as CSV");
  gr_cmd->add_option("--out-json", gr.out_json, "Best cell as JSON");
  gr_cmd->add_option("--threads", gr.threads);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*pp_cmd) return RunPostprocess(pp, out);
    if (*sy_cmd) return RunSynth(sy, out);
    if (*ev_cmd) return RunEval(ev, out, err);
    if (*gr_cmd) return RunGrid(gr, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace slidesep::cli
