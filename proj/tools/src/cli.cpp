#include "textanchor_cli/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <thread>
#include <vector>

#include "textanchor/datasets_io.hpp"
#include "textanchor/decode.hpp"
#include "textanchor/error.hpp"
#include "textanchor/evalkit.hpp"
#include "textanchor/map_io.hpp"
#include "textanchor/polyiou.hpp"
#include "textanchor/targets.hpp"

namespace textanchor::cli {
namespace {

namespace fs = std::filesystem;

/// Bad files, unreadable lines, malformed flags: exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) {
          try {
            fn(k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

void report(std::ostream& err, const fs::path& file, const std::vector<io::LineError>& errors) {
  for (const auto& e : errors) fmt::print(err, "{}:{}: {}\n", file.string(), e.line, e.message);
}

using GtByImage = std::map<std::string, std::vector<GroundTruthItem>>;
using ProposalsByImage = std::map<std::string, std::vector<Proposal>>;

/// Every regular file of `dir` parsed as one image's ground truth.
GtByImage read_gt_dir(const fs::path& dir, io::GtFormat format, std::ostream& err) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  GtByImage out;
  bool failed = false;
  for (const auto& file : files) {
    const auto result = io::read_annotation_file(file, format);
    report(err, file, result.errors);
    failed = failed || !result.errors.empty();
    const std::string id = io::image_id_from_path(file);
    if (out.count(id)) throw InputError(fmt::format("two ground-truth files map to image id '{}'", id));
    auto& items = out[id];
    for (const auto& r : result.records) items.push_back({io::to_rotated_box(r.geometry), r.dont_care});
  }
  if (failed) throw InputError("ground truth contains unreadable lines");
  return out;
}

ProposalsByImage read_detections_by_image(const fs::path& file, std::ostream& err) {
  const auto result = io::read_detection_file(file);
  report(err, file, result.errors);
  if (!result.errors.empty()) throw InputError("detection file contains unreadable lines");
  ProposalsByImage out;
  for (const auto& r : result.records) out[r.image_id].push_back(r.proposal);
  return out;
}

void warn_unknown_images(const ProposalsByImage& dets, const GtByImage& gts, std::ostream& err) {
  for (const auto& [id, list] : dets) {
    if (!gts.count(id)) fmt::print(err, "warning: {} detections for image '{}' have no ground truth\n", list.size(), id);
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  return out;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string detections;
  std::string gt_dir;
  std::string gt_format = "icdar15";
  std::vector<double> iou_thresholds{0.5};
  std::string output;
  unsigned threads = default_threads();
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
  for (double t : o.iou_thresholds) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidInput("iou threshold must lie in (0, 1)");
  }
  const GtByImage gts = read_gt_dir(o.gt_dir, io::parse_format(o.gt_format), err);
  const ProposalsByImage dets = read_detections_by_image(o.detections, err);
  warn_unknown_images(dets, gts, err);

  std::vector<std::string> images;
  for (const auto& [id, _] : gts) images.push_back(id);
  for (const auto& [id, _] : dets) {
    if (!gts.count(id)) images.push_back(id);
  }
  std::sort(images.begin(), images.end());

  const std::vector<Proposal> no_dets;
  const std::vector<GroundTruthItem> no_gts;
  std::vector<std::vector<EvalReport>> per_image(images.size());
  parallel_for(images.size(), o.threads, [&](std::size_t k) {
    const auto d = dets.find(images[k]);
    const auto g = gts.find(images[k]);
    per_image[k] = sweep_report(d == dets.end() ? no_dets : d->second, g == gts.end() ? no_gts : g->second,
                                o.iou_thresholds);
  });

  std::vector<EvalReport> rows;
  for (std::size_t t = 0; t < o.iou_thresholds.size(); ++t) {
    std::vector<EvalReport> column;
    for (const auto& r : per_image) column.push_back(r[t]);
    EvalReport sum = accumulate(column);
    sum.iou_threshold = o.iou_thresholds[t];
    rows.push_back(sum);
  }
  print_eval_table(out, rows);
  if (!o.output.empty()) {
    auto file = open_output(o.output);
    write_eval_tsv(file, rows);
  }
  return 0;
}

// --------------------------------------------------------- proposal-recall

struct RecallOptions {
  std::string proposals;
  std::string gt_dir;
  std::string gt_format = "icdar15";
  std::vector<std::size_t> top_n{50, 100, 300};
  std::string output;
};

int cmd_proposal_recall(const RecallOptions& o, std::ostream& out, std::ostream& err) {
  const GtByImage gts = read_gt_dir(o.gt_dir, io::parse_format(o.gt_format), err);
  const ProposalsByImage props = read_detections_by_image(o.proposals, err);
  warn_unknown_images(props, gts, err);

  std::vector<std::vector<Proposal>> p;
  std::vector<std::vector<GroundTruthItem>> g;
  for (const auto& [id, items] : gts) {
    g.push_back(items);
    const auto it = props.find(id);
    p.push_back(it == props.end() ? std::vector<Proposal>{} : it->second);
  }
  const std::vector<RecallMode> modes = {RecallMode::Iou50, RecallMode::Iou75, RecallMode::Average};
  const RecallReport r = proposal_recall(p, g, o.top_n, modes);
  print_recall_table(out, r);
  if (!o.output.empty()) {
    auto file = open_output(o.output);
    write_recall_tsv(file, r);
  }
  return 0;
}

// ---------------------------------------------------------------- labelgen

struct LabelgenOptions {
  std::vector<std::string> gt;
  std::string gt_dir;
  std::string gt_format = "icdar15";
  double image_width = 1333;
  double image_height = 800;
  std::vector<int> strides{4, 8, 16, 32};
  std::vector<int> long_ratio_strides{4, 8};
  double k = 5.0;
  std::vector<double> sigma{0.4, 0.5};
  std::vector<double> scales{8, 16, 32, 64};
  std::vector<double> ratios{1, 2, 4};
  std::vector<double> long_ratios{3, 5, 7};
  std::string output_dir;
  bool write_ideal = false;
  unsigned threads = default_threads();
};

std::string level_file(const std::string& id, int stride, const char* ext) {
  return fmt::format("{}_s{}.{}", id, stride, ext);
}

int cmd_labelgen(const LabelgenOptions& o, std::ostream& out, std::ostream& err) {
  if (!(o.image_width > 0 && o.image_height > 0)) throw InvalidInput("image size must be positive");
  for (int s : o.strides) {
    if (s < 1) throw InvalidInput("strides must be positive");
  }
  const std::vector<LevelSpec> levels = make_levels(o.image_width, o.image_height, o.strides, o.k, o.long_ratio_strides);
  const ShrinkParams shrink{o.sigma.at(0), o.sigma.at(1)};
  validate(shrink);
  const ShapeCandidateSet candidates{o.scales, o.ratios, o.long_ratios};
  validate(candidates);

  std::vector<fs::path> files(o.gt.begin(), o.gt.end());
  if (!o.gt_dir.empty()) {
    for (const auto& entry : fs::directory_iterator(o.gt_dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
  }
  if (files.empty()) throw InputError("no ground-truth files given");
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return io::image_id_from_path(a) < io::image_id_from_path(b); });

  const io::GtFormat format = io::parse_format(o.gt_format);
  std::vector<std::vector<RotatedBox>> boxes(files.size());
  bool failed = false;
  for (std::size_t n = 0; n < files.size(); ++n) {
    const auto result = io::read_annotation_file(files[n], format);
    report(err, files[n], result.errors);
    failed = failed || !result.errors.empty();
    for (const auto& r : result.records) {
      if (!r.dont_care) boxes[n].push_back(io::to_rotated_box(r.geometry));
    }
  }
  if (failed) throw InputError("ground truth contains unreadable lines");
  fs::create_directories(o.output_dir);

  std::vector<TargetResult> results(files.size());
  parallel_for(files.size(), o.threads, [&](std::size_t n) {
    results[n] = generate_targets(boxes[n], levels, shrink, candidates);
    const std::string id = io::image_id_from_path(files[n]);
    for (const auto& maps : results[n].levels) {
      save_target_maps(fs::path(o.output_dir) / level_file(id, maps.level.stride, "txtm"), maps);
      if (o.write_ideal) {
        save_prediction_maps(fs::path(o.output_dir) / level_file(id, maps.level.stride, "txpm"),
                             ideal_predictions(maps));
      }
    }
  });

  fmt::print(out, "image\tstride\tpositive\tignore\tnegative\n");
  for (std::size_t n = 0; n < files.size(); ++n) {
    const std::string id = io::image_id_from_path(files[n]);
    for (const auto& d : results[n].diagnostics) fmt::print(err, "warning: {}: {}\n", id, d.message);
    for (const auto& maps : results[n].levels) {
      fmt::print(out, "{}\t{}\t{}\t{}\t{}\n", id, maps.level.stride, maps.count(LocationClass::Positive),
                 maps.count(LocationClass::Ignore), maps.count(LocationClass::Negative));
    }
  }
  return 0;
}

// ------------------------------------------------------------------ decode

struct DecodeOptions {
  std::vector<std::string> maps;
  double t_a = 0.05;
  std::size_t top_n = 0;
  bool top_n_set = false;
  double nms_iou = 0.3;
  bool skip_nms = false;
  std::string output;
  unsigned threads = default_threads();
};

/// "img_1_s8.txpm" belongs to image "img_1".
std::string image_of_map_file(const fs::path& file) {
  static const std::regex level_suffix(R"((.*)_s[0-9]+)");
  const std::string stem = file.stem().string();
  std::smatch m;
  return std::regex_match(stem, m, level_suffix) ? m[1].str() : stem;
}

int cmd_decode(const DecodeOptions& o, std::ostream& out, std::ostream&) {
  DecodeParams params{o.t_a, std::nullopt, o.nms_iou};
  validate(params);

  std::map<std::string, std::vector<fs::path>> grouped;
  for (const auto& f : o.maps) grouped[image_of_map_file(f)].push_back(f);
  std::vector<std::string> images;
  for (const auto& [id, _] : grouped) images.push_back(id);

  std::vector<std::vector<Proposal>> kept(images.size());
  std::vector<AnchorStatistics> stats(images.size());
  parallel_for(images.size(), o.threads, [&](std::size_t n) {
    std::vector<PredictionMaps> levels;
    for (const auto& file : grouped[images[n]]) {
      auto loaded = load_level_maps(file);
      if (auto* t = std::get_if<TargetMaps>(&loaded)) {
        levels.push_back(ideal_predictions(*t));
      } else {
        levels.push_back(std::move(std::get<PredictionMaps>(loaded)));
      }
      validate(levels.back());
    }
    std::sort(levels.begin(), levels.end(),
              [](const PredictionMaps& a, const PredictionMaps& b) { return a.level.stride < b.level.stride; });
    for (std::size_t l = 1; l < levels.size(); ++l) {
      if (levels[l].level.stride == levels[l - 1].level.stride) {
        throw InputError(fmt::format("image '{}' has two maps with stride {}", images[n], levels[l].level.stride));
      }
    }
    std::vector<Proposal> active = decode_levels(levels, params);
    std::size_t cells = 0;
    for (const auto& l : levels) cells += l.level.cells();
    stats[n] = anchor_statistics(active, cells);
    if (o.top_n_set && active.size() > o.top_n) {
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(o.top_n), active.end());
    }
    kept[n] = o.skip_nms ? std::move(active) : polygon_nms(active, o.nms_iou);
  });

  std::vector<io::DetectionRecord> records;
  for (std::size_t n = 0; n < images.size(); ++n) {
    for (const auto& p : kept[n]) records.push_back({images[n], p});
  }
  auto file = open_output(o.output);
  io::write_detections(file, records);

  std::size_t anchors = 0;
  std::size_t cells = 0;
  Histogram aspect{0.25, {}};
  Histogram angle{10.0, {}};
  fmt::print(out, "image\tanchors\tcells\tactive_fraction\tkept\n");
  for (std::size_t n = 0; n < images.size(); ++n) {
    const auto& s = stats[n];
    fmt::print(out, "{}\t{}\t{}\t{:.4f}\t{}\n", images[n], s.count, s.cells_total, s.active_fraction, kept[n].size());
    anchors += s.count;
    cells += s.cells_total;
    aspect.bin_width = s.log2_aspect.bin_width;
    angle.bin_width = s.angle_degrees.bin_width;
    for (const auto& [bin, c] : s.log2_aspect.counts) aspect.counts[bin] += c;
    for (const auto& [bin, c] : s.angle_degrees.counts) angle.counts[bin] += c;
  }
  fmt::print(out, "total\t{}\t{}\t{:.4f}\t{}\n", anchors, cells,
             cells == 0 ? 0.0 : static_cast<double>(anchors) / static_cast<double>(cells), records.size());
  for (const auto& [bin, c] : aspect.counts) fmt::print(out, "hist\tlog2_aspect\t{:.2f}\t{}\n", aspect.lower_edge(bin), c);
  for (const auto& [bin, c] : angle.counts) fmt::print(out, "hist\tangle_degrees\t{:.0f}\t{}\n", angle.lower_edge(bin), c);
  return 0;
}

// --------------------------------------------------------------------- nms

struct NmsOptions {
  std::string detections;
  double nms_iou = 0.3;
  std::string output;
};

int cmd_nms(const NmsOptions& o, std::ostream& out, std::ostream& err) {
  if (!(o.nms_iou > 0.0 && o.nms_iou < 1.0)) throw InvalidInput("nms iou must lie in (0, 1)");
  const ProposalsByImage dets = read_detections_by_image(o.detections, err);
  std::vector<io::DetectionRecord> records;
  for (const auto& [id, list] : dets) {
    for (const auto& p : polygon_nms(list, o.nms_iou)) records.push_back({id, p});
  }
  if (o.output.empty()) {
    io::write_detections(out, records);
  } else {
    auto file = open_output(o.output);
    io::write_detections(file, records);
  }
  return 0;
}

// --------------------------------------------------------------------- iou

struct IouOptions {
  std::string box_a;
  std::string box_b;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

RotatedBox parse_inline_box(const std::string& text) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string field = text.substr(start, end - start);
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || field.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(value)) {
      throw InputError(fmt::format("box '{}': field {} is not a number", text, v.size() + 1));
    }
    v.push_back(value);
    start = end + 1;
  }
  if (v.size() != 5) throw InputError(fmt::format("box '{}': expected cx,cy,w,h,theta", text));
  try {
    return RotatedBox::normalized(v[0], v[1], v[2], v[3], v[4]);
  } catch (const InvalidInput& e) {
    throw InputError(fmt::format("box '{}': {}", text, e.what()));
  }
}

int cmd_iou(const IouOptions& o, std::ostream& out, std::ostream&) {
  const RotatedBox a = parse_inline_box(o.box_a);
  const RotatedBox b = parse_inline_box(o.box_b);
  fmt::print(out, "iou\t{:.6f}\n", iou(a, b));
  fmt::print(out, "oracle\t{:.6f}\n", iou_oracle(a, b, o.samples, o.seed));
  return 0;
}

// ----------------------------------------------------------------- convert

struct ConvertOptions {
  std::string input;
  std::string from;
  std::string to;
  std::string output;
};

int cmd_convert(const ConvertOptions& o, std::ostream& out, std::ostream& err) {
  const io::GtFormat from = io::parse_format(o.from);
  const io::GtFormat to = io::parse_format(o.to);
  const auto result = io::read_annotation_file(o.input, from);
  report(err, o.input, result.errors);
  if (!result.errors.empty()) throw InputError("input contains unreadable lines");

  std::string text;
  for (std::size_t n = 0; n < result.records.size(); ++n) {
    const auto& r = result.records[n];
    if (const auto* q = std::get_if<Quad>(&r.geometry); q && to != io::GtFormat::Icdar15) {
      const double box_area = io::to_rotated_box(r.geometry).area();
      const double quad_area = std::abs(q->signed_area());
      if (std::abs(box_area - quad_area) > 1e-6 * quad_area) {
        fmt::print(err, "warning: record {}: quad is not a rectangle, conversion is lossy\n", n + 1);
      }
    }
    text += io::write_line(to, r, n);
    text += '\n';
  }
  if (o.output.empty()) {
    out << text;
  } else {
    auto file = open_output(o.output);
    file << text;
  }
  return 0;
}

template <typename T>
void add_format_option(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  app->add_option(name, target, help)->check(CLI::IsMember({"icdar13", "icdar15", "msra"}))->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotated text proposal tools: label generation, decoding, NMS and evaluation", "textanchor"};
  app.require_subcommand(1);

  EvaluateOptions eval;
  auto* evaluate = app.add_subcommand("evaluate", "Precision, recall and F-measure of a detection file");
  evaluate->add_option("--detections", eval.detections, "Detection file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--gt-dir", eval.gt_dir, "Directory of per-image ground-truth files")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_format_option(evaluate, "--gt-format", eval.gt_format, "Ground-truth format");
  evaluate->add_option("--iou-threshold", eval.iou_thresholds, "Matching IoU threshold(s)")
      ->delimiter(',')
      ->capture_default_str();
  evaluate->add_option("--output", eval.output, "Also write the metrics as TSV");
  evaluate->add_option("--threads", eval.threads, "Worker threads")->capture_default_str();

  RecallOptions rec;
  auto* recall = app.add_subcommand("proposal-recall", "Text recall of the top-N proposals per image");
  recall->add_option("--proposals", rec.proposals, "Proposal file (detection format)")
      ->required()
      ->check(CLI::ExistingFile);
  recall->add_option("--gt-dir", rec.gt_dir, "Directory of per-image ground-truth files")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_format_option(recall, "--gt-format", rec.gt_format, "Ground-truth format");
  recall->add_option("--top-n", rec.top_n, "Proposal budgets")->delimiter(',')->capture_default_str();
  recall->add_option("--output", rec.output, "Also write the recall grid as TSV");

  LabelgenOptions lab;
  auto* labelgen = app.add_subcommand("labelgen", "Write location, orientation and shape target maps");
  labelgen->add_option("--gt", lab.gt, "Ground-truth file(s)")->check(CLI::ExistingFile);
  labelgen->add_option("--gt-dir", lab.gt_dir, "Directory of ground-truth files")->check(CLI::ExistingDirectory);
  add_format_option(labelgen, "--gt-format", lab.gt_format, "Ground-truth format");
  labelgen->add_option("--image-width", lab.image_width, "Image width in pixels")->capture_default_str();
  labelgen->add_option("--image-height", lab.image_height, "Image height in pixels")->capture_default_str();
  labelgen->add_option("--strides", lab.strides, "Level strides")->delimiter(',')->capture_default_str();
  labelgen->add_option("--long-ratio-strides", lab.long_ratio_strides, "Strides that also try the long ratios")
      ->delimiter(',')
      ->capture_default_str();
  labelgen->add_option("--k", lab.k, "Base anchor size in strides")->capture_default_str();
  labelgen->add_option("--sigma", lab.sigma, "Shrink factors along width and height")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  labelgen->add_option("--scales", lab.scales, "Candidate scales")->delimiter(',')->capture_default_str();
  labelgen->add_option("--ratios", lab.ratios, "Candidate aspect ratios")->delimiter(',')->capture_default_str();
  labelgen->add_option("--long-ratios", lab.long_ratios, "Extra aspect ratios on long-ratio strides")
      ->delimiter(',')
      ->capture_default_str();
  labelgen->add_option("--output-dir", lab.output_dir, "Directory for <image>_s<stride>.txtm files")->required();
  labelgen->add_flag("--write-ideal", lab.write_ideal, "Also write the matching ideal prediction maps (.txpm)");
  labelgen->add_option("--threads", lab.threads, "Worker threads")->capture_default_str();

  DecodeOptions dec;
  auto* decode = app.add_subcommand("decode", "Turn prediction maps into rotated proposals");
  decode->add_option("--maps", dec.maps, "Map files named <image>_s<stride>.txpm (or .txtm)")
      ->required()
      ->check(CLI::ExistingFile);
  decode->add_option("--t-a", dec.t_a, "Location probability threshold")->capture_default_str();
  auto* top_n = decode->add_option("--top-n", dec.top_n, "Keep the best N anchors per image before NMS");
  decode->add_option("--nms-iou", dec.nms_iou, "NMS IoU threshold")->capture_default_str();
  decode->add_flag("--skip-nms", dec.skip_nms, "Write the thresholded anchors without NMS");
  decode->add_option("--output", dec.output, "Detection file to write")->required();
  decode->add_option("--threads", dec.threads, "Worker threads")->capture_default_str();

  NmsOptions nms;
  auto* nms_cmd = app.add_subcommand("nms", "Polygon NMS over a detection file");
  nms_cmd->add_option("--detections", nms.detections, "Detection file")->required()->check(CLI::ExistingFile);
  nms_cmd->add_option("--nms-iou", nms.nms_iou, "NMS IoU threshold")->capture_default_str();
  nms_cmd->add_option("--output", nms.output, "Output file (default: standard output)");

  IouOptions io_opts;
  auto* iou_cmd = app.add_subcommand("iou", "Exact and sampled IoU of two boxes given as cx,cy,w,h,theta");
  iou_cmd->add_option("box-a", io_opts.box_a, "First box")->required();
  iou_cmd->add_option("box-b", io_opts.box_b, "Second box")->required();
  iou_cmd->add_option("--samples", io_opts.samples, "Oracle sample count")->capture_default_str();
  iou_cmd->add_option("--seed", io_opts.seed, "Oracle seed")->capture_default_str();

  ConvertOptions conv;
  auto* convert = app.add_subcommand("convert", "Rewrite a ground-truth file in another format");
  convert->add_option("--input", conv.input, "Input file")->required()->check(CLI::ExistingFile);
  add_format_option(convert, "--from", conv.from, "Input format");
  add_format_option(convert, "--to", conv.to, "Output format");
  convert->get_option("--from")->required();
  convert->get_option("--to")->required();
  convert->add_option("--output", conv.output, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*evaluate) return cmd_evaluate(eval, out, err);
    if (*recall) return cmd_proposal_recall(rec, out, err);
    if (*labelgen) return cmd_labelgen(lab, out, err);
    if (*decode) {
      dec.top_n_set = top_n->count() > 0;
      return cmd_decode(dec, out, err);
    }
    if (*nms_cmd) return cmd_nms(nms, out, err);
    if (*iou_cmd) return cmd_iou(io_opts, out, err);
    if (*convert) return cmd_convert(conv, out, err);
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  } catch (const ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  } catch (const InvalidGeometry& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  } catch (const InvalidInput& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace textanchor::cli
