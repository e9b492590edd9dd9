#include "textanchor/evalkit.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "textanchor/error.hpp"
#include "textanchor/polyiou.hpp"

namespace textanchor {

namespace {

std::vector<std::size_t> by_score(std::span<const Proposal> props) {
  std::vector<std::size_t> order(props.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return props[a].score > props[b].score; });
  return order;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void finalize(EvalReport& r) {
  r.precision = ratio(r.matched, r.num_detections);
  r.recall = ratio(r.matched, r.num_gt);
  const double s = r.precision + r.recall;
  r.f_measure = s > 0.0 ? 2.0 * r.precision * r.recall / s : 0.0;
}

EvalReport match_detections(std::span<const Proposal> dets, std::span<const GroundTruthItem> gts,
                            double iou_threshold) {
  EvalReport report;
  report.iou_threshold = iou_threshold;

  std::vector<const RotatedBox*> cares;
  std::vector<const RotatedBox*> dont_cares;
  for (const auto& g : gts) (g.dont_care ? dont_cares : cares).push_back(&g.box);
  report.num_gt = cares.size();

  std::vector<Proposal> kept;
  for (const auto& d : dets) {
    const bool ignored = std::any_of(dont_cares.begin(), dont_cares.end(),
                                     [&](const RotatedBox* dc) { return iou(d.box, *dc) > iou_threshold; });
    if (ignored) {
      ++report.num_dont_care_removed;
    } else {
      kept.push_back(d);
    }
  }
  report.num_detections = kept.size();

  std::vector<char> taken(cares.size(), 0);
  for (std::size_t di : by_score(kept)) {
    double best = -1.0;
    std::size_t best_g = cares.size();
    for (std::size_t g = 0; g < cares.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(kept[di].box, *cares[g]);
      if (v > best) {
        best = v;
        best_g = g;
      }
    }
    if (best_g < cares.size() && best >= iou_threshold) {
      taken[best_g] = 1;
      ++report.matched;
    }
  }
  finalize(report);
  return report;
}

EvalReport accumulate(std::span<const EvalReport> per_image) {
  EvalReport total;
  if (!per_image.empty()) total.iou_threshold = per_image.front().iou_threshold;
  for (const auto& r : per_image) {
    total.matched += r.matched;
    total.num_detections += r.num_detections;
    total.num_gt += r.num_gt;
    total.num_dont_care_removed += r.num_dont_care_removed;
  }
  finalize(total);
  return total;
}

std::vector<EvalReport> sweep_report(std::span<const Proposal> dets, std::span<const GroundTruthItem> gts,
                                     std::span<const double> thresholds) {
  std::vector<EvalReport> rows;
  for (double t : thresholds) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidInput("IoU thresholds must lie in (0, 1)");
    rows.push_back(match_detections(dets, gts, t));
  }
  return rows;
}

std::string to_string(RecallMode mode) {
  switch (mode) {
    case RecallMode::Iou50:
      return "0.5";
    case RecallMode::Iou75:
      return "0.75";
    case RecallMode::Average:
      break;
  }
  return "avg";
}

std::vector<double> average_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back((50 + 5 * i) / 100.0);
  return t;
}

RecallReport proposal_recall(std::span<const std::vector<Proposal>> proposals_per_image,
                             std::span<const std::vector<GroundTruthItem>> gts_per_image,
                             std::span<const std::size_t> n_values, std::span<const RecallMode> modes) {
  if (proposals_per_image.size() != gts_per_image.size()) {
    throw InvalidInput("proposal and ground-truth lists must cover the same images");
  }
  for (std::size_t n : n_values) {
    if (n == 0) throw InvalidInput("proposal count N must be positive");
  }

  const std::vector<double> thresholds = average_thresholds();
  // recalled[n_index][t_index]
  std::vector<std::vector<std::size_t>> recalled(n_values.size(), std::vector<std::size_t>(thresholds.size(), 0));
  RecallReport report;

  for (std::size_t img = 0; img < gts_per_image.size(); ++img) {
    const auto& props = proposals_per_image[img];
    const std::vector<std::size_t> order = by_score(props);
    for (const auto& g : gts_per_image[img]) {
      if (g.dont_care) continue;
      ++report.num_gt;
      // best[k] = max IoU among the k + 1 highest-scoring proposals.
      std::vector<double> best(order.size());
      double running = 0.0;
      for (std::size_t k = 0; k < order.size(); ++k) {
        running = std::max(running, iou(props[order[k]].box, g.box));
        best[k] = running;
      }
      for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
        const std::size_t take = std::min(n_values[ni], order.size());
        if (take == 0) continue;
        for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
          if (best[take - 1] >= thresholds[ti]) ++recalled[ni][ti];
        }
      }
    }
  }

  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    for (RecallMode mode : modes) {
      double value = 0.0;
      switch (mode) {
        case RecallMode::Iou50:
          value = ratio(recalled[ni][0], report.num_gt);
          break;
        case RecallMode::Iou75:
          value = ratio(recalled[ni][5], report.num_gt);
          break;
        case RecallMode::Average: {
          double sum = 0.0;
          for (std::size_t ti = 0; ti < thresholds.size(); ++ti) sum += ratio(recalled[ni][ti], report.num_gt);
          value = sum / static_cast<double>(thresholds.size());
          break;
        }
      }
      report.values[{n_values[ni], mode}] = value;
    }
  }
  return report;
}

void print_eval_table(std::ostream& out, std::span<const EvalReport> rows) {
  fmt::print(out, "{:>6}  {:>7}  {:>7}  {:>7}  {:>8}  {:>6}  {:>6}\n", "IoU", "P(%)", "R(%)", "F(%)", "matched",
             "dets", "gts");
  for (const auto& r : rows) {
    fmt::print(out, "{:>6.2f}  {:>7.1f}  {:>7.1f}  {:>7.1f}  {:>8}  {:>6}  {:>6}\n", r.iou_threshold,
               100.0 * r.precision, 100.0 * r.recall, 100.0 * r.f_measure, r.matched, r.num_detections, r.num_gt);
  }
}

namespace {

std::vector<std::size_t> report_ns(const RecallReport& report) {
  std::vector<std::size_t> ns;
  for (const auto& [key, v] : report.values) {
    if (std::find(ns.begin(), ns.end(), key.first) == ns.end()) ns.push_back(key.first);
  }
  return ns;
}

std::vector<RecallMode> report_modes(const RecallReport& report) {
  std::vector<RecallMode> modes;
  for (RecallMode m : {RecallMode::Iou50, RecallMode::Iou75, RecallMode::Average}) {
    const bool present = std::any_of(report.values.begin(), report.values.end(),
                                     [&](const auto& kv) { return kv.first.second == m; });
    if (present) modes.push_back(m);
  }
  return modes;
}

std::string row_label(RecallMode m) {
  switch (m) {
    case RecallMode::Iou50:
      return "IoU_0.5";
    case RecallMode::Iou75:
      return "IoU_0.75";
    case RecallMode::Average:
      break;
  }
  return "IoU_Avg";
}

}  // namespace

void print_recall_table(std::ostream& out, const RecallReport& report) {
  const auto ns = report_ns(report);
  fmt::print(out, "{:<9}", "Measure");
  for (std::size_t n : ns) fmt::print(out, "  {:>7}", fmt::format("TR{}", n));
  out << '\n';
  for (RecallMode m : report_modes(report)) {
    fmt::print(out, "{:<9}", row_label(m));
    for (std::size_t n : ns) fmt::print(out, "  {:>7.1f}", 100.0 * report.at(n, m));
    out << '\n';
  }
}

void write_eval_tsv(std::ostream& out, std::span<const EvalReport> rows) {
  for (const auto& r : rows) {
    const std::string mode = fmt::format("{:.2f}", r.iou_threshold);
    fmt::print(out, "precision\t-\t{}\t{:.4f}\n", mode, r.precision);
    fmt::print(out, "recall\t-\t{}\t{:.4f}\n", mode, r.recall);
    fmt::print(out, "f_measure\t-\t{}\t{:.4f}\n", mode, r.f_measure);
  }
}

void write_recall_tsv(std::ostream& out, const RecallReport& report) {
  for (RecallMode m : report_modes(report)) {
    for (std::size_t n : report_ns(report)) {
      fmt::print(out, "TR\t{}\t{}\t{:.4f}\n", n, to_string(m), report.at(n, m));
    }
  }
}

}  // namespace textanchor
