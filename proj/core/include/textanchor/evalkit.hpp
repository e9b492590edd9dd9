#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "textanchor/decode.hpp"
#include "textanchor/geom.hpp"

namespace textanchor {

struct GroundTruthItem {
  RotatedBox box;
  bool dont_care = false;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::size_t matched = 0;
  std::size_t num_detections = 0;  // after don't-care removal
  std::size_t num_gt = 0;          // excluding don't-care
  std::size_t num_dont_care_removed = 0;
  double iou_threshold = 0.5;
};

/// Fills precision, recall and F from the counts; 0/0 is 0.
void finalize(EvalReport& report);

/// Greedy one-to-one matching of one image.
///
/// Detections overlapping a don't-care box with IoU > threshold are dropped.
/// The rest are visited by descending score (ties keep input order) and each
/// takes the unmatched gt of highest IoU, provided that IoU >= threshold.
EvalReport match_detections(std::span<const Proposal> dets, std::span<const GroundTruthItem> gts,
                            double iou_threshold);

/// Sums the counts of several per-image reports and recomputes the ratios.
EvalReport accumulate(std::span<const EvalReport> per_image);

/// One report per threshold (each in (0, 1)).
std::vector<EvalReport> sweep_report(std::span<const Proposal> dets, std::span<const GroundTruthItem> gts,
                                     std::span<const double> thresholds);

enum class RecallMode { Iou50, Iou75, Average };

std::string to_string(RecallMode mode);

/// The ten thresholds 0.50, 0.55, ..., 0.95 averaged by RecallMode::Average.
std::vector<double> average_thresholds();

struct RecallReport {
  std::map<std::pair<std::size_t, RecallMode>, double> values;
  std::size_t num_gt = 0;

  double at(std::size_t n, RecallMode mode) const { return values.at({n, mode}); }
};

/// Text recall of the top-N proposals per image. A gt is recalled at
/// threshold t when any kept proposal reaches IoU >= t. Don't-care gts are
/// not counted. Throws InvalidInput for N == 0 or misaligned image lists.
RecallReport proposal_recall(std::span<const std::vector<Proposal>> proposals_per_image,
                             std::span<const std::vector<GroundTruthItem>> gts_per_image,
                             std::span<const std::size_t> n_values, std::span<const RecallMode> modes);

/// Human-readable tables (percentages with one decimal).
void print_eval_table(std::ostream& out, std::span<const EvalReport> rows);
void print_recall_table(std::ostream& out, const RecallReport& report);

/// Machine format: "metric<TAB>N<TAB>mode<TAB>value" with 4 decimals; N is
/// "-" for detection metrics and mode is the IoU threshold.
void write_eval_tsv(std::ostream& out, std::span<const EvalReport> rows);
void write_recall_tsv(std::ostream& out, const RecallReport& report);

}  // namespace textanchor
