#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "textanchor/geom.hpp"
#include "textanchor/targets.hpp"

namespace textanchor {

/// Network-style outputs for one level: location probability, normalized
/// orientation in [0, 1] and log-space shape offsets.
struct PredictionMaps {
  LevelSpec level;
  Grid<double> location_prob;
  Grid<double> orientation;
  Grid<double> shape_dw;
  Grid<double> shape_dh;

  explicit PredictionMaps(const LevelSpec& spec);
};

/// Throws InvalidInput if grids disagree with the level or values leave their
/// ranges (probability and orientation outside [0, 1], non-finite offsets).
void validate(const PredictionMaps& maps);

/// What a perfect predictor would output for the given targets: probability 1
/// on positive cells and 0 elsewhere, orientation 0.5 where undefined.
PredictionMaps ideal_predictions(const TargetMaps& targets);

struct Proposal {
  RotatedBox box;
  double score = 0.0;
};

struct DecodeParams {
  double t_a = 0.05;
  std::optional<std::size_t> top_n;
  double nms_iou = 0.3;
};

void validate(const DecodeParams& params);

/// One proposal per cell with probability strictly above t_a, centered at the
/// cell center. Sorted by score descending; equal scores keep (i, j) order.
std::vector<Proposal> decode_anchors(const PredictionMaps& maps, const DecodeParams& params);

/// decode_anchors over several levels, merged. Equal scores order by (i, j)
/// then stride. top_n applies to the merged list.
std::vector<Proposal> decode_levels(std::span<const PredictionMaps> levels, const DecodeParams& params);

/// Greedy polygon NMS: keep the best remaining proposal and drop every other
/// proposal whose IoU with it exceeds `iou_threshold`. Stable for equal scores.
std::vector<Proposal> polygon_nms(std::span<const Proposal> proposals, double iou_threshold);

/// Sparse histogram keyed by bin index; bin b covers [b * width, (b + 1) * width).
struct Histogram {
  double bin_width = 1.0;
  std::map<long, std::size_t> counts;

  double lower_edge(long bin) const { return static_cast<double>(bin) * bin_width; }
  std::size_t total() const;
};

struct AnchorStatistics {
  std::size_t count = 0;
  std::size_t cells_total = 0;
  double active_fraction = 0.0;
  Histogram log2_aspect;    // log2(w / h), 0.25-wide bins
  Histogram angle_degrees;  // theta in degrees, 10-degree bins
};

AnchorStatistics anchor_statistics(std::span<const Proposal> proposals, std::size_t cells_total);

}  // namespace textanchor
