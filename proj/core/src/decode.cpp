#include "textanchor/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <numeric>
#include <tuple>

#include "textanchor/error.hpp"
#include "textanchor/polyiou.hpp"

namespace textanchor {

namespace {

void check_grid(const Grid<double>& grid, const LevelSpec& level, const char* name) {
  if (grid.width() != level.grid_w || grid.height() != level.grid_h) {
    throw InvalidInput(std::string(name) + " grid does not match the level dimensions");
  }
}

struct Ranked {
  Proposal proposal;
  int i;
  int j;
  int stride;
};

void sort_ranked(std::vector<Ranked>& ranked) {
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.proposal.score != b.proposal.score) return a.proposal.score > b.proposal.score;
    return std::tie(a.i, a.j, a.stride) < std::tie(b.i, b.j, b.stride);
  });
}

void collect(const PredictionMaps& maps, double t_a, std::vector<Ranked>& out) {
  const LevelSpec& level = maps.level;
  for (int j = 0; j < level.grid_h; ++j) {
    for (int i = 0; i < level.grid_w; ++i) {
      const double p = maps.location_prob.at(i, j);
      if (!(p > t_a)) continue;
      const Point2 center = cell_center(i, j, level);
      const BoxSize size = shape_decode({maps.shape_dw.at(i, j), maps.shape_dh.at(i, j)}, level);
      const double theta = unit_to_angle(maps.orientation.at(i, j));
      out.push_back({{RotatedBox::normalized(center.x, center.y, size.w, size.h, theta), p}, i, j, level.stride});
    }
  }
}

std::vector<Proposal> finish(std::vector<Ranked>& ranked, const DecodeParams& params) {
  sort_ranked(ranked);
  if (params.top_n && ranked.size() > *params.top_n) {
    ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(*params.top_n), ranked.end());
  }
  std::vector<Proposal> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) out.push_back(r.proposal);
  return out;
}

}  // namespace

PredictionMaps::PredictionMaps(const LevelSpec& spec)
    : level(spec),
      location_prob(spec.grid_w, spec.grid_h, 0.0),
      orientation(spec.grid_w, spec.grid_h, 0.5),
      shape_dw(spec.grid_w, spec.grid_h, 0.0),
      shape_dh(spec.grid_w, spec.grid_h, 0.0) {
  textanchor::validate(spec);
}

void validate(const PredictionMaps& maps) {
  validate(maps.level);
  check_grid(maps.location_prob, maps.level, "location");
  check_grid(maps.orientation, maps.level, "orientation");
  check_grid(maps.shape_dw, maps.level, "shape_dw");
  check_grid(maps.shape_dh, maps.level, "shape_dh");
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  auto finite = [](double v) { return std::isfinite(v); };
  const auto prob = maps.location_prob.values();
  const auto orient = maps.orientation.values();
  const auto dw = maps.shape_dw.values();
  const auto dh = maps.shape_dh.values();
  if (!std::all_of(prob.begin(), prob.end(), in_unit)) throw InvalidInput("location probability outside [0, 1]");
  if (!std::all_of(orient.begin(), orient.end(), in_unit)) throw InvalidInput("orientation outside [0, 1]");
  if (!std::all_of(dw.begin(), dw.end(), finite) || !std::all_of(dh.begin(), dh.end(), finite)) {
    throw InvalidInput("shape offsets must be finite");
  }
}

PredictionMaps ideal_predictions(const TargetMaps& targets) {
  PredictionMaps pred(targets.level);
  for (int j = 0; j < targets.level.grid_h; ++j) {
    for (int i = 0; i < targets.level.grid_w; ++i) {
      const bool positive = targets.location.at(i, j) == LocationClass::Positive;
      pred.location_prob.at(i, j) = positive ? 1.0 : 0.0;
      const double o = targets.orientation.at(i, j);
      pred.orientation.at(i, j) = std::isnan(o) ? 0.5 : o;
      if (targets.shape_valid.at(i, j) != 0) {
        pred.shape_dw.at(i, j) = targets.shape_dw.at(i, j);
        pred.shape_dh.at(i, j) = targets.shape_dh.at(i, j);
      }
    }
  }
  return pred;
}

void validate(const DecodeParams& params) {
  if (!(params.t_a >= 0.0 && params.t_a <= 1.0)) throw InvalidInput("t_a must lie in [0, 1]");
  if (!(params.nms_iou > 0.0 && params.nms_iou < 1.0)) throw InvalidInput("nms_iou must lie in (0, 1)");
}

std::vector<Proposal> decode_anchors(const PredictionMaps& maps, const DecodeParams& params) {
  validate(params);
  validate(maps);
  std::vector<Ranked> ranked;
  collect(maps, params.t_a, ranked);
  return finish(ranked, params);
}

std::vector<Proposal> decode_levels(std::span<const PredictionMaps> levels, const DecodeParams& params) {
  validate(params);
  std::vector<Ranked> ranked;
  for (const auto& maps : levels) {
    validate(maps);
    collect(maps, params.t_a, ranked);
  }
  return finish(ranked, params);
}

std::vector<Proposal> polygon_nms(std::span<const Proposal> proposals, double iou_threshold) {
  std::vector<std::size_t> order(proposals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return proposals[a].score > proposals[b].score; });

  // Axis-aligned extents give a cheap reject before polygon clipping.
  struct Extent {
    double min_x, min_y, max_x, max_y;
  };
  std::vector<Extent> extents(proposals.size());
  for (std::size_t k = 0; k < proposals.size(); ++k) {
    Extent e{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : box_corners(proposals[k].box)) {
      e.min_x = std::min(e.min_x, p.x);
      e.min_y = std::min(e.min_y, p.y);
      e.max_x = std::max(e.max_x, p.x);
      e.max_y = std::max(e.max_y, p.y);
    }
    extents[k] = e;
  }

  std::vector<char> suppressed(proposals.size(), 0);
  std::vector<Proposal> kept;
  for (std::size_t a = 0; a < order.size(); ++a) {
    const std::size_t ia = order[a];
    if (suppressed[ia]) continue;
    kept.push_back(proposals[ia]);
    const Extent& ea = extents[ia];
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const std::size_t ib = order[b];
      if (suppressed[ib]) continue;
      const Extent& eb = extents[ib];
      if (eb.min_x > ea.max_x || eb.max_x < ea.min_x || eb.min_y > ea.max_y || eb.max_y < ea.min_y) continue;
      if (iou(proposals[ia].box, proposals[ib].box) > iou_threshold) suppressed[ib] = 1;
    }
  }
  return kept;
}

std::size_t Histogram::total() const {
  std::size_t n = 0;
  for (const auto& [bin, c] : counts) n += c;
  return n;
}

AnchorStatistics anchor_statistics(std::span<const Proposal> proposals, std::size_t cells_total) {
  AnchorStatistics stats;
  stats.count = proposals.size();
  stats.cells_total = cells_total;
  stats.active_fraction = cells_total == 0 ? 0.0 : static_cast<double>(proposals.size()) / cells_total;
  stats.log2_aspect.bin_width = 0.25;
  stats.angle_degrees.bin_width = 10.0;
  for (const auto& p : proposals) {
    const double ratio = std::log2(p.box.w() / p.box.h());
    const double degrees = p.box.theta() * 180.0 / kPi;
    // The small offset keeps exact bin edges (log2 ratio of exactly 1, say)
    // from falling into the lower bin through rounding.
    stats.log2_aspect.counts[static_cast<long>(std::floor(ratio / 0.25 + 1e-9))] += 1;
    stats.angle_degrees.counts[static_cast<long>(std::floor(degrees / 10.0 + 1e-9))] += 1;
  }
  return stats;
}

}  // namespace textanchor
