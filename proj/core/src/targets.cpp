#include "textanchor/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "textanchor/polyiou.hpp"

namespace textanchor {

namespace {

int rank(LocationClass c) {
  switch (c) {
    case LocationClass::Positive:
      return 2;
    case LocationClass::Ignore:
      return 1;
    case LocationClass::Negative:
      break;
  }
  return 0;
}

}  // namespace

void validate(const LevelSpec& level) {
  if (level.stride < 1) throw InvalidInput("level stride must be >= 1");
  if (!(level.k > 0.0) || !std::isfinite(level.k)) throw InvalidInput("level scale factor k must be > 0");
  if (level.grid_w < 1 || level.grid_h < 1) throw InvalidInput("level grid dimensions must be >= 1");
}

void validate(const ShrinkParams& shrink) {
  if (!(shrink.sigma1 > 0.0 && shrink.sigma1 <= 1.0) || !(shrink.sigma2 > 0.0 && shrink.sigma2 <= 1.0)) {
    throw InvalidInput("shrink factors must lie in (0, 1]");
  }
}

void validate(const ShapeCandidateSet& candidates) {
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
  };
  if (!positive(candidates.scales) || !positive(candidates.ratios) || !positive(candidates.long_ratios)) {
    throw InvalidInput("shape candidate scales and ratios must be > 0");
  }
}

std::vector<LevelSpec> make_levels(double image_width, double image_height, std::span<const int> strides, double k,
                                   std::span<const int> long_ratio_strides) {
  if (!(image_width > 0.0) || !(image_height > 0.0)) throw InvalidInput("image size must be positive");
  std::vector<LevelSpec> levels;
  for (int s : strides) {
    if (s < 1) throw InvalidInput("level stride must be >= 1");
    LevelSpec level;
    level.stride = s;
    level.k = k;
    level.grid_w = static_cast<int>(std::ceil(image_width / s));
    level.grid_h = static_cast<int>(std::ceil(image_height / s));
    level.long_ratios_enabled =
        std::find(long_ratio_strides.begin(), long_ratio_strides.end(), s) != long_ratio_strides.end();
    validate(level);
    levels.push_back(level);
  }
  return levels;
}

TargetMaps::TargetMaps(const LevelSpec& spec)
    : level(spec),
      location(spec.grid_w, spec.grid_h, LocationClass::Negative),
      orientation(spec.grid_w, spec.grid_h, std::numeric_limits<double>::quiet_NaN()),
      shape_dw(spec.grid_w, spec.grid_h, 0.0),
      shape_dh(spec.grid_w, spec.grid_h, 0.0),
      shape_valid(spec.grid_w, spec.grid_h, 0) {
  validate(spec);
}

std::size_t TargetMaps::count(LocationClass c) const {
  const auto v = location.values();
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), c));
}

BoxSize shape_decode(const ShapeOffset& offset, const LevelSpec& level) {
  const double base = level.k * level.stride;
  return {base * std::exp(offset.dw), base * std::exp(offset.dh)};
}

ShapeOffset shape_encode(const BoxSize& size, const LevelSpec& level) {
  if (!(size.w > 0.0) || !(size.h > 0.0)) throw InvalidInput("shape_encode needs positive width and height");
  const double base = level.k * level.stride;
  return {std::log(size.w / base), std::log(size.h / base)};
}

Point2 cell_center(int i, int j, const LevelSpec& level) {
  if (i < 0 || j < 0 || i >= level.grid_w || j >= level.grid_h) throw InvalidInput("cell index outside the grid");
  return {(i + 0.5) * level.stride, (j + 0.5) * level.stride};
}

std::size_t assign_level_index(const RotatedBox& gt, std::span<const LevelSpec> levels) {
  if (levels.empty()) throw InvalidInput("assign_level needs at least one level");
  std::vector<std::size_t> order(levels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return levels[a].stride < levels[b].stride; });

  const double size = std::sqrt(gt.w() * gt.h());
  std::size_t best = order.front();
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t idx : order) {
    const double cost = std::abs(std::log(size / (levels[idx].k * levels[idx].stride)));
    // A geometric midpoint is only a tie up to rounding; keep the smaller stride.
    if (cost < best_cost - 1e-12) {
      best = idx;
      best_cost = cost;
    }
  }
  return best;
}

LevelSpec assign_level(const RotatedBox& gt, std::span<const LevelSpec> levels) {
  return levels[assign_level_index(gt, levels)];
}

std::vector<BoxSize> enumerate_candidates(const LevelSpec& level, const ShapeCandidateSet& candidates) {
  std::vector<double> ratios = candidates.ratios;
  if (level.long_ratios_enabled) {
    ratios.insert(ratios.end(), candidates.long_ratios.begin(), candidates.long_ratios.end());
  }
  std::vector<BoxSize> out;
  out.reserve(candidates.scales.size() * ratios.size());
  for (double a : candidates.scales) {
    for (double r : ratios) {
      const double side = a * level.stride;
      const double root = std::sqrt(r);
      out.push_back({side * root, side / root});
    }
  }
  return out;
}

TargetResult generate_targets(std::span<const RotatedBox> gts, std::span<const LevelSpec> levels,
                              const ShrinkParams& shrink, const ShapeCandidateSet& candidates) {
  validate(shrink);
  validate(candidates);
  if (levels.empty()) throw InvalidInput("generate_targets needs at least one level");

  struct Accumulator {
    Grid<double> orient_sum;
    Grid<int> orient_count;
    Grid<double> orient_min;
    Grid<double> orient_max;
    Grid<double> shape_iou;
    std::vector<BoxSize> candidates;
  };

  TargetResult result;
  std::vector<Accumulator> acc;
  for (const auto& level : levels) {
    result.levels.emplace_back(level);
    acc.push_back({Grid<double>(level.grid_w, level.grid_h, 0.0), Grid<int>(level.grid_w, level.grid_h, 0),
                   Grid<double>(level.grid_w, level.grid_h, 1.0), Grid<double>(level.grid_w, level.grid_h, 0.0),
                   Grid<double>(level.grid_w, level.grid_h, -1.0), enumerate_candidates(level, candidates)});
  }

  for (std::size_t g = 0; g < gts.size(); ++g) {
    const RotatedBox& gt = gts[g];
    if (gt.h() < 1.0) {
      result.diagnostics.push_back({TargetDiagnostic::Kind::TooSmall, g, 0, -1, -1, "box side below one pixel"});
      continue;
    }
    const std::size_t li = assign_level_index(gt, levels);
    const LevelSpec& level = levels[li];
    if (gt.cx() < 0.0 || gt.cy() < 0.0 || gt.cx() >= level.image_width() || gt.cy() >= level.image_height()) {
      result.diagnostics.push_back(
          {TargetDiagnostic::Kind::OutOfBounds, g, level.stride, -1, -1, "box center outside the image"});
      continue;
    }

    TargetMaps& maps = result.levels[li];
    Accumulator& a = acc[li];
    const double s = level.stride;
    const double c = std::cos(gt.theta());
    const double sn = std::sin(gt.theta());
    const double half_w = gt.w() / 2.0;
    const double half_h = gt.h() / 2.0;
    const double core_w = shrink.sigma1 * half_w;
    const double core_h = shrink.sigma2 * half_h;
    const double theta_t = angle_to_unit(gt.theta());

    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    for (const auto& p : box_corners(gt)) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
    const int i0 = std::max(0, static_cast<int>(std::floor(min_x / s - 0.5)));
    const int j0 = std::max(0, static_cast<int>(std::floor(min_y / s - 0.5)));
    const int i1 = std::min(level.grid_w - 1, static_cast<int>(std::ceil(max_x / s - 0.5)));
    const int j1 = std::min(level.grid_h - 1, static_cast<int>(std::ceil(max_y / s - 0.5)));

    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const Point2 p = cell_center(i, j, level);
        const double dx = p.x - gt.cx();
        const double dy = p.y - gt.cy();
        const double u = std::abs(dx * c + dy * sn);
        const double v = std::abs(-dx * sn + dy * c);
        if (!(u < half_w && v < half_h)) continue;

        a.orient_sum.at(i, j) += theta_t;
        a.orient_count.at(i, j) += 1;
        a.orient_min.at(i, j) = std::min(a.orient_min.at(i, j), theta_t);
        a.orient_max.at(i, j) = std::max(a.orient_max.at(i, j), theta_t);

        const LocationClass cls = (u < core_w && v < core_h) ? LocationClass::Positive : LocationClass::Ignore;
        if (rank(cls) > rank(maps.location.at(i, j))) maps.location.at(i, j) = cls;
        if (cls != LocationClass::Positive) continue;

        std::optional<BoxSize> best;
        double best_iou = -1.0;
        for (const BoxSize& cand : a.candidates) {
          const double v_iou = iou(RotatedBox::normalized(p.x, p.y, cand.w, cand.h, gt.theta()), gt);
          if (v_iou > best_iou) {
            best_iou = v_iou;
            best = cand;
          }
        }
        if (best && best_iou > a.shape_iou.at(i, j)) {
          const ShapeOffset off = shape_encode(*best, level);
          a.shape_iou.at(i, j) = best_iou;
          maps.shape_dw.at(i, j) = off.dw;
          maps.shape_dh.at(i, j) = off.dh;
          maps.shape_valid.at(i, j) = 1;
        }
      }
    }
  }

  for (std::size_t li = 0; li < levels.size(); ++li) {
    TargetMaps& maps = result.levels[li];
    const Accumulator& a = acc[li];
    for (int j = 0; j < levels[li].grid_h; ++j) {
      for (int i = 0; i < levels[li].grid_w; ++i) {
        const int n = a.orient_count.at(i, j);
        if (n == 0) continue;
        maps.orientation.at(i, j) = a.orient_sum.at(i, j) / n;
        // Boxes on opposite sides of the +-pi/2 wrap average to a near-vertical
        // angle that none of them has.
        if (n > 1 && a.orient_max.at(i, j) - a.orient_min.at(i, j) > 0.5) {
          result.diagnostics.push_back({TargetDiagnostic::Kind::OrientationWrap, 0, levels[li].stride, i, j,
                                        "overlapping boxes straddle the angle wrap"});
        }
      }
    }
  }
  return result;
}

BoxDelta box_delta_encode(const RotatedBox& gt, const RotatedBox& anchor) {
  return {(gt.cx() - anchor.cx()) / anchor.w(), (gt.cy() - anchor.cy()) / anchor.h(), std::log(gt.w() / anchor.w()),
          std::log(gt.h() / anchor.h()), canonicalize_angle(gt.theta() - anchor.theta()) / kPi};
}

RotatedBox box_delta_decode(const BoxDelta& delta, const RotatedBox& anchor) {
  return RotatedBox::normalized(anchor.cx() + delta.tx * anchor.w(), anchor.cy() + delta.ty * anchor.h(),
                                anchor.w() * std::exp(delta.tw), anchor.h() * std::exp(delta.th),
                                anchor.theta() + delta.ttheta * kPi);
}

}  // namespace textanchor
