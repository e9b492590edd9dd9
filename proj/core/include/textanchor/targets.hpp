#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "textanchor/error.hpp"
#include "textanchor/geom.hpp"

namespace textanchor {

/// One pyramid level: cell (i, j) covers pixels centered at ((i+1/2)s, (j+1/2)s).
struct LevelSpec {
  int stride = 4;
  double k = 5.0;
  int grid_w = 1;
  int grid_h = 1;
  bool long_ratios_enabled = false;

  std::size_t cells() const noexcept {
    return static_cast<std::size_t>(grid_w) * static_cast<std::size_t>(grid_h);
  }
  double image_width() const noexcept { return static_cast<double>(grid_w) * stride; }
  double image_height() const noexcept { return static_cast<double>(grid_h) * stride; }

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

/// Throws InvalidInput unless stride >= 1, k > 0 and both grid dims >= 1.
void validate(const LevelSpec& level);

/// Levels for an image of the given size: ceil(size / stride) cells per axis.
/// Long ratios are enabled on the strides listed in `long_ratio_strides`.
std::vector<LevelSpec> make_levels(double image_width, double image_height, std::span<const int> strides, double k,
                                   std::span<const int> long_ratio_strides);

/// Relative size (sigma1 * w, sigma2 * h) of the positive core of a box.
struct ShrinkParams {
  double sigma1 = 0.4;
  double sigma2 = 0.5;
};

void validate(const ShrinkParams& shrink);

/// Sampled anchor shapes searched when building shape targets.
struct ShapeCandidateSet {
  std::vector<double> scales{8.0, 16.0, 32.0, 64.0};
  std::vector<double> ratios{1.0, 2.0, 4.0};
  std::vector<double> long_ratios{3.0, 5.0, 7.0};
};

void validate(const ShapeCandidateSet& candidates);

struct BoxSize {
  double w = 0.0;
  double h = 0.0;
};

/// Log-space shape parameters relative to k * stride.
struct ShapeOffset {
  double dw = 0.0;
  double dh = 0.0;
};

enum class LocationClass : std::uint8_t { Negative = 0, Positive = 1, Ignore = 255 };

/// Dense row-major grid; (i, j) is (column, row).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill)
      : width_(width), height_(height), data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& at(int i, int j) { return data_[index(i, j)]; }
  const T& at(int i, int j) const { return data_[index(i, j)]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= width_ || j >= height_) throw InvalidInput("grid index out of range");
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(i);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Training targets for one level. Orientation is NaN on negative cells;
/// shape offsets are only meaningful where shape_valid is set.
struct TargetMaps {
  LevelSpec level;
  Grid<LocationClass> location;
  Grid<double> orientation;
  Grid<double> shape_dw;
  Grid<double> shape_dh;
  Grid<std::uint8_t> shape_valid;

  explicit TargetMaps(const LevelSpec& spec);

  std::size_t count(LocationClass c) const;
};

struct TargetDiagnostic {
  enum class Kind { TooSmall, OutOfBounds, OrientationWrap };
  Kind kind;
  std::size_t gt_index = 0;  // unused for OrientationWrap
  int stride = 0;
  int i = -1;
  int j = -1;
  std::string message;
};

struct TargetResult {
  std::vector<TargetMaps> levels;  // same order as the input levels
  std::vector<TargetDiagnostic> diagnostics;
};

/// w = k * s * exp(dw), h = k * s * exp(dh).
BoxSize shape_decode(const ShapeOffset& offset, const LevelSpec& level);

/// Inverse of shape_decode; throws InvalidInput for non-positive sizes.
ShapeOffset shape_encode(const BoxSize& size, const LevelSpec& level);

/// ((i + 1/2) s, (j + 1/2) s); throws InvalidInput outside the grid.
Point2 cell_center(int i, int j, const LevelSpec& level);

/// Index of the level minimizing |ln(sqrt(w h) / (k s))|. Ties go to the
/// smaller stride.
std::size_t assign_level_index(const RotatedBox& gt, std::span<const LevelSpec> levels);
LevelSpec assign_level(const RotatedBox& gt, std::span<const LevelSpec> levels);

/// (a s sqrt(r), a s / sqrt(r)) for every scale a and ratio r; long ratios
/// are appended when the level enables them.
std::vector<BoxSize> enumerate_candidates(const LevelSpec& level, const ShapeCandidateSet& candidates);

/// Builds location, orientation and shape targets for every level.
///
/// Each box is assigned to one level. Cells whose centers fall strictly
/// inside the box's shrink core are positive, the rest of the box is ignore,
/// and positive wins over ignore across boxes. Orientation is the mean
/// normalized angle of every box covering the cell. The shape target at a
/// positive cell is the candidate (w, h) with the highest IoU against the box
/// when placed at the cell center with the box's angle.
///
/// Boxes with a side below one pixel, or centered outside the level's image
/// extent, are skipped with a diagnostic.
TargetResult generate_targets(std::span<const RotatedBox> gts, std::span<const LevelSpec> levels,
                              const ShrinkParams& shrink, const ShapeCandidateSet& candidates);

struct BoxDelta {
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  double th = 0.0;
  double ttheta = 0.0;
};

/// Regression offsets of `gt` relative to `anchor`; the angle term is the
/// canonicalized difference divided by pi.
BoxDelta box_delta_encode(const RotatedBox& gt, const RotatedBox& anchor);
RotatedBox box_delta_decode(const BoxDelta& delta, const RotatedBox& anchor);

}  // namespace textanchor
