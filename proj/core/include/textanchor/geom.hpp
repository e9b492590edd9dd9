#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace textanchor {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// A point in image coordinates (pixels). Construction rejects NaN/inf.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2() = default;
  Point2(double px, double py);

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Rotated rectangle (cx, cy, w, h, theta).
///
/// `w` is the long side and `theta` the direction of the long side measured
/// with atan2 in image coordinates, always inside [-pi/2, pi/2). The checked
/// constructor rejects anything else; `normalized()` repairs side order and
/// angle range instead.
class RotatedBox {
 public:
  RotatedBox(double cx, double cy, double w, double h, double theta);

  /// Swaps w/h (rotating theta by pi/2) when h > w and canonicalizes theta.
  static RotatedBox normalized(double cx, double cy, double w, double h, double theta);

  double cx() const noexcept { return cx_; }
  double cy() const noexcept { return cy_; }
  double w() const noexcept { return w_; }
  double h() const noexcept { return h_; }
  double theta() const noexcept { return theta_; }
  Point2 center() const { return {cx_, cy_}; }
  double area() const noexcept { return w_ * h_; }

  friend bool operator==(const RotatedBox&, const RotatedBox&) = default;

 private:
  double cx_;
  double cy_;
  double w_;
  double h_;
  double theta_;
};

/// Four-vertex annotation polygon in storage order A, B, C, D. Must be simple,
/// convex and of positive area; either winding is accepted.
class Quad {
 public:
  explicit Quad(const std::array<Point2, 4>& vertices);

  const std::array<Point2, 4>& vertices() const noexcept { return vertices_; }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }

  /// Signed shoelace area; positive for counter-clockwise storage order.
  double signed_area() const noexcept;

  friend bool operator==(const Quad&, const Quad&) = default;

 private:
  std::array<Point2, 4> vertices_;
};

/// Image rotation about the image center used for augmentation.
class AugmentTransform {
 public:
  AugmentTransform(double image_width, double image_height, double theta0);

  double image_width() const noexcept { return lw_; }
  double image_height() const noexcept { return lh_; }
  double theta0() const noexcept { return theta0_; }

  AugmentTransform inverse() const { return {lw_, lh_, -theta0_}; }

 private:
  double lw_;
  double lh_;
  double theta0_;
};

/// Maps theta into [-pi/2, pi/2) by adding an integer multiple of pi.
double canonicalize_angle(double theta);

/// theta / pi + 1/2. Values outside [-pi/2, pi/2] are canonicalized first.
double angle_to_unit(double theta);

/// pi * (t - 1/2). Throws InvalidInput for t outside [0, 1].
double unit_to_angle(double t);

/// Angle label generation from a quadrilateral annotation.
///
/// The center is the vertex mean, w/h are the longer/shorter of |AB| and |AD|.
/// With E, F, G, H the midpoints of AB, BC, CD, DA, the angle is the direction
/// of EG when |EG| > |HF| and the direction of HF otherwise (ties go to HF).
RotatedBox quad_to_rotated_box(const Quad& q);

/// Corners of `b`, counter-clockwise, starting from local (-w/2, -h/2).
Quad rotated_box_to_quad(const RotatedBox& b);

/// Same corners as rotated_box_to_quad without the Quad validation pass.
std::array<Point2, 4> box_corners(const RotatedBox& b);

/// T(lw/2, lh/2) * R(theta0) * T(-lw/2, -lh/2) * p with
/// R = [[cos, sin], [-sin, cos]].
Point2 apply_rotation(const AugmentTransform& t, const Point2& p);

/// Moves the center with apply_rotation; the long-side direction turns from
/// theta to theta - theta0 under the same matrix.
RotatedBox rotate_box(const AugmentTransform& t, const RotatedBox& b);

}  // namespace textanchor
