#include "textanchor/geom.hpp"

#include <cmath>
#include <string>

#include "textanchor/error.hpp"

namespace textanchor {

namespace {

constexpr double kDegenerateArea = 1e-9;

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance(const Point2& a, const Point2& b) { return std::hypot(b.x - a.x, b.y - a.y); }

Point2 midpoint(const Point2& a, const Point2& b) { return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0}; }

double direction_angle(const Point2& from, const Point2& to) {
  return canonicalize_angle(std::atan2(to.y - from.y, to.x - from.x));
}

}  // namespace

Point2::Point2(double px, double py) : x(px), y(py) {
  if (!std::isfinite(px) || !std::isfinite(py)) {
    throw InvalidInput("point coordinates must be finite");
  }
}

RotatedBox::RotatedBox(double cx, double cy, double w, double h, double theta)
    : cx_(cx), cy_(cy), w_(w), h_(h), theta_(theta) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h) ||
      !std::isfinite(theta)) {
    throw InvalidInput("rotated box fields must be finite");
  }
  if (!(h > 0.0)) throw InvalidInput("rotated box needs h > 0, got " + std::to_string(h));
  if (w < h) throw InvalidInput("rotated box needs w >= h");
  if (theta < -kHalfPi || theta >= kHalfPi) {
    throw InvalidInput("rotated box angle must lie in [-pi/2, pi/2), got " + std::to_string(theta));
  }
}

RotatedBox RotatedBox::normalized(double cx, double cy, double w, double h, double theta) {
  if (!std::isfinite(theta)) throw InvalidInput("rotated box fields must be finite");
  if (h > w) {
    std::swap(w, h);
    theta += kHalfPi;
  }
  return {cx, cy, w, h, canonicalize_angle(theta)};
}

Quad::Quad(const std::array<Point2, 4>& vertices) : vertices_(vertices) {
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidInput("quad vertices must be finite");
  }
  if (std::abs(signed_area()) <= kDegenerateArea) throw InvalidInput("degenerate quad (zero area)");

  int positive = 0;
  int negative = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2& prev = vertices_[(i + 3) % 4];
    const Point2& cur = vertices_[i];
    const Point2& next = vertices_[(i + 1) % 4];
    const double c = cross(prev, cur, next);
    const double scale = distance(prev, cur) * distance(cur, next);
    if (std::abs(c) <= 1e-12 * scale) continue;
    (c > 0 ? positive : negative) += 1;
  }
  if (positive > 0 && negative > 0) throw InvalidInput("quad must be convex and simple");
}

double Quad::signed_area() const noexcept {
  double twice = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2& a = vertices_[i];
    const Point2& b = vertices_[(i + 1) % 4];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

AugmentTransform::AugmentTransform(double image_width, double image_height, double theta0)
    : lw_(image_width), lh_(image_height), theta0_(theta0) {
  if (!(image_width > 0.0) || !(image_height > 0.0) || !std::isfinite(image_width) ||
      !std::isfinite(image_height)) {
    throw InvalidInput("augment transform needs positive finite image size");
  }
  if (!(theta0 >= -kHalfPi && theta0 <= kHalfPi)) {
    throw InvalidInput("augment rotation must lie in [-pi/2, pi/2]");
  }
}

double canonicalize_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidInput("angle must be finite");
  if (theta >= -kHalfPi && theta < kHalfPi) return theta;
  double r = theta - kPi * std::floor((theta + kHalfPi) / kPi);
  // floor() can land one period off when theta + pi/2 rounds onto a multiple of pi.
  if (r >= kHalfPi) r -= kPi;
  if (r < -kHalfPi) r += kPi;
  return r;
}

double angle_to_unit(double theta) {
  if (!(theta >= -kHalfPi && theta <= kHalfPi)) theta = canonicalize_angle(theta);
  return theta / kPi + 0.5;
}

double unit_to_angle(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("normalized angle must lie in [0, 1]");
  return kPi * (t - 0.5);
}

RotatedBox quad_to_rotated_box(const Quad& q) {
  const Point2& a = q[0];
  const Point2& b = q[1];
  const Point2& c = q[2];
  const Point2& d = q[3];

  const double cx = (a.x + b.x + c.x + d.x) / 4.0;
  const double cy = (a.y + b.y + c.y + d.y) / 4.0;
  const double ab = distance(a, b);
  const double ad = distance(a, d);

  const Point2 e = midpoint(a, b);
  const Point2 f = midpoint(b, c);
  const Point2 g = midpoint(c, d);
  const Point2 h = midpoint(d, a);

  const double theta = distance(e, g) > distance(h, f) ? direction_angle(e, g) : direction_angle(h, f);
  return {cx, cy, std::max(ab, ad), std::min(ab, ad), theta};
}

std::array<Point2, 4> box_corners(const RotatedBox& b) {
  const double c = std::cos(b.theta());
  const double s = std::sin(b.theta());
  const double hw = b.w() / 2.0;
  const double hh = b.h() / 2.0;
  const std::array<std::array<double, 2>, 4> local{{{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}}};
  std::array<Point2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const double lx = local[i][0];
    const double ly = local[i][1];
    out[i] = Point2{b.cx() + c * lx - s * ly, b.cy() + s * lx + c * ly};
  }
  return out;
}

Quad rotated_box_to_quad(const RotatedBox& b) { return Quad(box_corners(b)); }

Point2 apply_rotation(const AugmentTransform& t, const Point2& p) {
  const double cx = t.image_width() / 2.0;
  const double cy = t.image_height() / 2.0;
  const double c = std::cos(t.theta0());
  const double s = std::sin(t.theta0());
  const double dx = p.x - cx;
  const double dy = p.y - cy;
  return {c * dx + s * dy + cx, -s * dx + c * dy + cy};
}

RotatedBox rotate_box(const AugmentTransform& t, const RotatedBox& b) {
  const Point2 center = apply_rotation(t, b.center());
  return {center.x, center.y, b.w(), b.h(), canonicalize_angle(b.theta() - t.theta0())};
}

}  // namespace textanchor
