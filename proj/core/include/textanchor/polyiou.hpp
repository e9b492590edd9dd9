#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "textanchor/geom.hpp"

namespace textanchor {

/// Vertices closer than this are merged and points within this signed
/// distance of a clipping edge count as inside (pixels).
inline constexpr double kClipTolerance = 1e-9;

/// Counter-clockwise convex polygon.
///
/// The constructor merges near-duplicate and collinear vertices, flips
/// clockwise input to counter-clockwise and rejects non-convex or degenerate
/// (fewer than 3 distinct corners) input with InvalidInput.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Point2> vertices);

  static ConvexPolygon from_box(const RotatedBox& box);

  std::span<const Point2> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  double area() const noexcept;

 private:
  struct Trusted {};
  ConvexPolygon(Trusted, std::vector<Point2> vertices) : vertices_(std::move(vertices)) {}
  friend std::optional<ConvexPolygon> clip_convex(const ConvexPolygon&, const ConvexPolygon&);

  std::vector<Point2> vertices_;
};

/// Shoelace area of an arbitrary vertex ring (absolute value, so either
/// winding works). Fewer than 3 points or collinear points give 0.
double polygon_area(std::span<const Point2> ring);
double polygon_area(const ConvexPolygon& p);

/// Intersection of two convex polygons (Sutherland-Hodgman); nullopt when the
/// overlap has no area.
std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip);

/// Area of the overlap of two rotated boxes. Symmetric bit-for-bit.
double intersection_area(const RotatedBox& a, const RotatedBox& b);

/// Rotated-box intersection over union in [0, 1]; iou(a, b) == iou(b, a)
/// exactly.
double iou(const RotatedBox& a, const RotatedBox& b);

/// Monte-Carlo IoU estimate: `samples` uniform points over the axis-aligned
/// bounding box of both boxes. Deterministic for a given seed. Requires
/// samples >= 10^4.
double iou_oracle(const RotatedBox& a, const RotatedBox& b, std::uint64_t samples, std::uint64_t seed);

/// Row-major |a| x |b| IoU matrix. Entries are computed independently, so the
/// result does not depend on `threads`.
std::vector<double> iou_matrix(std::span<const RotatedBox> a, std::span<const RotatedBox> b,
                               unsigned threads = 1);

/// Minimum-area enclosing rectangle of a point set. One side of the result is
/// collinear with an edge of the convex hull. Throws InvalidInput when the
/// points are collinear or fewer than 3.
RotatedBox min_area_rect(std::span<const Point2> points);

/// Convex hull, counter-clockwise, collinear points dropped.
std::vector<Point2> convex_hull(std::span<const Point2> points);

/// Whether `p` lies inside (or on the boundary of) `box`.
bool contains(const RotatedBox& box, const Point2& p, double tolerance = 0.0);

}  // namespace textanchor
