#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "textanchor/error.hpp"
#include "textanchor/polyiou.hpp"

using namespace textanchor;

namespace {

RotatedBox random_box(std::mt19937_64& rng, double extent = 100.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return RotatedBox::normalized(extent * u(rng), extent * u(rng), 1 + 50 * u(rng), 1 + 50 * u(rng),
                                -kHalfPi + kPi * u(rng));
}

ConvexPolygon square(double x0, double y0, double side) {
  return ConvexPolygon({Point2{x0, y0}, Point2{x0 + side, y0}, Point2{x0 + side, y0 + side}, Point2{x0, y0 + side}});
}

}  // namespace

TEST(PolygonArea, ShoelaceExamples) {
  EXPECT_DOUBLE_EQ(polygon_area(square(0, 0, 1)), 1.0);
  const std::vector<Point2> tri = {{0, 0}, {2, 0}, {0, 2}};
  EXPECT_DOUBLE_EQ(polygon_area(tri), 2.0);
  const std::vector<Point2> line = {{0, 0}, {1, 1}, {2, 2}};
  EXPECT_DOUBLE_EQ(polygon_area(line), 0.0);
}

TEST(ConvexPolygon, NormalizesOrientationAndRejectsBadRings) {
  const ConvexPolygon cw({Point2{0, 0}, Point2{0, 1}, Point2{1, 1}, Point2{1, 0}});
  EXPECT_DOUBLE_EQ(cw.area(), 1.0);
  EXPECT_THROW(ConvexPolygon({Point2{0, 0}, Point2{1, 1}, Point2{2, 2}}), InvalidInput);
  EXPECT_THROW(ConvexPolygon({Point2{0, 0}, Point2{4, 0}, Point2{1, 1}, Point2{0, 4}}), InvalidInput);
  // Collinear midpoint is merged away.
  const ConvexPolygon merged({Point2{0, 0}, Point2{1, 0}, Point2{2, 0}, Point2{2, 2}, Point2{0, 2}});
  EXPECT_EQ(merged.size(), 4u);
}

TEST(ClipConvex, Examples) {
  const auto same = clip_convex(square(0, 0, 1), square(0, 0, 1));
  ASSERT_TRUE(same);
  EXPECT_NEAR(same->area(), 1.0, 1e-12);
  EXPECT_FALSE(clip_convex(square(0, 0, 1), square(5, 5, 1)));
  const auto offset = clip_convex(square(0, 0, 1), square(0.5, 0.5, 1));
  ASSERT_TRUE(offset);
  EXPECT_NEAR(offset->area(), 0.25, 1e-12);
}

TEST(ClipConvex, AreaBoundedByInputs) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 500; ++n) {
    const auto a = ConvexPolygon::from_box(random_box(rng, 30));
    const auto b = ConvexPolygon::from_box(random_box(rng, 30));
    const auto c = clip_convex(a, b);
    if (!c) continue;
    ASSERT_LE(c->area(), std::min(a.area(), b.area()) * (1 + 1e-12));
    ASSERT_LE(c->size(), 8u);
  }
}

TEST(Iou, ClosedFormExamples) {
  const RotatedBox b(3, 4, 20, 5, 0.4);
  EXPECT_EQ(iou(b, b), 1.0);
  EXPECT_NEAR(iou(RotatedBox(0, 0, 2, 2, 0), RotatedBox(1, 0, 2, 2, 0)), 2.0 / 6.0, 1e-12);
  EXPECT_EQ(iou(RotatedBox(0, 0, 2, 2, 0), RotatedBox(10, 0, 2, 2, 0)), 0.0);
}

TEST(Iou, SquareAgainstItsDiagonalTurn) {
  const RotatedBox a(0, 0, 1, 1, 0);
  const RotatedBox b(0, 0, 1, 1, kPi / 4);
  const double octagon = 2 * (std::sqrt(2.0) - 1);
  const double closed = octagon / (2 - octagon);
  EXPECT_NEAR(iou(a, b), closed, 1e-12);
  EXPECT_NEAR(iou(a, b), iou_oracle(a, b, 1'000'000, 5), 0.002);
}

TEST(Iou, TouchingAndContainedBoxes) {
  EXPECT_NEAR(iou(RotatedBox(0, 0, 2, 2, 0), RotatedBox(2, 0, 2, 2, 0)), 0.0, 1e-12);
  EXPECT_NEAR(iou(RotatedBox(0, 0, 10, 10, 0), RotatedBox(1, 1, 2, 2, 0.3)), 4.0 / 100.0, 1e-12);
}

TEST(Iou, SymmetricBoundedAndRigidMotionInvariant) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 2000; ++n) {
    const RotatedBox a = random_box(rng, 40);
    const RotatedBox b = random_box(rng, 40);
    const double v = iou(a, b);
    ASSERT_EQ(v, iou(b, a));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);

    const double turn = -1 + 2 * u(rng);
    const double dx = 100 * u(rng);
    const double dy = -100 * u(rng);
    auto move = [&](const RotatedBox& r) {
      const double c = std::cos(turn);
      const double s = std::sin(turn);
      return RotatedBox::normalized(c * r.cx() - s * r.cy() + dx, s * r.cx() + c * r.cy() + dy, r.w(), r.h(),
                                    r.theta() + turn);
    };
    ASSERT_NEAR(iou(move(a), move(b)), v, 1e-9);
  }
}

TEST(IouOracle, ExamplesAndPreconditions) {
  const RotatedBox b(0, 0, 30, 10, 0.2);
  EXPECT_NEAR(iou_oracle(b, b, 100'000, 1), 1.0, 0.01);
  EXPECT_EQ(iou_oracle(b, RotatedBox(100, 100, 5, 5, 0), 100'000, 1), 0.0);
  EXPECT_THROW(iou_oracle(b, b, 9'999, 1), InvalidInput);
  EXPECT_EQ(iou_oracle(b, RotatedBox(5, 0, 30, 10, 0.3), 20'000, 9),
            iou_oracle(b, RotatedBox(5, 0, 30, 10, 0.3), 20'000, 9));
}

TEST(IouOracle, WithinThreeSigmaOfKernel) {
  std::mt19937_64 rng(13);
  constexpr std::uint64_t kSamples = 200'000;
  for (int n = 0; n < 200; ++n) {
    const RotatedBox a = random_box(rng, 20);
    const RotatedBox b = random_box(rng, 20);
    const double exact = iou(a, b);
    const double est = iou_oracle(a, b, kSamples, 100 + n);
    // Binomial error of a ratio estimated from the samples landing in the union.
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto& box : {a, b}) {
      for (const auto& p : box_corners(box)) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
      }
    }
    const double union_area = a.area() + b.area() - intersection_area(a, b);
    const double in_union = kSamples * union_area / ((x1 - x0) * (y1 - y0));
    const double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-6) / in_union);
    ASSERT_NEAR(est, exact, 3 * sigma) << n;
  }
}

TEST(IouMatrix, MatchesPairwiseForAnyThreadCount) {
  std::mt19937_64 rng(14);
  std::vector<RotatedBox> a;
  std::vector<RotatedBox> b;
  for (int n = 0; n < 13; ++n) a.push_back(random_box(rng, 30));
  for (int n = 0; n < 7; ++n) b.push_back(random_box(rng, 30));
  const auto serial = iou_matrix(a, b, 1);
  EXPECT_EQ(iou_matrix(a, b, 4), serial);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) EXPECT_EQ(serial[i * b.size() + j], iou(a[i], b[j]));
  }
}

TEST(MinAreaRect, RectangleCornersGiveBackTheRectangle) {
  const std::vector<Point2> axis = {{0, 0}, {10, 0}, {10, 4}, {0, 4}};
  const RotatedBox r = min_area_rect(axis);
  EXPECT_NEAR(r.cx(), 5, 1e-12);
  EXPECT_NEAR(r.cy(), 2, 1e-12);
  EXPECT_NEAR(r.w(), 10, 1e-12);
  EXPECT_NEAR(r.h(), 4, 1e-12);
  EXPECT_NEAR(r.theta(), 0, 1e-12);

  const RotatedBox turned(7, -3, 25, 6, 0.6);
  const auto corners = box_corners(turned);
  const RotatedBox fit = min_area_rect(std::vector<Point2>(corners.begin(), corners.end()));
  EXPECT_NEAR(fit.cx(), 7, 1e-6);
  EXPECT_NEAR(fit.cy(), -3, 1e-6);
  EXPECT_NEAR(fit.w(), 25, 1e-6);
  EXPECT_NEAR(fit.h(), 6, 1e-6);
  EXPECT_NEAR(fit.theta(), 0.6, 1e-6);
}

TEST(MinAreaRect, CollinearPointsAreRejected) {
  const std::vector<Point2> line = {{0, 0}, {1, 1}, {3, 3}, {2, 2}};
  EXPECT_THROW(min_area_rect(line), InvalidInput);
}

TEST(MinAreaRect, BeatsAngleSweepAndContainsAllPoints) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2> pts;
    for (int k = 0; k < 20; ++k) pts.push_back({g(rng) * 2, g(rng)});
    const RotatedBox r = min_area_rect(pts);
    for (const auto& p : pts) ASSERT_TRUE(contains(r, p, 1e-7));

    double sweep_best = INFINITY;
    for (int step = 0; step < 360; ++step) {
      const double a = step * kPi / 360.0;
      const double c = std::cos(a);
      const double s = std::sin(a);
      double u0 = INFINITY, u1 = -INFINITY, v0 = INFINITY, v1 = -INFINITY;
      for (const auto& p : pts) {
        const double u = p.x * c + p.y * s;
        const double v = -p.x * s + p.y * c;
        u0 = std::min(u0, u);
        u1 = std::max(u1, u);
        v0 = std::min(v0, v);
        v1 = std::max(v1, v);
      }
      sweep_best = std::min(sweep_best, (u1 - u0) * (v1 - v0));
    }
    ASSERT_LE(r.area(), sweep_best * (1 + 1e-12));
  }
}

TEST(ConvexHull, DropsInteriorAndDuplicatePoints) {
  const std::vector<Point2> pts = {{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}, {1, 3}, {4, 0}, {2, 0}};
  const auto hull = convex_hull(pts);
  EXPECT_EQ(hull.size(), 4u);
  EXPECT_DOUBLE_EQ(polygon_area(hull), 16.0);
}
