#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "textanchor/error.hpp"
#include "textanchor/losses.hpp"

using namespace textanchor;
using namespace textanchor::losses;

namespace {

// Central difference with a relative-error floor; returns the worst error.
template <typename F>
double gradient_error(F f, std::vector<double> x, const std::vector<double>& analytic) {
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double keep = x[k];
    x[k] = keep + h;
    const double up = f(x);
    x[k] = keep - h;
    const double down = f(x);
    x[k] = keep;
    const double numeric = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(numeric - analytic[k]) / std::max(std::abs(numeric), 1e-6));
  }
  return worst;
}

}  // namespace

TEST(FocalLoss, Examples) {
  EXPECT_NEAR(focal_loss(1, 1 - 1e-12, 0.25, 2).value, 0.0, 1e-12);
  EXPECT_NEAR(focal_loss(1, 0.5, 0.25, 2).value, 0.25 * 0.25 * std::log(2.0), 1e-15);
  EXPECT_NEAR(focal_loss(1, 0.5, 0.25, 2).value, 0.04332, 1e-5);
  EXPECT_THROW(focal_loss(1, 0.0, 0.25, 2), InvalidInput);
  EXPECT_THROW(focal_loss(0, 1.0, 0.25, 2), InvalidInput);
  EXPECT_THROW(focal_loss(2, 0.5, 0.25, 2), InvalidInput);
}

TEST(FocalLoss, DegeneratesToHalfCrossEntropy) {
  for (int n = 1; n < 100; ++n) {
    const double p = n / 100.0;
    for (int y : {0, 1}) ASSERT_NEAR(focal_loss(y, p, 0.5, 0).value, 0.5 * conf_loss(y, p).value, 1e-12);
  }
}

TEST(AngleLoss, ExamplesAndCanonicalization) {
  EXPECT_EQ(angle_loss(0.3, 0.3).value, 0.0);
  EXPECT_NEAR(angle_loss(kHalfPi, 0).value, 1.0, 1e-15);
  EXPECT_NEAR(angle_loss(kPi, 0).value, 2.0, 1e-15);
  EXPECT_NEAR(angle_loss(canonicalize_angle(1.0 + kPi), canonicalize_angle(1.0)).value, 0.0, 1e-12);
}

TEST(SmoothL1, Branches) {
  EXPECT_EQ(smooth_l1(0).value, 0.0);
  EXPECT_EQ(smooth_l1(0.5).value, 0.125);
  EXPECT_EQ(smooth_l1(2).value, 1.5);
  EXPECT_EQ(smooth_l1(-2).value, 1.5);
  EXPECT_EQ(smooth_l1(-2).gradient[0], -1.0);
  EXPECT_NEAR(smooth_l1(1 - 1e-12).value, smooth_l1(1 + 1e-12).value, 1e-11);
  EXPECT_NEAR(smooth_l1(1 - 1e-12).gradient[0], smooth_l1(1 + 1e-12).gradient[0], 1e-11);
}

TEST(ShapeLoss, Examples) {
  EXPECT_EQ(shape_loss(30, 10, 30, 10).value, 0.0);
  EXPECT_DOUBLE_EQ(shape_loss(60, 10, 30, 10).value, 0.125);
  EXPECT_DOUBLE_EQ(shape_loss(15, 10, 30, 10).value, 0.125);
  EXPECT_THROW(shape_loss(0, 10, 30, 10), InvalidInput);
  EXPECT_THROW(shape_loss(10, 10, 30, -1), InvalidInput);
}

TEST(ConfLoss, Examples) {
  EXPECT_NEAR(conf_loss(1, 1 - 1e-12).value, 0.0, 1e-11);
  EXPECT_NEAR(conf_loss(1, 0.5).value, std::log(2.0), 1e-15);
  EXPECT_NEAR(conf_loss(0, 0.5).value, std::log(2.0), 1e-15);
  EXPECT_THROW(conf_loss(1, 1.0), InvalidInput);
}

TEST(TotalLoss, WeightedSum) {
  EXPECT_EQ(total_loss({}, {}), 0.0);
  EXPECT_DOUBLE_EQ(total_loss({1, 1, 1, 1, 1}, {}), 4.1);
  LossWeights no_shape;
  no_shape.lambda = 0;
  EXPECT_DOUBLE_EQ(total_loss({1, 1, 1, 1, 100}, no_shape), 4.0);
  LossWeights bad;
  bad.alpha = -1;
  EXPECT_THROW(validate(bad), InvalidInput);
}

TEST(Losses, NonNegativeAndGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const double p = 0.02 + 0.96 * u(rng);
    const int y = n % 2;
    const auto fl = focal_loss(y, p, 0.25, 2);
    ASSERT_GE(fl.value, 0);
    ASSERT_LE(gradient_error([&](const std::vector<double>& x) { return focal_loss(y, x[0], 0.25, 2).value; }, {p},
                             fl.gradient),
              1e-4);
    const auto cl = conf_loss(y, p);
    ASSERT_LE(gradient_error([&](const std::vector<double>& x) { return conf_loss(y, x[0]).value; }, {p},
                             cl.gradient),
              1e-4);

    const double a = -3 + 6 * u(rng);
    const double g = -1.5 + 3 * u(rng);
    const auto al = angle_loss(a, g);
    ASSERT_GE(al.value, 0);
    ASSERT_LE(gradient_error([&](const std::vector<double>& x) { return angle_loss(x[0], g).value; }, {a},
                             al.gradient),
              1e-4);

    double x = -3 + 6 * u(rng);
    if (std::abs(std::abs(x) - 1) < 1e-3) x += 0.01;
    ASSERT_LE(gradient_error([](const std::vector<double>& v) { return smooth_l1(v[0]).value; }, {x},
                             smooth_l1(x).gradient),
              1e-4);

    const double wg = 10 + 90 * u(rng);
    const double hg = 5 + 30 * u(rng);
    const double dw = std::log(wg) + (u(rng) - 0.5);
    const double dh = std::log(hg) + (u(rng) - 0.5);
    const auto sl = shape_loss(std::exp(dw), std::exp(dh), wg, hg);
    ASSERT_GE(sl.value, 0);
    auto shape_f = [&](const std::vector<double>& v) { return shape_loss(std::exp(v[0]), std::exp(v[1]), wg, hg).value; };
    ASSERT_LE(gradient_error(shape_f, {dw, dh}, sl.gradient), 1e-4);
  }
}

TEST(MapLosses, IdealPredictionsGiveZero) {
  const std::vector<LevelSpec> levels = {LevelSpec{4, 5.0, 12, 12, false}};
  const std::vector<RotatedBox> gts = {RotatedBox(20, 20, 24, 10, 0.4)};
  const TargetMaps t = generate_targets(gts, levels, {}, {}).levels[0];
  const MapLosses m = map_losses(ideal_predictions(t), t, {});
  EXPECT_NEAR(m.location.value, 0.0, 1e-9);
  EXPECT_NEAR(m.angle.value, 0.0, 1e-12);
  EXPECT_NEAR(m.shape.value, 0.0, 1e-12);
  EXPECT_EQ(m.location.gradient.size(), 144u);
  EXPECT_EQ(m.shape.gradient.size(), 288u);
}

TEST(MapLosses, AllIgnoreGivesZeroLocationLoss) {
  TargetMaps t(LevelSpec{4, 5.0, 3, 3, false});
  for (auto& c : t.location.values()) c = LocationClass::Ignore;
  for (auto& o : t.orientation.values()) o = 0.5;
  PredictionMaps p(t.level);
  for (double& v : p.location_prob.values()) v = 0.7;
  const MapLosses m = map_losses(p, t, {});
  EXPECT_EQ(m.location.value, 0.0);
  for (double g : m.location.gradient) EXPECT_EQ(g, 0.0);
}

TEST(MapLosses, SinglePositiveCellEqualsPerCellValues) {
  TargetMaps t(LevelSpec{4, 5.0, 1, 1, false});
  t.location.at(0, 0) = LocationClass::Positive;
  t.orientation.at(0, 0) = 0.5;
  t.shape_dw.at(0, 0) = 0.2;
  t.shape_dh.at(0, 0) = -0.1;
  t.shape_valid.at(0, 0) = 1;
  PredictionMaps p(t.level);
  p.location_prob.at(0, 0) = 0.6;
  p.orientation.at(0, 0) = 0.6;
  p.shape_dw.at(0, 0) = 0.5;
  p.shape_dh.at(0, 0) = -0.1;
  const LossWeights w;
  const MapLosses m = map_losses(p, t, w);
  EXPECT_DOUBLE_EQ(m.location.value, focal_loss(1, 0.6, 0.25, 2).value);
  EXPECT_DOUBLE_EQ(m.angle.value, angle_loss(unit_to_angle(0.6), 0.0).value);
  EXPECT_DOUBLE_EQ(m.shape.value, shape_loss(20 * std::exp(0.5), 20 * std::exp(-0.1), 20 * std::exp(0.2),
                                             20 * std::exp(-0.1))
                                      .value);
  EXPECT_DOUBLE_EQ(m.weighted, m.location.value + m.angle.value + 0.1 * m.shape.value);
}

TEST(MapLosses, MismatchedLevelsAreRejected) {
  const TargetMaps t(LevelSpec{4, 5.0, 3, 3, false});
  const PredictionMaps p(LevelSpec{4, 5.0, 3, 4, false});
  EXPECT_THROW(map_losses(p, t, {}), InvalidInput);
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  const std::vector<double> v = {1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(compensated_sum(v), 2.0);
  std::vector<double> many(100000, 0.1);
  EXPECT_NEAR(compensated_sum(many), 10000.0, 1e-9);
  EXPECT_EQ(compensated_sum(std::vector<double>{}), 0.0);
}
