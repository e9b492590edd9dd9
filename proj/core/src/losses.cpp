#include "textanchor/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "textanchor/error.hpp"

namespace textanchor::losses {

namespace {

void check_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput(std::string(what) + " must lie strictly inside (0, 1)");
}

void check_label(int y) {
  if (y != 0 && y != 1) throw InvalidInput("class label must be 0 or 1");
}

// Smooth L1 of 1 - min(r, 1/r) with r = pred / target, and its derivative
// with respect to log(pred).
std::pair<double, double> bounded_ratio_term(double pred, double target) {
  const bool under = pred < target;
  const double ratio = under ? pred / target : target / pred;
  const LossValue l1 = smooth_l1(1.0 - ratio);
  // d ratio / d log(pred): +ratio when pred < target, -ratio otherwise.
  const double d_ratio = under ? ratio : -ratio;
  return {l1.value, -l1.gradient[0] * d_ratio};
}

}  // namespace

void validate(const LossWeights& weights) {
  if (!(weights.alpha >= 0.0) || !(weights.beta >= 0.0) || !(weights.lambda >= 0.0) ||
      !(weights.focal_gamma >= 0.0)) {
    throw InvalidInput("loss weights must be non-negative");
  }
  if (!(weights.focal_alpha > 0.0 && weights.focal_alpha < 1.0)) {
    throw InvalidInput("focal alpha must lie in (0, 1)");
  }
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

LossValue focal_loss(int y, double y_prime, double focal_alpha, double focal_gamma) {
  check_label(y);
  check_probability(y_prime, "focal loss prediction");
  const double p = y_prime;
  const double a = focal_alpha;
  const double g = focal_gamma;
  if (y == 1) {
    const double q = 1.0 - p;
    const double value = -a * std::pow(q, g) * std::log(p);
    const double grad = a * (g * std::pow(q, g - 1.0) * std::log(p) - std::pow(q, g) / p);
    return {value, {grad}};
  }
  const double value = -(1.0 - a) * std::pow(p, g) * std::log1p(-p);
  const double grad = -(1.0 - a) * (g * std::pow(p, g - 1.0) * std::log1p(-p) - std::pow(p, g) / (1.0 - p));
  return {value, {grad}};
}

LossValue angle_loss(double theta_hat, double theta_g) {
  if (!std::isfinite(theta_hat) || !std::isfinite(theta_g)) throw InvalidInput("angles must be finite");
  const double d = theta_hat - theta_g;
  return {1.0 - std::cos(d), {std::sin(d)}};
}

LossValue smooth_l1(double x) {
  if (!std::isfinite(x)) throw InvalidInput("smooth_l1 input must be finite");
  if (std::abs(x) < 1.0) return {0.5 * x * x, {x}};
  return {std::abs(x) - 0.5, {x > 0.0 ? 1.0 : -1.0}};
}

LossValue shape_loss(double w, double h, double wg, double hg) {
  if (!(w > 0.0) || !(h > 0.0) || !(wg > 0.0) || !(hg > 0.0)) {
    throw InvalidInput("shape loss sizes must be positive");
  }
  const auto [lw, gw] = bounded_ratio_term(w, wg);
  const auto [lh, gh] = bounded_ratio_term(h, hg);
  return {lw + lh, {gw, gh}};
}

LossValue conf_loss(int y, double p) {
  check_label(y);
  check_probability(p, "confidence");
  if (y == 1) return {-std::log(p), {-1.0 / p}};
  return {-std::log1p(-p), {1.0 / (1.0 - p)}};
}

double total_loss(const LossComponents& c, const LossWeights& weights) {
  if (c.conf < 0.0 || c.reg < 0.0 || c.loc < 0.0 || c.angle < 0.0 || c.shape < 0.0) {
    throw InvalidInput("loss components must be non-negative");
  }
  return c.conf + c.reg + weights.alpha * c.loc + weights.beta * c.angle + weights.lambda * c.shape;
}

MapLosses map_losses(const PredictionMaps& pred, const TargetMaps& targets, const LossWeights& weights) {
  validate(weights);
  const LevelSpec& lp = pred.level;
  const LevelSpec& lt = targets.level;
  if (lp.grid_w != lt.grid_w || lp.grid_h != lt.grid_h || lp.stride != lt.stride || lp.k != lt.k) {
    throw InvalidInput("prediction and target maps describe different levels");
  }
  validate(pred);

  const std::size_t n = lt.cells();
  std::vector<double> loc_terms;
  std::vector<double> angle_terms;
  std::vector<double> shape_terms;
  MapLosses out;
  out.location.gradient.assign(n, 0.0);
  out.angle.gradient.assign(n, 0.0);
  out.shape.gradient.assign(2 * n, 0.0);

  const auto cls = targets.location.values();
  const auto prob = pred.location_prob.values();
  const auto orient = pred.orientation.values();
  const auto orient_t = targets.orientation.values();
  const auto dw = pred.shape_dw.values();
  const auto dh = pred.shape_dh.values();
  const auto dw_t = targets.shape_dw.values();
  const auto dh_t = targets.shape_dh.values();
  const auto valid = targets.shape_valid.values();

  for (std::size_t c = 0; c < n; ++c) {
    if (cls[c] != LocationClass::Ignore) {
      const double p = std::clamp(prob[c], kProbEpsilon, 1.0 - kProbEpsilon);
      const LossValue l = focal_loss(cls[c] == LocationClass::Positive ? 1 : 0, p, weights.focal_alpha,
                                     weights.focal_gamma);
      loc_terms.push_back(l.value);
      out.location.gradient[c] = l.gradient[0];
    }
    if (cls[c] != LocationClass::Negative) {
      const LossValue l = angle_loss(unit_to_angle(orient[c]), unit_to_angle(orient_t[c]));
      angle_terms.push_back(l.value);
      out.angle.gradient[c] = l.gradient[0] * kPi;  // d theta / d t = pi
    }
    if (valid[c] != 0) {
      const BoxSize ps = shape_decode({dw[c], dh[c]}, lt);
      const BoxSize ts = shape_decode({dw_t[c], dh_t[c]}, lt);
      const LossValue l = shape_loss(ps.w, ps.h, ts.w, ts.h);
      shape_terms.push_back(l.value);
      out.shape.gradient[c] = l.gradient[0];
      out.shape.gradient[n + c] = l.gradient[1];
    }
  }

  auto reduce = [](LossValue& lv, const std::vector<double>& terms) {
    if (terms.empty()) {
      lv.value = 0.0;
      std::fill(lv.gradient.begin(), lv.gradient.end(), 0.0);
      return;
    }
    const double count = static_cast<double>(terms.size());
    lv.value = compensated_sum(terms) / count;
    for (double& g : lv.gradient) g /= count;
  };
  reduce(out.location, loc_terms);
  reduce(out.angle, angle_terms);
  reduce(out.shape, shape_terms);
  out.weighted =
      weights.alpha * out.location.value + weights.beta * out.angle.value + weights.lambda * out.shape.value;
  return out;
}

}  // namespace textanchor::losses
