#pragma once

#include <span>
#include <vector>

#include "textanchor/decode.hpp"
#include "textanchor/targets.hpp"

namespace textanchor::losses {

/// Probabilities are clamped into [kProbEpsilon, 1 - kProbEpsilon] before any
/// logarithm taken on map inputs.
inline constexpr double kProbEpsilon = 1e-7;

struct LossWeights {
  double alpha = 1.0;   // location branch
  double beta = 1.0;    // orientation branch
  double lambda = 0.1;  // shape branch
  double focal_alpha = 0.25;
  double focal_gamma = 2.0;
};

void validate(const LossWeights& weights);

/// A loss value with its gradient. The gradient's layout is documented per
/// function.
struct LossValue {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Focal loss on a probability y' in (0, 1). Gradient: {dL/dy'}.
LossValue focal_loss(int y, double y_prime, double focal_alpha, double focal_gamma);

/// 1 - cos(theta_hat - theta_g). Gradient: {dL/dtheta_hat}.
LossValue angle_loss(double theta_hat, double theta_g);

/// Smooth L1 with the transition at |x| = 1. Gradient: {dL/dx}.
LossValue smooth_l1(double x);

/// Bounded-IoU shape loss
///   SmoothL1(1 - min(w/wg, wg/w)) + SmoothL1(1 - min(h/hg, hg/h)).
/// Gradient: {dL/ddw, dL/ddh} where w = k s exp(dw), so dL/ddw = w dL/dw.
LossValue shape_loss(double w, double h, double wg, double hg);

/// Binary cross entropy. Gradient: {dL/dp}.
LossValue conf_loss(int y, double p);

struct LossComponents {
  double conf = 0.0;
  double reg = 0.0;
  double loc = 0.0;
  double angle = 0.0;
  double shape = 0.0;
};

/// conf + reg + alpha loc + beta angle + lambda shape.
double total_loss(const LossComponents& components, const LossWeights& weights);

/// Branch losses averaged over a level's maps. Gradients are per cell in
/// row-major order: location and angle hold one entry per cell (w.r.t.
/// location_prob and orientation), shape holds dw entries followed by dh
/// entries. Cells outside a branch's mask get zero gradient.
struct MapLosses {
  LossValue location;  // focal, over non-ignore cells
  LossValue angle;     // cosine, over non-negative cells
  LossValue shape;     // bounded IoU, over shape_valid cells
  double weighted = 0.0;  // alpha loc + beta angle + lambda shape
};

MapLosses map_losses(const PredictionMaps& pred, const TargetMaps& targets, const LossWeights& weights);

/// Neumaier-compensated sum; result does not depend on how the input was
/// produced, only on its order.
double compensated_sum(std::span<const double> values);

}  // namespace textanchor::losses
