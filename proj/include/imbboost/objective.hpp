#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace imbboost::gbt {

// Loss parameters of the binary logistic family. With p = sigmoid(margin):
//
//   plain      -[y log p + (1-y) log(1-p)]
//   weighted   -[a y log p + (1-y) log(1-p)]              (alpha = a)
//   focal      -[y (1-p)^g log p + (1-y) p^g log(1-p)]    (gamma = g)
//
// scale_pos_weight multiplies the positive term of whichever loss is active.
// Weighted and focal are mutually exclusive.
struct ObjectiveParams {
  double scale_pos_weight = 1.0;
  std::optional<double> weighted_alpha;
  std::optional<double> focal_gamma;

  bool operator==(const ObjectiveParams&) const = default;

  void validate() const;  // throws Error on an invalid combination
  std::string tag() const;
};

// Per-sample first and second derivative of the loss w.r.t. the margin.
struct GradPair {
  double grad = 0.0;
  double hess = 0.0;
};

inline constexpr double kHessianFloor = 1e-16;

double sigmoid(double margin);

double loss(const ObjectiveParams& params, std::uint8_t label, double margin);
double total_loss(const ObjectiveParams& params, std::span<const std::uint8_t> labels,
                  std::span<const double> margins);

// Exact analytic derivatives. The focal hessian can be negative far on the
// wrong side of the boundary; this function does not clamp it.
GradPair loss_derivatives(const ObjectiveParams& params, std::uint8_t label, double margin);

// Derivatives as used for boosting: hessians clamped below at kHessianFloor.
void grad_hess(const ObjectiveParams& params, std::span<const std::uint8_t> labels,
               std::span<const double> margins, std::vector<GradPair>& out);
std::vector<GradPair> grad_hess(const ObjectiveParams& params, std::span<const std::uint8_t> labels,
                                std::span<const double> margins);

}  // namespace imbboost::gbt
