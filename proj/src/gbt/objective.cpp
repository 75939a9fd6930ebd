#include "imbboost/objective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "imbboost/error.hpp"

namespace imbboost::gbt {

namespace {

// log(sigmoid(z)) without overflow.
double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double positive_weight(const ObjectiveParams& params) {
  return params.weighted_alpha ? params.scale_pos_weight * *params.weighted_alpha : params.scale_pos_weight;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ObjectiveParams::validate() const {
  if (!std::isfinite(scale_pos_weight) || scale_pos_weight < 1.0) {
    throw Error("invalid parameter: scale_pos_weight must be >= 1");
  }
  if (weighted_alpha && focal_gamma) {
    throw Error("invalid parameter combination: weighted_alpha and focal_gamma are mutually exclusive");
  }
  if (weighted_alpha && (!std::isfinite(*weighted_alpha) || *weighted_alpha < 1.0)) {
    throw Error("invalid parameter: weighted_alpha must be >= 1");
  }
  if (focal_gamma && (!std::isfinite(*focal_gamma) || *focal_gamma < 0.0)) {
    throw Error("invalid parameter: focal_gamma must be >= 0");
  }
}

std::string ObjectiveParams::tag() const {
  std::string t = "binary:logistic";
  if (scale_pos_weight != 1.0) t += ";scale_pos_weight=" + number(scale_pos_weight);
  if (weighted_alpha) t += ";weighted_alpha=" + number(*weighted_alpha);
  if (focal_gamma) t += ";focal_gamma=" + number(*focal_gamma);
  return t;
}

double sigmoid(double margin) {
  if (margin >= 0.0) return 1.0 / (1.0 + std::exp(-margin));
  const double e = std::exp(margin);
  return e / (1.0 + e);
}

double loss(const ObjectiveParams& params, std::uint8_t label, double margin) {
  const double log_p = log_sigmoid(margin);
  const double log_q = log_sigmoid(-margin);
  if (params.focal_gamma) {
    const double g = *params.focal_gamma;
    const double p = sigmoid(margin);
    const double q = 1.0 - p;
    return label != 0 ? -params.scale_pos_weight * std::pow(q, g) * log_p : -std::pow(p, g) * log_q;
  }
  return label != 0 ? -positive_weight(params) * log_p : -log_q;
}

double total_loss(const ObjectiveParams& params, std::span<const std::uint8_t> labels,
                  std::span<const double> margins) {
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) sum += loss(params, labels[i], margins[i]);
  return sum;
}

GradPair loss_derivatives(const ObjectiveParams& params, std::uint8_t label, double margin) {
  const double p = sigmoid(margin);
  const double q = 1.0 - p;
  GradPair d;
  if (params.focal_gamma) {
    const double g = *params.focal_gamma;
    if (label != 0) {
      // L = -(1-p)^g log p, dp/dz = p q.
      const double log_p = log_sigmoid(margin);
      const double qg = std::pow(q, g);
      const double qg1 = std::pow(q, g + 1.0);
      d.grad = g * p * qg * log_p - qg1;
      d.hess = g * p * qg1 * log_p - g * g * p * p * qg * log_p + g * p * qg1 + (g + 1.0) * p * qg1;
      d.grad *= params.scale_pos_weight;
      d.hess *= params.scale_pos_weight;
    } else {
      // L = -p^g log q.
      const double log_q = log_sigmoid(-margin);
      const double pg = std::pow(p, g);
      const double pg1 = std::pow(p, g + 1.0);
      d.grad = pg1 - g * q * pg * log_q;
      d.hess = (g + 1.0) * q * pg1 + g * q * pg1 * log_q - g * g * q * q * pg * log_q + g * q * pg1;
    }
    return d;
  }
  d.grad = label != 0 ? p - 1.0 : p;
  d.hess = p * q;
  if (label != 0) {
    const double w = positive_weight(params);
    d.grad *= w;
    d.hess *= w;
  }
  return d;
}

void grad_hess(const ObjectiveParams& params, std::span<const std::uint8_t> labels,
               std::span<const double> margins, std::vector<GradPair>& out) {
  if (labels.size() != margins.size()) throw Error("length mismatch: labels vs margins");
  out.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    GradPair d = loss_derivatives(params, labels[i], margins[i]);
    d.hess = std::max(d.hess, kHessianFloor);
    out[i] = d;
  }
}

std::vector<GradPair> grad_hess(const ObjectiveParams& params, std::span<const std::uint8_t> labels,
                                std::span<const double> margins) {
  params.validate();
  std::vector<GradPair> out;
  grad_hess(params, labels, margins, out);
  return out;
}

}  // namespace imbboost::gbt
