#pragma once

#include <vector>

#include "imbboost/booster.hpp"
#include "imbboost/dataset.hpp"
#include "imbboost/transform.hpp"

namespace imbboost::tuning {

// Preprocessing fitted on a training partition plus the model trained on
// its output. Raw tables go in, probabilities come out.
struct FittedPipeline {
  prep::TransformState transform;
  gbt::Ensemble model;

  Dataset prepare(const Dataset& raw) const { return prep::apply_transform(transform, raw); }
  std::vector<double> predict_proba(const Dataset& raw) const;
};

FittedPipeline fit_pipeline(const Dataset& raw_train, const gbt::TrainConfig& config,
                            const prep::MissingPolicy& missing = {});

}  // namespace imbboost::tuning
