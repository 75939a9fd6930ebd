#include "imbboost/pipeline.hpp"

namespace imbboost::tuning {

std::vector<double> FittedPipeline::predict_proba(const Dataset& raw) const {
  return gbt::predict_proba(model, prepare(raw));
}

FittedPipeline fit_pipeline(const Dataset& raw_train, const gbt::TrainConfig& config,
                            const prep::MissingPolicy& missing) {
  FittedPipeline out;
  out.transform = prep::fit_transform(raw_train, missing);
  out.model = gbt::fit(prep::apply_transform(out.transform, raw_train), config).model;
  return out;
}

}  // namespace imbboost::tuning
