#pragma once

#include <vector>

#include "stance/model/features.hpp"
#include "stance/model/tga.hpp"
#include "stance/model/trainer.hpp"

namespace stance::model {

struct TgaModel {
  TgaParams params;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Examples used for early stopping: the zero-shot dev subset, or all of dev
/// when no dev topic is unseen.
std::vector<StanceExample> early_stopping_examples(const DatasetSplit& split);

/// Trains the TGA head on split.train, selecting on zero-shot dev macro-F1.
TgaModel train(const DatasetSplit& split, const Featurizer& features, const TrainConfig& config);

struct Prediction {
  StanceLabel label = StanceLabel::Con;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
};

Prediction predict(const StanceExample& example, const Featurizer& features, const TgaParams& params);
std::vector<StanceLabel> predict_all(const std::vector<StanceExample>& examples,
                                     const Featurizer& features, const TgaParams& params);

}  // namespace stance::model
