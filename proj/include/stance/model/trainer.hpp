#pragma once

// Mini-batch Adam training loop with dev macro-F1 early stopping, shared by
// the TGA head and the feed-forward baselines.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stance/corpus.hpp"

namespace stance::model {

struct TrainConfig {
  double learning_rate = 0.001;
  int epochs = 20;
  int patience = 3;
  int batch_size = 64;
  int hidden = 64;
  std::uint64_t seed = 0;
  std::size_t max_doc_tokens = 200;
  std::size_t max_topic_tokens = 5;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_macro_f1 = 0.0;
};

struct Objective {
  std::size_t train_size = 0;
  /// Adds the summed gradient over `batch` into `grad` and returns the summed loss.
  std::function<double(const Eigen::VectorXd& theta, std::span<const std::size_t> batch,
                        Eigen::VectorXd& grad)>
      batch_loss_grad;
  /// Predictions for the early-stopping set.
  std::function<std::vector<StanceLabel>(const Eigen::VectorXd& theta)> predict_dev;
  std::vector<StanceLabel> dev_gold;
};

struct FitResult {
  Eigen::VectorXd theta;  // best-scoring parameters
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Runs up to config.epochs epochs over seeded shuffles of the training set,
/// averaging gradients per batch. Keeps the parameters of the epoch with the
/// highest dev macro-F1 and stops once `patience` consecutive epochs fail to
/// improve on it. With no dev examples the last epoch's parameters are kept.
FitResult fit(Eigen::VectorXd theta, const Objective& objective, const TrainConfig& config);

/// Training history as "epoch,train_loss,dev_macro_f1" CSV.
std::string history_csv(const std::vector<EpochRecord>& history);

}  // namespace stance::model
