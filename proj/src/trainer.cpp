#include "stance/model/trainer.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "stance/error.hpp"
#include "stance/eval/scoring.hpp"
#include "stance/model/optim.hpp"
#include "stance/rng.hpp"

namespace stance::model {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || epochs < 1 || patience < 0 || batch_size < 1 || hidden < 1 ||
      max_doc_tokens < 1 || max_topic_tokens < 1)
    throw Error(ErrorCode::InvalidArgument, "training configuration values must be positive");
}

FitResult fit(Eigen::VectorXd theta, const Objective& objective, const TrainConfig& config) {
  config.validate();
  if (objective.train_size == 0) throw Error(ErrorCode::EmptyTrainSet, "no training examples");

  rng::Rng rng(rng::derive_seed(config.seed, "shuffle"));
  AdamState adam;
  std::vector<std::size_t> order(objective.train_size);
  std::iota(order.begin(), order.end(), std::size_t{0});

  FitResult result;
  result.theta = theta;
  double best_f1 = -std::numeric_limits<double>::infinity();
  int stale = 0;
  Eigen::VectorXd grad(theta.size());

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += std::size_t(config.batch_size)) {
      std::size_t end = std::min(order.size(), start + std::size_t(config.batch_size));
      std::span<const std::size_t> batch(order.data() + start, end - start);
      grad.setZero();
      loss_sum += objective.batch_loss_grad(theta, batch, grad);
      grad /= double(batch.size());
      adam_step(theta, grad, adam, config.learning_rate);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / double(order.size());
    if (objective.dev_gold.empty()) {
      rec.dev_macro_f1 = std::numeric_limits<double>::quiet_NaN();
      result.history.push_back(rec);
      result.theta = theta;
      result.best_epoch = epoch;
      continue;
    }
    rec.dev_macro_f1 = eval::macro_f1(objective.dev_gold, objective.predict_dev(theta)).macro_f1;
    result.history.push_back(rec);
    if (rec.dev_macro_f1 > best_f1) {
      best_f1 = rec.dev_macro_f1;
      result.theta = theta;
      result.best_epoch = epoch;
      stale = 0;
    } else if (++stale > config.patience) {
      break;
    }
  }
  return result;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::ostringstream out;
  out << "epoch,train_loss,dev_macro_f1\n" << std::setprecision(10);
  for (const auto& r : history) out << r.epoch << ',' << r.train_loss << ',' << r.dev_macro_f1 << '\n';
  return out.str();
}

}  // namespace stance::model
