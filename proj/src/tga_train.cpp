#include "stance/model/tga_train.hpp"

#include "stance/error.hpp"
#include "stance/eval/scoring.hpp"

namespace stance::model {

std::vector<StanceExample> early_stopping_examples(const DatasetSplit& split) {
  if (split.zero_shot_dev.empty()) return split.dev;
  std::vector<StanceExample> out;
  for (std::size_t i : split.zero_shot_dev) out.push_back(split.dev[i]);
  return out;
}

namespace {

std::vector<TgaInput> inputs_for(const std::vector<StanceExample>& examples, const Featurizer& f) {
  std::vector<TgaInput> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(f.tga_input(ex));
  return out;
}

}  // namespace

TgaModel train(const DatasetSplit& split, const Featurizer& features, const TrainConfig& config) {
  config.validate();
  if (split.train.empty()) throw Error(ErrorCode::EmptyTrainSet, "split has no training examples");
  const auto train_in = inputs_for(split.train, features);
  const auto dev = early_stopping_examples(split);
  const auto dev_in = inputs_for(dev, features);
  const auto train_gold = eval::gold_labels(split.train);

  const Eigen::Index e = features.dim();
  TgaParams shape = TgaParams::init(e, config.hidden, rng::derive_seed(config.seed, "init"));

  Objective obj;
  obj.train_size = train_in.size();
  obj.dev_gold = eval::gold_labels(dev);
  obj.batch_loss_grad = [&](const Eigen::VectorXd& theta, std::span<const std::size_t> batch,
                            Eigen::VectorXd& grad) {
    TgaParams params = shape;
    params.assign(theta);
    TgaGrads g = TgaParams::zeros(e, config.hidden);
    ForwardCache cache;
    double loss = 0.0;
    for (std::size_t i : batch) {
      const auto& in = train_in[i];
      auto p = tga_forward_pooled(in.topic, in.d_tilde, in.r_dt, params, cache);
      loss += cross_entropy(p, train_gold[i]);
      tga_backward_into(cache, in.topic, in.r_dt, params, train_gold[i], g);
    }
    grad += g.flatten();
    return loss;
  };
  obj.predict_dev = [&](const Eigen::VectorXd& theta) {
    TgaParams params = shape;
    params.assign(theta);
    ForwardCache cache;
    std::vector<StanceLabel> out;
    out.reserve(dev_in.size());
    for (const auto& in : dev_in)
      out.push_back(argmax_label(tga_forward_pooled(in.topic, in.d_tilde, in.r_dt, params, cache)));
    return out;
  };

  FitResult fitted = fit(shape.flatten(), obj, config);
  TgaModel model;
  model.params = shape;
  model.params.assign(fitted.theta);
  model.history = std::move(fitted.history);
  model.best_epoch = fitted.best_epoch;
  return model;
}

Prediction predict(const StanceExample& example, const Featurizer& features, const TgaParams& params) {
  TgaInput in = features.tga_input(example);
  ForwardCache cache;
  Prediction out;
  out.p = tga_forward_pooled(in.topic, in.d_tilde, in.r_dt, params, cache);
  out.label = argmax_label(out.p);
  return out;
}

std::vector<StanceLabel> predict_all(const std::vector<StanceExample>& examples,
                                     const Featurizer& features, const TgaParams& params) {
  std::vector<StanceLabel> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(predict(ex, features, params).label);
  return out;
}

}  // namespace stance::model
