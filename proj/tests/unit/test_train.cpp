#include <cmath>

#include "helpers.hpp"
#include "stance/eval/scoring.hpp"
#include "stance/model/baselines.hpp"
#include "stance/model/tga_train.hpp"
#include "synthetic.hpp"

using namespace stance;
using namespace stance::model;
using L = StanceLabel;

namespace {

/// Loss 0.5 |theta - 1|^2 per example; dev predictions follow a script.
Objective scripted(std::vector<std::vector<L>> script, std::size_t* calls) {
  Objective obj;
  obj.train_size = 4;
  obj.dev_gold = {L::Con, L::Pro, L::Neutral};
  obj.batch_loss_grad = [](const Eigen::VectorXd& theta, std::span<const std::size_t> batch, Eigen::VectorXd& grad) {
    Eigen::VectorXd diff = theta - Eigen::VectorXd::Ones(theta.size());
    grad += double(batch.size()) * diff;
    return double(batch.size()) * 0.5 * diff.squaredNorm();
  };
  obj.predict_dev = [script = std::move(script), calls](const Eigen::VectorXd&) {
    return script[std::min((*calls)++, script.size() - 1)];
  };
  return obj;
}

struct SmallPipeline {
  DatasetSplit split;
  embed::EmbeddingStore store;
  embed::TfIdfModel tfidf;
  gtr::ClusterModel clusters;
};

SmallPipeline small_pipeline(std::uint64_t seed = 1) {
  testing::SyntheticOptions opts;
  opts.themes = 3;
  opts.train_per_theme = 20;
  opts.dev_per_theme = 6;
  opts.test_per_theme = 6;
  opts.seed = seed;
  SmallPipeline pl;
  pl.split = testing::make_synthetic_split(opts);
  std::vector<StanceExample> all = pl.split.train;
  all.insert(all.end(), pl.split.dev.begin(), pl.split.dev.end());
  all.insert(all.end(), pl.split.test.begin(), pl.split.test.end());
  pl.store = embed::build_stub_store(all, 8, seed);
  pl.tfidf = fit_store_tfidf(pl.split.train, pl.store);
  auto pts = pair_points(pl.split.train, pl.store, pl.tfidf);
  pl.clusters = gtr::ward_cluster(pts.points, pts.ids, 3);
  return pl;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 15;
  cfg.hidden = 8;
  cfg.batch_size = 16;
  cfg.seed = 3;
  return cfg;
}

double mean_loss(const std::vector<StanceExample>& exs, const Featurizer& f, const TgaParams& params) {
  double sum = 0.0;
  for (const auto& ex : exs) sum += cross_entropy(predict(ex, f, params).p, ex.label);
  return sum / double(exs.size());
}

}  // namespace

TEST_SUITE("train") {

TEST_CASE("early stopping keeps the best epoch and honours patience") {
  const std::vector<L> good{L::Con, L::Pro, L::Neutral}, bad{L::Pro, L::Pro, L::Pro};
  std::size_t calls = 0;
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.patience = 2;
  cfg.batch_size = 4;
  auto res = fit(Eigen::VectorXd::Zero(2), scripted({bad, good, bad, bad, bad, good}, &calls), cfg);
  // Epoch 2 is best; epochs 3, 4, 5 fail to improve and 5 exceeds patience.
  CHECK(res.history.size() == 5);
  CHECK(res.best_epoch == 2);
  CHECK(res.history[1].dev_macro_f1 == 1.0);

  std::size_t calls2 = 0;
  TrainConfig two = cfg;
  two.epochs = 2;
  auto at2 = fit(Eigen::VectorXd::Zero(2), scripted({bad, good}, &calls2), two);
  CHECK(res.theta == at2.theta);
}

TEST_CASE("patience zero stops at the first non-improving epoch") {
  const std::vector<L> good{L::Con, L::Pro, L::Neutral};
  std::size_t calls = 0;
  TrainConfig cfg;
  cfg.patience = 0;
  auto res = fit(Eigen::VectorXd::Zero(1), scripted({good}, &calls), cfg);
  CHECK(res.history.size() == 2);
  CHECK(res.best_epoch == 1);
}

TEST_CASE("without dev examples the last epoch is kept") {
  std::size_t calls = 0;
  auto obj = scripted({{}}, &calls);
  obj.dev_gold.clear();
  TrainConfig cfg;
  cfg.epochs = 4;
  auto res = fit(Eigen::VectorXd::Zero(3), obj, cfg);
  CHECK(res.history.size() == 4);
  CHECK(res.best_epoch == 4);
  CHECK(std::isnan(res.history.back().dev_macro_f1));
  CHECK(calls == 0);
  // Adam on a quadratic moves toward the minimum.
  CHECK(res.theta.minCoeff() > 0.0);
  CHECK(res.history.back().train_loss < res.history.front().train_loss);
}

TEST_CASE("configuration validation") {
  std::size_t calls = 0;
  auto obj = scripted({{}}, &calls);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  CHECK_CODE(fit(Eigen::VectorXd::Zero(1), obj, cfg), ErrorCode::InvalidArgument);
  cfg = TrainConfig{};
  cfg.batch_size = 0;
  CHECK_CODE(fit(Eigen::VectorXd::Zero(1), obj, cfg), ErrorCode::InvalidArgument);
  cfg = TrainConfig{};
  cfg.patience = -1;
  CHECK_CODE(fit(Eigen::VectorXd::Zero(1), obj, cfg), ErrorCode::InvalidArgument);
  obj.train_size = 0;
  CHECK_CODE(fit(Eigen::VectorXd::Zero(1), obj, TrainConfig{}), ErrorCode::EmptyTrainSet);
}

TEST_CASE("history csv") {
  std::vector<EpochRecord> h{{1, 0.5, 0.25}, {2, 0.25, 0.5}};
  CHECK(history_csv(h) == "epoch,train_loss,dev_macro_f1\n1,0.5,0.25\n2,0.25,0.5\n");
}

TEST_CASE("early stopping set is zero-shot dev when available") {
  auto pl = small_pipeline();
  CHECK(early_stopping_examples(pl.split).size() == pl.split.zero_shot_dev.size());
  DatasetSplit seen = pl.split;
  seen.zero_shot_dev.clear();
  CHECK(early_stopping_examples(seen).size() == seen.dev.size());
}

TEST_CASE("TGA training is deterministic and learns the synthetic task") {
  auto pl = small_pipeline();
  Featurizer f(pl.store, &pl.clusters, pl.tfidf);
  auto a = train(pl.split, f, small_config());
  auto b = train(pl.split, f, small_config());
  CHECK(a.params.flatten() == b.params.flatten());
  CHECK(a.best_epoch == b.best_epoch);
  auto pred = predict_all(pl.split.test, f, a.params);
  CHECK(eval::macro_f1(eval::gold_labels(pl.split.test), pred).macro_f1 >= 0.9);

  auto cfg = small_config();
  cfg.seed = 4;
  CHECK(train(pl.split, f, cfg).params.flatten() != a.params.flatten());
}

TEST_CASE("a tiny full-batch step lowers the training loss") {
  auto pl = small_pipeline(2);
  Featurizer f(pl.store, &pl.clusters, pl.tfidf);
  auto cfg = small_config();
  cfg.learning_rate = 1e-6;
  cfg.epochs = 1;
  cfg.batch_size = int(pl.split.train.size());
  auto init = TgaParams::init(f.dim(), cfg.hidden, rng::derive_seed(cfg.seed, "init"));
  auto after = train(pl.split, f, cfg);
  const double before_loss = mean_loss(pl.split.train, f, init);
  CHECK(after.history.at(0).train_loss == doctest::Approx(before_loss).epsilon(1e-9));
  CHECK(mean_loss(pl.split.train, f, after.params) < before_loss);
}

TEST_CASE("TGA training errors") {
  auto pl = small_pipeline();
  Featurizer f(pl.store, &pl.clusters, pl.tfidf);
  DatasetSplit empty = pl.split;
  empty.train.clear();
  CHECK_CODE(train(empty, f, small_config()), ErrorCode::EmptyTrainSet);
  Featurizer no_clusters(pl.store, nullptr, pl.tfidf);
  CHECK_CODE(train(pl.split, no_clusters, small_config()), ErrorCode::InvalidArgument);
}

TEST_CASE("feed-forward heads train on the synthetic task") {
  auto pl = small_pipeline();
  Featurizer f(pl.store, &pl.clusters, pl.tfidf);
  auto gold = eval::gold_labels(pl.split.test);

  auto cffnn = baseline_cffnn(pl.split, f, small_config());
  std::vector<L> pred;
  for (const auto& x : cffnn_inputs(pl.split.test, f)) pred.push_back(cffnn.predict(x));
  CHECK(eval::macro_f1(gold, pred).macro_f1 >= 0.9);

  auto cfg = small_config();
  cfg.epochs = 40;
  cfg.patience = 40;
  for (PooledMode mode : {PooledMode::Joint, PooledMode::Separate}) {
    CHECK(f.has_mode(mode));
    auto head = baseline_pooled_head(mode, pl.split, f, cfg);
    CHECK(head.params.input_dim() == 2 * Eigen::Index(f.dim()));
    pred.clear();
    for (const auto& x : pooled_inputs(pl.split.test, f, mode)) pred.push_back(head.predict(x));
    INFO("mode " << int(mode) << " epochs " << head.history.size());
    CHECK(eval::macro_f1(gold, pred).macro_f1 >= 0.9);
  }
}

TEST_CASE("featurizer lookups") {
  auto pl = small_pipeline();
  Featurizer f(pl.store, &pl.clusters, pl.tfidf);
  const auto& ex = pl.split.train.front();
  auto in = f.tga_input(ex);
  CHECK(in.topic.cols() == 8);
  CHECK(in.r_dt.size() == 16);
  CHECK(in.cluster == pl.clusters.assignments.at(gtr::point_id(ex)));
  CHECK(f.v_dt(ex).size() == 16);

  StanceExample missing = ex;
  missing.example_id = "nope";
  CHECK_CODE(f.tga_input(missing), ErrorCode::MissingEmbedding);
  missing = ex;
  missing.doc_id = "nope";
  CHECK_CODE(f.v_dt(missing), ErrorCode::MissingEmbedding);

  embed::EmbeddingStore joint_only = pl.store;
  joint_only.sep_docs.clear();
  joint_only.sep_topics.clear();
  Featurizer g(joint_only, &pl.clusters, pl.tfidf);
  CHECK_FALSE(g.has_mode(PooledMode::Separate));
  CHECK_CODE(g.pooled_input(ex, PooledMode::Separate), ErrorCode::ModeUnavailable);
}

}
