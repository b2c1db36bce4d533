#include "stance/model/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "stance/error.hpp"
#include "stance/eval/scoring.hpp"
#include "stance/model/tga_train.hpp"
#include "stance/rng.hpp"

namespace stance::model {

// --- CMaj ------------------------------------------------------------------------

StanceLabel CmajPredictor::predict_cluster(std::uint32_t cluster) const {
  if (cluster < cluster_majority.size() && cluster_majority[cluster]) return *cluster_majority[cluster];
  return global_majority;
}

CmajPredictor cmaj_from_clusters(std::size_t k, const std::vector<std::uint32_t>& clusters,
                                 const std::vector<StanceLabel>& labels) {
  if (clusters.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch, "one cluster per training label required");
  std::array<std::size_t, kNumLabels> global{};
  std::vector<std::array<std::size_t, kNumLabels>> per(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (clusters[i] >= k) throw Error(ErrorCode::UnassignedExample, "cluster index out of range");
    ++global[label_index(labels[i])];
    ++per[clusters[i]][label_index(labels[i])];
  }
  // Label preference for ties: global frequency, then lowest index.
  auto prefer = [&](int a, int b) { return global[a] != global[b] ? global[a] > global[b] : a < b; };

  CmajPredictor out;
  int g = 0;
  for (int l = 1; l < kNumLabels; ++l)
    if (prefer(l, g)) g = l;
  out.global_majority = static_cast<StanceLabel>(g);
  out.cluster_majority.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto& counts = per[c];
    if (counts[0] + counts[1] + counts[2] == 0) continue;
    int best = 0;
    for (int l = 1; l < kNumLabels; ++l)
      if (counts[l] > counts[best] || (counts[l] == counts[best] && prefer(l, best))) best = l;
    out.cluster_majority[c] = static_cast<StanceLabel>(best);
  }
  return out;
}

CmajPredictor baseline_cmaj(const gtr::ClusterModel& model, const std::vector<StanceExample>& train) {
  std::vector<std::uint32_t> clusters;
  for (const auto& ex : train) {
    auto it = model.assignments.find(gtr::point_id(ex));
    if (it == model.assignments.end())
      throw Error(ErrorCode::UnassignedExample, "training example " + ex.example_id + " has no cluster");
    clusters.push_back(it->second);
  }
  return cmaj_from_clusters(model.k, clusters, eval::gold_labels(train));
}

// --- logistic regression -----------------------------------------------------------

double logistic_objective(const LogisticModel& model, const SparseRows& x,
                          const std::vector<StanceLabel>& y, double l2, LogisticModel* grad) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd z = x * model.w.transpose();
  z.rowwise() += model.b.transpose();
  double loss = 0.0;
  Eigen::MatrixXd r(n, kNumLabels);
  for (Eigen::Index i = 0; i < n; ++i) {
    double mx = z.row(i).maxCoeff();
    Eigen::RowVector3d e = (z.row(i).array() - mx).exp();
    double s = e.sum();
    loss += std::log(s) + mx - z(i, label_index(y[static_cast<std::size_t>(i)]));
    r.row(i) = e / s;
    r(i, label_index(y[static_cast<std::size_t>(i)])) -= 1.0;
  }
  loss = loss / double(n) + 0.5 * l2 * model.w.squaredNorm();
  if (grad) {
    r /= double(n);
    grad->w = (x.transpose() * r).transpose() + l2 * model.w;
    grad->b = r.colwise().sum().transpose();
  }
  return loss;
}

LogisticFit fit_logistic(const SparseRows& x, const std::vector<StanceLabel>& y, double l2,
                         double grad_tol, int max_iter) {
  if (x.rows() == 0 || static_cast<std::size_t>(x.rows()) != y.size())
    throw Error(ErrorCode::EmptyTrainSet, "logistic regression needs labelled rows");
  if (!(l2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "l2 penalty must be nonnegative");
  const Eigen::Index f = x.cols();
  const Eigen::Index wsize = kNumLabels * f;

  auto unflat = [&](const Eigen::VectorXd& theta) {
    LogisticModel m;
    m.w = theta.head(wsize).reshaped(kNumLabels, f);
    m.b = theta.tail(kNumLabels);
    return m;
  };
  auto flat = [&](const LogisticModel& m) {
    Eigen::VectorXd theta(wsize + kNumLabels);
    theta << m.w.reshaped(), m.b;
    return theta;
  };
  auto evaluate = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& g) {
    LogisticModel gm;
    double v = logistic_objective(unflat(theta), x, y, l2, &gm);
    g = flat(gm);
    return v;
  };

  constexpr std::size_t kMemory = 10;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(wsize + kNumLabels);
  Eigen::VectorXd g;
  double fval = evaluate(theta, g);
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;  // (s, y)

  LogisticFit out;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if (g.norm() <= grad_tol) {
      out.converged = true;
      break;
    }
    // Two-loop recursion.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, yv] = memory[i];
      alpha[i] = s.dot(q) / yv.dot(s);
      q -= alpha[i] * yv;
    }
    if (!memory.empty()) {
      const auto& [s, yv] = memory.back();
      q *= s.dot(yv) / yv.dot(yv);
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, yv] = memory[i];
      double beta = yv.dot(q) / yv.dot(s);
      q += (alpha[i] - beta) * s;
    }
    Eigen::VectorXd dir = -q;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      memory.clear();
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    Eigen::VectorXd g_new;
    Eigen::VectorXd next;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      next = theta + step * dir;
      f_new = evaluate(next, g_new);
      if (f_new <= fval + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    Eigen::VectorXd s = next - theta;
    Eigen::VectorXd yv = g_new - g;
    if (s.dot(yv) > 1e-12) {
      memory.emplace_back(std::move(s), std::move(yv));
      if (memory.size() > kMemory) memory.pop_front();
    }
    theta = std::move(next);
    g = std::move(g_new);
    fval = f_new;
  }
  if (!out.converged && g.norm() <= grad_tol) out.converged = true;
  out.model = unflat(theta);
  out.iterations = iter;
  out.grad_norm = g.norm();
  out.objective = fval;
  return out;
}

// --- BoWV ---------------------------------------------------------------------------

BowvModel::BowvModel(std::map<std::string, std::size_t> doc_vocab,
                     std::map<std::string, std::size_t> topic_vocab, LogisticFit fit)
    : doc_vocab_(std::move(doc_vocab)), topic_vocab_(std::move(topic_vocab)), fit_(std::move(fit)) {}

Eigen::SparseVector<double> BowvModel::features(const StanceExample& ex) const {
  Eigen::SparseVector<double> v(static_cast<Eigen::Index>(feature_count()));
  std::map<std::size_t, double> counts;
  for (const auto& t : tokenize_text(ex.document))
    if (auto it = doc_vocab_.find(t); it != doc_vocab_.end()) counts[it->second] += 1.0;
  for (const auto& t : ex.topic_tokens)
    if (auto it = topic_vocab_.find(t); it != topic_vocab_.end())
      counts[doc_vocab_.size() + it->second] += 1.0;
  for (const auto& [i, c] : counts) v.insert(static_cast<Eigen::Index>(i)) = c;
  return v;
}

SparseRows BowvModel::feature_rows(const std::vector<StanceExample>& examples) const {
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t r = 0; r < examples.size(); ++r) {
    auto v = features(examples[r]);
    for (Eigen::SparseVector<double>::InnerIterator it(v); it; ++it)
      trips.emplace_back(static_cast<int>(r), static_cast<int>(it.index()), it.value());
  }
  SparseRows x(static_cast<Eigen::Index>(examples.size()), static_cast<Eigen::Index>(feature_count()));
  x.setFromTriplets(trips.begin(), trips.end());
  return x;
}

Eigen::Vector3d BowvModel::proba(const StanceExample& ex) const {
  Eigen::SparseVector<double> v = features(ex);
  Eigen::VectorXd z = fit_.model.b;
  for (Eigen::SparseVector<double>::InnerIterator it(v); it; ++it) z += fit_.model.w.col(it.index()) * it.value();
  return softmax(z);
}

StanceLabel BowvModel::predict(const StanceExample& ex) const { return argmax_label(proba(ex)); }

BowvModel baseline_bowv(const std::vector<StanceExample>& train, const BowvOptions& options) {
  if (train.empty()) throw Error(ErrorCode::EmptyTrainSet, "BoWV needs training examples");
  std::unordered_map<std::string, std::size_t> freq;
  std::unordered_set<std::string> docs_seen;
  std::set<std::string> topic_words;
  for (const auto& ex : train) {
    topic_words.insert(ex.topic_tokens.begin(), ex.topic_tokens.end());
    if (!docs_seen.insert(ex.doc_id).second) continue;
    for (const auto& t : tokenize_text(ex.document)) ++freq[t];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > options.vocab_cap) ranked.resize(options.vocab_cap);
  std::sort(ranked.begin(), ranked.end());
  std::map<std::string, std::size_t> doc_vocab, topic_vocab;
  for (const auto& [w, c] : ranked) doc_vocab.emplace(w, doc_vocab.size());
  for (const auto& w : topic_words) topic_vocab.emplace(w, topic_vocab.size());

  BowvModel shell(doc_vocab, topic_vocab, {});
  SparseRows x = shell.feature_rows(train);
  LogisticFit fit = fit_logistic(x, eval::gold_labels(train), options.l2, options.grad_tol, options.max_iter);
  return BowvModel(std::move(doc_vocab), std::move(topic_vocab), std::move(fit));
}

// --- feed-forward heads -------------------------------------------------------------

StanceLabel HeadModel::predict(const Eigen::VectorXd& x) const {
  return argmax_label(mlp_forward(params, x));
}

HeadModel train_head(const std::vector<Eigen::VectorXd>& train_x,
                     const std::vector<StanceLabel>& train_y,
                     const std::vector<Eigen::VectorXd>& dev_x,
                     const std::vector<StanceLabel>& dev_y, const TrainConfig& config) {
  config.validate();
  if (train_x.empty()) throw Error(ErrorCode::EmptyTrainSet, "no training inputs");
  if (train_x.size() != train_y.size() || dev_x.size() != dev_y.size())
    throw Error(ErrorCode::LengthMismatch, "inputs and labels differ in count");
  const Eigen::Index in_dim = train_x.front().size();
  rng::Rng init_rng(rng::derive_seed(config.seed, "init"));
  MlpParams shape = MlpParams::init(in_dim, config.hidden, init_rng);

  Objective obj;
  obj.train_size = train_x.size();
  obj.dev_gold = dev_y;
  obj.batch_loss_grad = [&](const Eigen::VectorXd& theta, std::span<const std::size_t> batch,
                            Eigen::VectorXd& grad) {
    MlpParams params = shape;
    params.unpack(theta, 0);
    MlpParams g = MlpParams::zeros(in_dim, config.hidden);
    MlpCache cache;
    double loss = 0.0;
    for (std::size_t i : batch) {
      auto p = mlp_forward(params, train_x[i], &cache);
      loss += cross_entropy(p, train_y[i]);
      mlp_backward(params, cache, train_y[i], g);
    }
    Eigen::VectorXd flat(g.size());
    g.pack(flat, 0);
    grad += flat;
    return loss;
  };
  obj.predict_dev = [&](const Eigen::VectorXd& theta) {
    MlpParams params = shape;
    params.unpack(theta, 0);
    std::vector<StanceLabel> out;
    out.reserve(dev_x.size());
    for (const auto& x : dev_x) out.push_back(argmax_label(mlp_forward(params, x)));
    return out;
  };

  Eigen::VectorXd theta0(shape.size());
  shape.pack(theta0, 0);
  FitResult fitted = fit(std::move(theta0), obj, config);
  HeadModel out;
  out.params = shape;
  out.params.unpack(fitted.theta, 0);
  out.history = std::move(fitted.history);
  out.best_epoch = fitted.best_epoch;
  return out;
}

std::vector<Eigen::VectorXd> cffnn_inputs(const std::vector<StanceExample>& examples,
                                          const Featurizer& features) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(features.generalized_topic(ex).centroid);
  return out;
}

std::vector<Eigen::VectorXd> pooled_inputs(const std::vector<StanceExample>& examples,
                                           const Featurizer& features, PooledMode mode) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(features.pooled_input(ex, mode));
  return out;
}

HeadModel baseline_cffnn(const DatasetSplit& split, const Featurizer& features,
                         const TrainConfig& config) {
  if (split.train.empty()) throw Error(ErrorCode::EmptyTrainSet, "split has no training examples");
  auto dev = early_stopping_examples(split);
  return train_head(cffnn_inputs(split.train, features), eval::gold_labels(split.train),
                    cffnn_inputs(dev, features), eval::gold_labels(dev), config);
}

HeadModel baseline_pooled_head(PooledMode mode, const DatasetSplit& split, const Featurizer& features,
                               const TrainConfig& config) {
  if (!features.has_mode(mode))
    throw Error(ErrorCode::ModeUnavailable, "embedding store lacks the requested encoding mode");
  if (split.train.empty()) throw Error(ErrorCode::EmptyTrainSet, "split has no training examples");
  auto dev = early_stopping_examples(split);
  return train_head(pooled_inputs(split.train, features, mode), eval::gold_labels(split.train),
                    pooled_inputs(dev, features, mode), eval::gold_labels(dev), config);
}

}  // namespace stance::model
