#pragma once

// Comparison models: cluster majority (CMaj), bag-of-words logistic regression
// (BoWV), a feed-forward net on generalized topic representations (C-FFNN)
// and pooled-encoding feed-forward heads (joint / separate).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "stance/corpus.hpp"
#include "stance/gtr.hpp"
#include "stance/model/features.hpp"
#include "stance/model/mlp.hpp"
#include "stance/model/trainer.hpp"

namespace stance::model {

// --- CMaj ------------------------------------------------------------------------

struct CmajPredictor {
  std::vector<std::optional<StanceLabel>> cluster_majority;  // nullopt for empty clusters
  StanceLabel global_majority = StanceLabel::Con;

  StanceLabel predict_cluster(std::uint32_t cluster) const;
};

/// Majority label per cluster. Within-cluster ties go to the tied label that
/// is most frequent globally, then to the lowest index.
CmajPredictor cmaj_from_clusters(std::size_t k, const std::vector<std::uint32_t>& clusters,
                                 const std::vector<StanceLabel>& labels);
CmajPredictor baseline_cmaj(const gtr::ClusterModel& model, const std::vector<StanceExample>& train);

// --- BoWV --------------------------------------------------------------------------

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LogisticModel {
  Eigen::MatrixXd w;  // 3 x features
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
};

struct LogisticFit {
  LogisticModel model;
  int iterations = 0;
  double grad_norm = 0.0;
  double objective = 0.0;
  bool converged = false;
};

/// Mean cross-entropy plus (l2 / 2) * |W|^2 (bias unpenalized). Writes the
/// gradient into `grad` when non-null.
double logistic_objective(const LogisticModel& model, const SparseRows& x,
                          const std::vector<StanceLabel>& y, double l2, LogisticModel* grad);

/// L-BFGS with backtracking line search until the gradient norm drops below
/// `grad_tol`.
LogisticFit fit_logistic(const SparseRows& x, const std::vector<StanceLabel>& y, double l2,
                         double grad_tol = 1e-5, int max_iter = 2000);

struct BowvOptions {
  std::size_t vocab_cap = 10000;
  double l2 = 1e-3;
  double grad_tol = 1e-5;
  int max_iter = 2000;
};

class BowvModel {
 public:
  BowvModel() = default;
  BowvModel(std::map<std::string, std::size_t> doc_vocab,
            std::map<std::string, std::size_t> topic_vocab, LogisticFit fit);

  std::size_t feature_count() const { return doc_vocab_.size() + topic_vocab_.size(); }
  Eigen::SparseVector<double> features(const StanceExample& ex) const;
  SparseRows feature_rows(const std::vector<StanceExample>& examples) const;
  Eigen::Vector3d proba(const StanceExample& ex) const;
  StanceLabel predict(const StanceExample& ex) const;
  const LogisticFit& fit() const { return fit_; }

 private:
  std::map<std::string, std::size_t> doc_vocab_;
  std::map<std::string, std::size_t> topic_vocab_;
  LogisticFit fit_;
};

/// Document vocabulary: the vocab_cap most frequent training document tokens
/// (ties broken alphabetically); topic vocabulary: every training topic token.
BowvModel baseline_bowv(const std::vector<StanceExample>& train, const BowvOptions& options = {});

// --- feed-forward heads -------------------------------------------------------------

struct HeadModel {
  MlpParams params;
  std::vector<EpochRecord> history;
  int best_epoch = 0;

  StanceLabel predict(const Eigen::VectorXd& x) const;
};

/// Two-layer tanh classifier trained with the shared loop.
HeadModel train_head(const std::vector<Eigen::VectorXd>& train_x,
                     const std::vector<StanceLabel>& train_y,
                     const std::vector<Eigen::VectorXd>& dev_x,
                     const std::vector<StanceLabel>& dev_y, const TrainConfig& config);

/// C-FFNN: input is r_dt alone.
HeadModel baseline_cffnn(const DatasetSplit& split, const Featurizer& features,
                         const TrainConfig& config);
std::vector<Eigen::VectorXd> cffnn_inputs(const std::vector<StanceExample>& examples,
                                          const Featurizer& features);

/// Pooled head: input is [mean document tokens; mean topic tokens].
HeadModel baseline_pooled_head(PooledMode mode, const DatasetSplit& split, const Featurizer& features,
                               const TrainConfig& config);
std::vector<Eigen::VectorXd> pooled_inputs(const std::vector<StanceExample>& examples,
                                           const Featurizer& features, PooledMode mode);

}  // namespace stance::model
