#pragma once

// Turns examples into model inputs by looking up frozen embeddings and the
// generalized topic representation.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stance/corpus.hpp"
#include "stance/embed.hpp"
#include "stance/gtr.hpp"

namespace stance::model {

struct TgaInput {
  Eigen::MatrixXd topic;    // m x E, joint encoding
  Eigen::VectorXd d_tilde;  // mean of joint document tokens
  Eigen::VectorXd r_dt;     // nearest training centroid, 2E
  std::uint32_t cluster = 0;
};

enum class PooledMode { Joint, Separate };

class Featurizer {
 public:
  /// `clusters` may be null for models that do not use r_dt.
  Featurizer(const embed::EmbeddingStore& store, const gtr::ClusterModel* clusters,
             const embed::TfIdfModel& tfidf, std::size_t max_doc_tokens = embed::kMaxDocTokens,
             std::size_t max_topic_tokens = embed::kMaxTopicTokens);

  std::uint32_t dim() const { return store_.dim; }
  const embed::EmbeddingStore& store() const { return store_; }

  /// [v_d; v_t] from the separate encodings.
  Eigen::VectorXd v_dt(const StanceExample& ex) const;
  gtr::Assignment generalized_topic(const StanceExample& ex) const;
  TgaInput tga_input(const StanceExample& ex) const;
  /// [mean document tokens; mean topic tokens] from the chosen encoding.
  Eigen::VectorXd pooled_input(const StanceExample& ex, PooledMode mode) const;
  bool has_mode(PooledMode mode) const;

 private:
  const embed::TokenSequenceEmbedding& sep_doc(const StanceExample& ex) const;
  const embed::TokenSequenceEmbedding& sep_topic(const StanceExample& ex) const;
  const embed::JointEntry& joint(const StanceExample& ex) const;

  const embed::EmbeddingStore& store_;
  const gtr::ClusterModel* clusters_;
  const embed::TfIdfModel& tfidf_;
  std::size_t max_doc_;
  std::size_t max_topic_;
};

/// tf-idf statistics over the separate-mode tokens of the unique documents in
/// `train`.
embed::TfIdfModel fit_store_tfidf(const std::vector<StanceExample>& train,
                                  const embed::EmbeddingStore& store,
                                  std::size_t max_doc_tokens = embed::kMaxDocTokens);

struct PointSet {
  Eigen::MatrixXd points;  // one row per unique (doc_id, topic)
  std::vector<std::string> ids;
};

PointSet pair_points(const std::vector<StanceExample>& examples, const embed::EmbeddingStore& store,
                     const embed::TfIdfModel& tfidf);

}  // namespace stance::model
