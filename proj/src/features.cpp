#include "stance/model/features.hpp"

#include <unordered_set>

#include "stance/error.hpp"

namespace stance::model {

Featurizer::Featurizer(const embed::EmbeddingStore& store, const gtr::ClusterModel* clusters,
                       const embed::TfIdfModel& tfidf, std::size_t max_doc_tokens,
                       std::size_t max_topic_tokens)
    : store_(store),
      clusters_(clusters),
      tfidf_(tfidf),
      max_doc_(max_doc_tokens),
      max_topic_(max_topic_tokens) {}

const embed::TokenSequenceEmbedding& Featurizer::sep_doc(const StanceExample& ex) const {
  auto it = store_.sep_docs.find(ex.doc_id);
  if (it == store_.sep_docs.end() || it->second.size() == 0)
    throw Error(ErrorCode::MissingEmbedding, "no separate encoding for document " + ex.doc_id);
  return it->second;
}

const embed::TokenSequenceEmbedding& Featurizer::sep_topic(const StanceExample& ex) const {
  auto key = topic_key(ex.topic_tokens);
  auto it = store_.sep_topics.find(key);
  if (it == store_.sep_topics.end() || it->second.size() == 0)
    throw Error(ErrorCode::MissingEmbedding, "no separate encoding for topic '" + key + "'");
  return it->second;
}

const embed::JointEntry& Featurizer::joint(const StanceExample& ex) const {
  auto it = store_.joint.find(ex.example_id);
  if (it == store_.joint.end() || it->second.topic.size() == 0 || it->second.doc.size() == 0)
    throw Error(ErrorCode::MissingEmbedding, "no joint encoding for example " + ex.example_id);
  return it->second;
}

Eigen::VectorXd Featurizer::v_dt(const StanceExample& ex) const {
  Eigen::VectorXd v_d = embed::doc_vector(embed::truncate(sep_doc(ex), max_doc_), tfidf_);
  Eigen::VectorXd v_t = embed::topic_vector(embed::truncate(sep_topic(ex), max_topic_));
  return embed::pair_vector(v_d, v_t);
}

gtr::Assignment Featurizer::generalized_topic(const StanceExample& ex) const {
  if (!clusters_) throw Error(ErrorCode::InvalidArgument, "featurizer has no cluster model");
  return gtr::assign_r(v_dt(ex), *clusters_);
}

TgaInput Featurizer::tga_input(const StanceExample& ex) const {
  const auto& j = joint(ex);
  TgaInput in;
  in.topic = embed::truncate(j.topic, max_topic_).vectors.cast<double>();
  in.d_tilde = embed::mean_rows(embed::truncate(j.doc, max_doc_));
  auto g = generalized_topic(ex);
  in.r_dt = std::move(g.centroid);
  in.cluster = g.cluster;
  return in;
}

bool Featurizer::has_mode(PooledMode mode) const {
  return mode == PooledMode::Joint ? !store_.joint.empty()
                                   : !store_.sep_docs.empty() && !store_.sep_topics.empty();
}

Eigen::VectorXd Featurizer::pooled_input(const StanceExample& ex, PooledMode mode) const {
  if (!has_mode(mode))
    throw Error(ErrorCode::ModeUnavailable, mode == PooledMode::Joint
                                                ? "store has no joint encodings"
                                                : "store has no separate encodings");
  Eigen::VectorXd d, t;
  if (mode == PooledMode::Joint) {
    const auto& j = joint(ex);
    d = embed::mean_rows(embed::truncate(j.doc, max_doc_));
    t = embed::mean_rows(embed::truncate(j.topic, max_topic_));
  } else {
    d = embed::mean_rows(embed::truncate(sep_doc(ex), max_doc_));
    t = embed::mean_rows(embed::truncate(sep_topic(ex), max_topic_));
  }
  return embed::pair_vector(d, t);
}

embed::TfIdfModel fit_store_tfidf(const std::vector<StanceExample>& train,
                                  const embed::EmbeddingStore& store, std::size_t max_doc_tokens) {
  std::vector<std::vector<std::string>> docs;
  std::unordered_set<std::string> seen;
  for (const auto& ex : train) {
    if (!seen.insert(ex.doc_id).second) continue;
    auto it = store.sep_docs.find(ex.doc_id);
    if (it == store.sep_docs.end())
      throw Error(ErrorCode::MissingEmbedding, "no separate encoding for document " + ex.doc_id);
    auto tokens = it->second.tokens;
    if (tokens.size() > max_doc_tokens) tokens.resize(max_doc_tokens);
    docs.push_back(std::move(tokens));
  }
  return embed::tfidf_fit(docs);
}

PointSet pair_points(const std::vector<StanceExample>& examples, const embed::EmbeddingStore& store,
                     const embed::TfIdfModel& tfidf) {
  Featurizer f(store, nullptr, tfidf);
  std::vector<Eigen::VectorXd> rows;
  PointSet out;
  std::unordered_set<std::string> seen;
  for (const auto& ex : examples) {
    std::string id = gtr::point_id(ex);
    if (!seen.insert(id).second) continue;
    rows.push_back(f.v_dt(ex));
    out.ids.push_back(std::move(id));
  }
  out.points.resize(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.points.row(static_cast<Eigen::Index>(i)) = rows[i];
  return out;
}

}  // namespace stance::model
