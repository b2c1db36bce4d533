#pragma once

// Token-embedding store, pooled document/topic vectors, static word vectors and
// a deterministic stand-in encoder.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "stance/corpus.hpp"

namespace stance::embed {

using RowMatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::size_t kMaxDocTokens = 200;
inline constexpr std::size_t kMaxTopicTokens = 5;

struct TokenSequenceEmbedding {
  std::vector<std::string> tokens;
  RowMatrixF vectors;  // tokens.size() x dim

  std::size_t size() const { return tokens.size(); }
  bool operator==(const TokenSequenceEmbedding& o) const {
    return tokens == o.tokens && vectors.rows() == o.vectors.rows() &&
           vectors.cols() == o.vectors.cols() && vectors == o.vectors;
  }
};

/// Drops rows beyond `cap` from the end.
TokenSequenceEmbedding truncate(const TokenSequenceEmbedding& seq, std::size_t cap);

struct JointEntry {
  TokenSequenceEmbedding topic;
  TokenSequenceEmbedding doc;
  bool operator==(const JointEntry&) const = default;
};

struct EmbeddingStore {
  std::uint32_t dim = 0;
  std::map<std::string, JointEntry> joint;                  // example_id
  std::map<std::string, TokenSequenceEmbedding> sep_docs;    // doc_id
  std::map<std::string, TokenSequenceEmbedding> sep_topics;  // topic_key

  bool operator==(const EmbeddingStore&) const = default;
};

inline constexpr std::uint32_t kStoreVersion = 1;

/// Validation findings that do not prevent loading (caps exceeded, non-finite
/// values, row/token mismatches are errors instead).
struct StoreWarnings {
  std::vector<std::string> messages;
  bool empty() const { return messages.empty(); }
};

EmbeddingStore read_store(const std::filesystem::path& path, StoreWarnings* warnings = nullptr);
void write_store(const EmbeddingStore& store, const std::filesystem::path& path);

// --- tf-idf and pooling --------------------------------------------------------

struct TfIdfModel {
  std::size_t doc_count = 0;
  std::unordered_map<std::string, std::size_t> doc_freq;

  /// ln((1 + N) / (1 + df)) + 1
  double idf(const std::string& token) const;
};

TfIdfModel tfidf_fit(const std::vector<std::vector<std::string>>& docs);

/// Normalized per-position weights tf(token_i) * idf(token_i); uniform if all
/// weights vanish.
Eigen::VectorXd doc_weights(const std::vector<std::string>& tokens, const TfIdfModel& model);

Eigen::VectorXd doc_vector(const TokenSequenceEmbedding& seq, const TfIdfModel& model);
Eigen::VectorXd topic_vector(const TokenSequenceEmbedding& seq);
/// [v_d; v_t]
Eigen::VectorXd pair_vector(const Eigen::VectorXd& v_d, const Eigen::VectorXd& v_t);

/// Row mean of a sequence as double.
Eigen::VectorXd mean_rows(const TokenSequenceEmbedding& seq);

// --- stub encoder ---------------------------------------------------------------

struct StubEncoding {
  TokenSequenceEmbedding joint_topic;
  TokenSequenceEmbedding joint_doc;
  TokenSequenceEmbedding sep_topic;
  TokenSequenceEmbedding sep_doc;
};

/// Unit-norm vector determined by (token, salt).
Eigen::VectorXf stub_token_vector(const std::string& token, std::uint32_t dim, std::uint64_t salt);

/// Separate-mode vectors are stub_token_vector; joint-mode vectors add 0.1 times
/// a unit vector seeded by (token, partner text, salt).
StubEncoding stub_encode(const std::vector<std::string>& doc_tokens,
                         const std::vector<std::string>& topic_tokens, std::uint32_t dim,
                         std::uint64_t salt);

/// Store covering every example (joint), unique doc (sep_docs) and unique
/// topic (sep_topics), with document tokens from tokenize_text and caps applied.
EmbeddingStore build_stub_store(const std::vector<StanceExample>& examples, std::uint32_t dim,
                                std::uint64_t salt);

// --- static word vectors ----------------------------------------------------------

struct WordVectors {
  std::size_t dim = 0;
  std::unordered_map<std::string, Eigen::VectorXd> table;
};

WordVectors load_word_vectors(const std::filesystem::path& path);
Eigen::VectorXd static_topic_vector(const std::vector<std::string>& topic_tokens,
                                    const WordVectors& wv);
double cosine_sim(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace stance::embed
