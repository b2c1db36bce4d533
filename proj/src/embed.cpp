#include "stance/embed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "stance/error.hpp"
#include "stance/rng.hpp"

namespace stance::embed {

TokenSequenceEmbedding truncate(const TokenSequenceEmbedding& seq, std::size_t cap) {
  if (seq.size() <= cap) return seq;
  TokenSequenceEmbedding out;
  out.tokens.assign(seq.tokens.begin(), seq.tokens.begin() + static_cast<std::ptrdiff_t>(cap));
  out.vectors = seq.vectors.topRows(static_cast<Eigen::Index>(cap));
  return out;
}

double TfIdfModel::idf(const std::string& token) const {
  auto it = doc_freq.find(token);
  double df = it == doc_freq.end() ? 0.0 : double(it->second);
  return std::log((1.0 + double(doc_count)) / (1.0 + df)) + 1.0;
}

TfIdfModel tfidf_fit(const std::vector<std::vector<std::string>>& docs) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "tf-idf needs at least one document");
  TfIdfModel model;
  model.doc_count = docs.size();
  for (const auto& doc : docs) {
    std::unordered_set<std::string> seen(doc.begin(), doc.end());
    for (const auto& t : seen) ++model.doc_freq[t];
  }
  return model;
}

Eigen::VectorXd doc_weights(const std::vector<std::string>& tokens, const TfIdfModel& model) {
  if (tokens.empty()) throw Error(ErrorCode::EmptySequence, "document has no tokens");
  std::unordered_map<std::string, double> tf;
  for (const auto& t : tokens) tf[t] += 1.0;
  const auto n = static_cast<Eigen::Index>(tokens.size());
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = tf[tokens[i]] * model.idf(tokens[i]);
  double total = w.sum();
  if (!(total > 0.0) || !std::isfinite(total)) return Eigen::VectorXd::Constant(n, 1.0 / double(n));
  return w / total;
}

Eigen::VectorXd doc_vector(const TokenSequenceEmbedding& seq, const TfIdfModel& model) {
  Eigen::VectorXd w = doc_weights(seq.tokens, model);
  return seq.vectors.cast<double>().transpose() * w;
}

Eigen::VectorXd mean_rows(const TokenSequenceEmbedding& seq) {
  if (seq.size() == 0) throw Error(ErrorCode::EmptySequence, "sequence has no tokens");
  return seq.vectors.cast<double>().colwise().mean().transpose();
}

Eigen::VectorXd topic_vector(const TokenSequenceEmbedding& seq) { return mean_rows(seq); }

Eigen::VectorXd pair_vector(const Eigen::VectorXd& v_d, const Eigen::VectorXd& v_t) {
  if (v_d.size() != v_t.size())
    throw Error(ErrorCode::DimMismatch, "document dim " + std::to_string(v_d.size()) +
                                            " vs topic dim " + std::to_string(v_t.size()));
  Eigen::VectorXd out(v_d.size() * 2);
  out << v_d, v_t;
  return out;
}

// --- stub encoder -------------------------------------------------------------------

namespace {

Eigen::VectorXd gaussian_unit(std::uint64_t seed, std::uint32_t dim) {
  rng::Rng rng(seed);
  Eigen::VectorXd v(dim);
  for (std::uint32_t i = 0; i < dim; i += 2) {
    double u1 = 1.0 - rng.uniform();  // (0, 1]
    double u2 = rng.uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    v[i] = r * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < dim) v[i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
  }
  double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / norm;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

TokenSequenceEmbedding encode_separate(const std::vector<std::string>& tokens, std::uint32_t dim,
                                       std::uint64_t salt) {
  TokenSequenceEmbedding seq;
  seq.tokens = tokens;
  seq.vectors.resize(static_cast<Eigen::Index>(tokens.size()), dim);
  for (std::size_t i = 0; i < tokens.size(); ++i)
    seq.vectors.row(static_cast<Eigen::Index>(i)) = stub_token_vector(tokens[i], dim, salt).transpose();
  return seq;
}

TokenSequenceEmbedding encode_joint(const std::vector<std::string>& tokens,
                                    const std::string& partner, std::uint32_t dim,
                                    std::uint64_t salt) {
  TokenSequenceEmbedding seq;
  seq.tokens = tokens;
  seq.vectors.resize(static_cast<Eigen::Index>(tokens.size()), dim);
  const std::uint64_t partner_hash = rng::fnv1a(partner);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Eigen::VectorXd base = gaussian_unit(rng::mix(rng::fnv1a(tokens[i]) ^ rng::mix(salt)), dim);
    std::uint64_t ctx_seed = rng::mix(rng::fnv1a(tokens[i], partner_hash) ^ rng::mix(salt + 1));
    Eigen::VectorXd v = base + 0.1 * gaussian_unit(ctx_seed, dim);
    seq.vectors.row(static_cast<Eigen::Index>(i)) = v.cast<float>().transpose();
  }
  return seq;
}

}  // namespace

Eigen::VectorXf stub_token_vector(const std::string& token, std::uint32_t dim, std::uint64_t salt) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "stub encoder needs dim >= 2");
  return gaussian_unit(rng::mix(rng::fnv1a(token) ^ rng::mix(salt)), dim).cast<float>();
}

StubEncoding stub_encode(const std::vector<std::string>& doc_tokens,
                         const std::vector<std::string>& topic_tokens, std::uint32_t dim,
                         std::uint64_t salt) {
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "stub encoder needs dim >= 2");
  StubEncoding enc;
  enc.sep_doc = encode_separate(doc_tokens, dim, salt);
  enc.sep_topic = encode_separate(topic_tokens, dim, salt);
  enc.joint_doc = encode_joint(doc_tokens, join(topic_tokens), dim, salt);
  enc.joint_topic = encode_joint(topic_tokens, join(doc_tokens), dim, salt);
  return enc;
}

EmbeddingStore build_stub_store(const std::vector<StanceExample>& examples, std::uint32_t dim,
                                std::uint64_t salt) {
  EmbeddingStore store;
  store.dim = dim;
  for (const auto& ex : examples) {
    auto doc = tokenize_text(ex.document);
    if (doc.size() > kMaxDocTokens) doc.resize(kMaxDocTokens);
    auto topic = ex.topic_tokens;
    if (topic.size() > kMaxTopicTokens) topic.resize(kMaxTopicTokens);
    StubEncoding enc = stub_encode(doc, topic, dim, salt);
    store.joint[ex.example_id] = JointEntry{std::move(enc.joint_topic), std::move(enc.joint_doc)};
    store.sep_docs.try_emplace(ex.doc_id, std::move(enc.sep_doc));
    store.sep_topics.try_emplace(topic_key(ex.topic_tokens), std::move(enc.sep_topic));
  }
  return store;
}

// --- word vectors ------------------------------------------------------------------------

WordVectors load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  WordVectors wv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    std::string v;
    while (fields >> v) {
      try {
        values.push_back(std::stod(v));
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedRecord,
                    path.string() + ": line " + std::to_string(line_no) + ": bad number '" + v + "'");
      }
    }
    if (values.empty())
      throw Error(ErrorCode::MalformedRecord,
                  path.string() + ": line " + std::to_string(line_no) + ": no vector values");
    if (wv.dim == 0) wv.dim = values.size();
    if (values.size() != wv.dim)
      throw Error(ErrorCode::DimMismatch, path.string() + ": line " + std::to_string(line_no) +
                                              ": expected " + std::to_string(wv.dim) + " values");
    wv.table[word] = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  }
  return wv;
}

Eigen::VectorXd static_topic_vector(const std::vector<std::string>& topic_tokens,
                                    const WordVectors& wv) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(wv.dim));
  std::size_t hits = 0;
  for (const auto& t : topic_tokens) {
    auto it = wv.table.find(t);
    if (it == wv.table.end()) continue;
    sum += it->second;
    ++hits;
  }
  if (hits == 0) throw Error(ErrorCode::NoVocabOverlap, "no topic token has a word vector");
  return sum / double(hits);
}

double cosine_sim(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimMismatch, "cosine of unequal dims");
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

}  // namespace stance::embed
