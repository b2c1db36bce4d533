#include <cmath>

#include "helpers.hpp"
#include "stance/embed.hpp"

using namespace stance;
using namespace stance::embed;

namespace {

TokenSequenceEmbedding seq(std::vector<std::string> tokens, std::vector<std::vector<float>> rows) {
  TokenSequenceEmbedding s;
  s.tokens = std::move(tokens);
  s.vectors.resize(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) s.vectors(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
  return s;
}

}  // namespace

TEST_SUITE("embed") {

TEST_CASE("smoothed idf") {
  auto model = tfidf_fit({{"a", "b"}, {"a"}});
  CHECK(model.doc_count == 2);
  CHECK(model.idf("a") == doctest::Approx(1.0));
  CHECK(model.idf("b") == doctest::Approx(std::log(1.5) + 1.0));
  CHECK(model.idf("unseen") == doctest::Approx(std::log(3.0) + 1.0));
  CHECK_CODE(tfidf_fit({}), ErrorCode::EmptyCorpus);
}

TEST_CASE("doc weights are tf times idf, normalized per position") {
  auto model = tfidf_fit({{"a", "b"}, {"a"}});
  Eigen::VectorXd w = doc_weights({"a", "a", "b"}, model);
  const double b = 1.0 + std::log(1.5);
  const double total = 2.0 + 2.0 + b;
  CHECK(w[0] == doctest::Approx(2.0 / total));
  CHECK(w[1] == doctest::Approx(2.0 / total));
  CHECK(w[2] == doctest::Approx(b / total));
  CHECK(w.sum() == doctest::Approx(1.0));
  CHECK_CODE(doc_weights({}, model), ErrorCode::EmptySequence);
}

TEST_CASE("doc and topic pooling") {
  auto model = tfidf_fit({{"x"}, {"y"}});
  auto s = seq({"x", "y"}, {{1, 0}, {0, 2}});
  Eigen::VectorXd d = doc_vector(s, model);
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(1.0));
  Eigen::VectorXd t = topic_vector(s);
  CHECK(t[0] == doctest::Approx(0.5));
  CHECK(t[1] == doctest::Approx(1.0));
  Eigen::VectorXd p = pair_vector(d, Eigen::Vector2d(3, 4));
  REQUIRE(p.size() == 4);
  CHECK(p[2] == 3.0);
  CHECK(p[3] == 4.0);
  CHECK_CODE(pair_vector(d, Eigen::Vector3d(1, 2, 3)), ErrorCode::DimMismatch);
  CHECK_CODE(topic_vector(TokenSequenceEmbedding{}), ErrorCode::EmptySequence);
}

TEST_CASE("truncate keeps the leading rows") {
  auto s = seq({"a", "b", "c"}, {{1, 1}, {2, 2}, {3, 3}});
  auto t = truncate(s, 2);
  CHECK(t.tokens == std::vector<std::string>{"a", "b"});
  CHECK(t.vectors.rows() == 2);
  CHECK(t.vectors(1, 0) == 2.0f);
  CHECK(truncate(s, 5) == s);
}

TEST_CASE("stub vectors are unit norm and deterministic") {
  for (std::uint32_t dim : {2u, 7u, 32u}) {
    auto v = stub_token_vector("taxes", dim, 9);
    CHECK(v.size() == dim);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(v == stub_token_vector("taxes", dim, 9));
  }
  CHECK(stub_token_vector("taxes", 16, 9) != stub_token_vector("taxes", 16, 10));
  CHECK(stub_token_vector("taxes", 16, 9) != stub_token_vector("guns", 16, 9));
  CHECK_CODE(stub_token_vector("x", 1, 0), ErrorCode::InvalidArgument);
}

TEST_CASE("joint stub vectors depend on the partner text") {
  auto a = stub_encode({"we", "need", "schools"}, {"education"}, 16, 3);
  auto b = stub_encode({"we", "need", "schools"}, {"taxes"}, 16, 3);
  CHECK(a.sep_doc == b.sep_doc);
  CHECK_FALSE(a.joint_doc == b.joint_doc);
  CHECK(a.joint_doc.size() == 3);
  CHECK(a.joint_topic.size() == 1);
  // The context term is small: joint rows stay close to the separate ones.
  for (Eigen::Index r = 0; r < 3; ++r)
    CHECK((a.joint_doc.vectors.row(r) - a.sep_doc.vectors.row(r)).norm() == doctest::Approx(0.1).epsilon(1e-5));
}

TEST_CASE("stub store covers examples, docs and topics") {
  using testing::example;
  std::vector<StanceExample> exs{example("e1", "d1", "gun control", StanceLabel::Pro, SourceKind::Heur, "Guns kill."),
                                 example("e2", "d1", "tax", StanceLabel::Con, SourceKind::Heur, "Guns kill."),
                                 example("e3", "d2", "tax", StanceLabel::Con, SourceKind::Heur, "Taxes help us")};
  auto store = build_stub_store(exs, 8, 1);
  CHECK(store.dim == 8);
  CHECK(store.joint.size() == 3);
  CHECK(store.sep_docs.size() == 2);
  CHECK(store.sep_topics.size() == 2);
  CHECK(store.joint.at("e1").doc.tokens == std::vector<std::string>{"guns", "kill"});
  CHECK(store.sep_topics.at("gun control").tokens == std::vector<std::string>{"gun", "control"});
}

TEST_CASE("stub store applies the token caps") {
  std::string long_doc;
  for (int i = 0; i < 250; ++i) long_doc += "w" + std::to_string(i) + " ";
  auto ex = testing::example("e", "d", "one two three four five six seven", StanceLabel::Pro, SourceKind::Heur, long_doc);
  auto store = build_stub_store({ex}, 4, 0);
  CHECK(store.joint.at("e").doc.size() == kMaxDocTokens);
  CHECK(store.joint.at("e").topic.size() == kMaxTopicTokens);
  CHECK(store.sep_docs.at("d").size() == kMaxDocTokens);
}

TEST_CASE("word vectors and cosine") {
  testing::TempDir dir("wv");
  testing::spit(dir / "wv.txt", "gun 1 0\ncontrol 0 1\n\ntax -1 0\n");
  auto wv = load_word_vectors(dir / "wv.txt");
  CHECK(wv.dim == 2);
  CHECK(wv.table.size() == 3);
  Eigen::VectorXd v = static_topic_vector({"gun", "control", "unknown"}, wv);
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == doctest::Approx(0.5));
  CHECK(cosine_sim(v, Eigen::Vector2d(1, 1)) == doctest::Approx(1.0));
  CHECK(cosine_sim(wv.table["gun"], wv.table["tax"]) == doctest::Approx(-1.0));
  CHECK_CODE(static_topic_vector({"unknown"}, wv), ErrorCode::NoVocabOverlap);
  CHECK_CODE(cosine_sim(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)), ErrorCode::ZeroVector);

  testing::spit(dir / "bad.txt", "gun 1 0\ntax 1\n");
  CHECK_CODE(load_word_vectors(dir / "bad.txt"), ErrorCode::DimMismatch);
  testing::spit(dir / "nan.txt", "gun 1 zero\n");
  CHECK_CODE(load_word_vectors(dir / "nan.txt"), ErrorCode::MalformedRecord);
}

}
