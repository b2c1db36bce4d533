#include <bit>
#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "stance/embed.hpp"

using namespace stance;
using namespace stance::embed;

namespace {

void u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void f32(std::string& b, float v) { u32(b, std::bit_cast<std::uint32_t>(v)); }
void str(std::string& b, const std::string& s) {
  u32(b, static_cast<std::uint32_t>(s.size()));
  b += s;
}
void block(std::string& b, const std::vector<std::string>& tokens, const std::vector<float>& values) {
  u32(b, static_cast<std::uint32_t>(tokens.size()));
  for (const auto& t : tokens) str(b, t);
  for (float v : values) f32(b, v);
}

/// dim 2: one joint entry, one doc, one topic.
std::string hand_store() {
  std::string b = "TGAE";
  u32(b, 1);
  u32(b, 2);
  u32(b, 1);
  str(b, "e1");
  block(b, {"tax"}, {0.5f, -0.5f});
  block(b, {"we", "pay"}, {1, 2, 3, 4});
  u32(b, 1);
  str(b, "d1");
  block(b, {"we", "pay"}, {1, 0, 0, 1});
  u32(b, 1);
  str(b, "tax");
  block(b, {"tax"}, {0.25f, 0.75f});
  return b;
}

EmbeddingStore random_store(std::uint64_t seed) {
  using testing::example;
  std::vector<StanceExample> exs{
      example("a|1", "a", "gun control", StanceLabel::Pro, SourceKind::Heur, "guns are bad"),
      example("b|1", "b", "taxes", StanceLabel::Con, SourceKind::Heur, "we pay too much tax")};
  return build_stub_store(exs, 6, seed);
}

}  // namespace

TEST_SUITE("store") {

TEST_CASE("reads a hand-assembled file") {
  testing::TempDir dir("store");
  testing::spit(dir / "s.tgae", hand_store());
  StoreWarnings w;
  auto s = read_store(dir / "s.tgae", &w);
  CHECK(w.empty());
  CHECK(s.dim == 2);
  REQUIRE(s.joint.count("e1") == 1);
  const auto& e = s.joint.at("e1");
  CHECK(e.topic.tokens == std::vector<std::string>{"tax"});
  CHECK(e.topic.vectors(0, 1) == -0.5f);
  CHECK(e.doc.tokens == std::vector<std::string>{"we", "pay"});
  CHECK(e.doc.vectors(1, 0) == 3.0f);
  CHECK(e.doc.vectors(1, 1) == 4.0f);
  CHECK(s.sep_docs.at("d1").vectors(1, 1) == 1.0f);
  CHECK(s.sep_topics.at("tax").vectors(0, 1) == 0.75f);
}

TEST_CASE("writer output is byte-identical to the hand layout") {
  testing::TempDir dir("store");
  testing::spit(dir / "in.tgae", hand_store());
  auto s = read_store(dir / "in.tgae");
  write_store(s, dir / "out.tgae");
  CHECK(testing::slurp(dir / "out.tgae") == hand_store());
}

TEST_CASE("round trip") {
  testing::TempDir dir("store");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto s = random_store(seed);
    write_store(s, dir / "r.tgae");
    StoreWarnings w;
    CHECK(read_store(dir / "r.tgae", &w) == s);
    CHECK(w.empty());
  }
}

TEST_CASE("header errors") {
  testing::TempDir dir("store");
  std::string bytes = hand_store();

  std::string magic = bytes;
  magic[0] = 'X';
  testing::spit(dir / "m", magic);
  CHECK_CODE(read_store(dir / "m"), ErrorCode::BadMagic);

  std::string version = bytes;
  version[4] = 2;
  testing::spit(dir / "v", version);
  CHECK_CODE(read_store(dir / "v"), ErrorCode::VersionMismatch);

  std::string dim0 = bytes;
  dim0[8] = 0;
  testing::spit(dir / "d", dim0);
  CHECK_CODE(read_store(dir / "d"), ErrorCode::DimMismatch);

  CHECK_CODE(read_store(dir / "missing"), ErrorCode::Io);
}

TEST_CASE("every proper prefix is a truncated file") {
  testing::TempDir dir("store");
  const std::string bytes = hand_store();
  for (std::size_t n = 4; n < bytes.size(); ++n) {
    testing::spit(dir / "t", bytes.substr(0, n));
    CHECK_CODE(read_store(dir / "t"), ErrorCode::TruncatedFile);
  }
}

TEST_CASE("warnings for caps, non-finite values, empty sequences and trailing bytes") {
  testing::TempDir dir("store");
  EmbeddingStore s;
  s.dim = 1;
  TokenSequenceEmbedding topic;
  for (int i = 0; i < 6; ++i) topic.tokens.push_back("t" + std::to_string(i));
  topic.vectors = RowMatrixF::Ones(6, 1);
  TokenSequenceEmbedding doc;
  doc.tokens = {"x"};
  doc.vectors = RowMatrixF::Constant(1, 1, std::numeric_limits<float>::quiet_NaN());
  s.joint["e"] = JointEntry{topic, doc};
  s.sep_docs["d"] = TokenSequenceEmbedding{};
  write_store(s, dir / "w.tgae");
  {
    std::ofstream out(dir / "w.tgae", std::ios::binary | std::ios::app);
    out << "junk";
  }
  StoreWarnings w;
  read_store(dir / "w.tgae", &w);
  REQUIRE(w.messages.size() == 4);
  CHECK(w.messages[0].find("exceeds cap 5") != std::string::npos);
  CHECK(w.messages[1].find("non-finite") != std::string::npos);
  CHECK(w.messages[2].find("sep_docs[d]") != std::string::npos);
  CHECK(w.messages[3].find("trailing") != std::string::npos);
}

TEST_CASE("writer rejects shape mismatches") {
  testing::TempDir dir("store");
  EmbeddingStore s;
  s.dim = 3;
  TokenSequenceEmbedding bad;
  bad.tokens = {"a", "b"};
  bad.vectors = RowMatrixF::Zero(1, 3);
  s.sep_topics["t"] = bad;
  CHECK_CODE(write_store(s, dir / "x"), ErrorCode::DimMismatch);
  bad.vectors = RowMatrixF::Zero(2, 2);
  s.sep_topics["t"] = bad;
  CHECK_CODE(write_store(s, dir / "x"), ErrorCode::DimMismatch);
  CHECK_CODE(write_store(EmbeddingStore{}, dir / "x"), ErrorCode::DimMismatch);
}

}
