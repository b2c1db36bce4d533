#include "helpers.hpp"
#include "stance/eval/sentiment.hpp"

using namespace stance;
using namespace stance::eval;

namespace {

SentimentLexicon small_lexicon() {
  SentimentLexicon lex;
  lex.add_word("good", Polarity::Positive);
  lex.add_word("great", Polarity::Positive);
  lex.add_word("bad", Polarity::Negative);
  lex.add_synonym("good", "poor", Polarity::Negative);
  lex.add_synonym("good", "fine", Polarity::Positive);
  lex.add_synonym("great", "awful", Polarity::Negative);
  lex.add_synonym("bad", "nice", Polarity::Positive);
  return lex;
}

}  // namespace

TEST_SUITE("sentiment") {

TEST_CASE("lexicon polarity and synonyms") {
  auto lex = small_lexicon();
  CHECK(lex.polarity("good") == Polarity::Positive);
  CHECK(lex.polarity("poor") == Polarity::Negative);
  CHECK_FALSE(lex.polarity("table"));
  auto opp = lex.opposite_synonyms("good");
  REQUIRE(opp.size() == 1);
  CHECK(opp[0].word == "poor");
  CHECK(lex.opposite_synonyms("table").empty());
  CHECK_CODE(lex.add_word("good", Polarity::Negative), ErrorCode::LexiconConflict);
  lex.add_word("good", Polarity::Positive);
}

TEST_CASE("majority counts") {
  auto lex = small_lexicon();
  CHECK(sentiment_majority({"good", "bad", "great"}, lex) == Majority::MPlus);
  CHECK(sentiment_majority({"good", "bad"}, lex) == Majority::Tie);
  CHECK(sentiment_majority({}, lex) == Majority::Tie);
  CHECK(sentiment_majority({"bad", "poor", "good"}, lex) == Majority::MMinus);
  auto c = count_sentiment({"good", "table", "bad", "bad"}, lex);
  CHECK(c.positive == 1);
  CHECK(c.negative == 2);
  CHECK(std::string(majority_name(Majority::MPlus)) == "M+");
}

TEST_CASE("swap flips the majority with opposite synonyms only") {
  auto lex = small_lexicon();
  std::vector<std::string> doc{"good", "great", "bad", "day"};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto r = sentiment_swap(doc, lex, Majority::MMinus, seed);
    CHECK(sentiment_majority(r.tokens, lex) == Majority::MMinus);
    // One replacement turns 2:1 positive into 1:2.
    CHECK(r.log.size() == 1);
    for (const auto& rep : r.log) {
      CHECK(doc[rep.position] == rep.original);
      CHECK(lex.polarity(rep.original) == Polarity::Positive);
      CHECK(lex.polarity(rep.replacement) == Polarity::Negative);
    }
    CHECK(r.tokens[3] == "day");
  }
}

TEST_CASE("swap is deterministic in its seed") {
  auto lex = small_lexicon();
  std::vector<std::string> doc{"good", "good", "good", "bad"};
  auto a = sentiment_swap(doc, lex, Majority::MMinus, 7);
  auto b = sentiment_swap(doc, lex, Majority::MMinus, 7);
  CHECK(a.tokens == b.tokens);
  CHECK(a.log.size() == 2);
}

TEST_CASE("swap failures") {
  auto lex = small_lexicon();
  CHECK_CODE(sentiment_swap({"good", "fine", "fine"}, lex, Majority::MMinus, 1), ErrorCode::CannotFlip);
  CHECK_CODE(sentiment_swap({"good"}, lex, Majority::Tie, 1), ErrorCode::InvalidArgument);
  auto nothing = sentiment_swap({"bad"}, lex, Majority::MMinus, 1);
  CHECK(nothing.log.empty());
}

TEST_CASE("lexicon files") {
  testing::TempDir dir("lex");
  testing::spit(dir / "lex.tsv", "good\tpositive\r\n\nbad\tnegative\n");
  testing::spit(dir / "syn.tsv", "good\tpoor\tnegative\n");
  auto lex = load_lexicon(dir / "lex.tsv", dir / "syn.tsv");
  CHECK(lex.size() == 3);
  CHECK(lex.opposite_synonyms("good").at(0).word == "poor");

  testing::spit(dir / "bad.tsv", "good\tpositive\nbad\tnasty\n");
  try {
    load_lexicon(dir / "bad.tsv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedRecord);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  testing::spit(dir / "three.tsv", "good\tpositive\textra\n");
  CHECK_CODE(load_lexicon(dir / "three.tsv"), ErrorCode::MalformedRecord);
  testing::spit(dir / "conflict.tsv", "good\tpositive\ngood\tnegative\n");
  CHECK_CODE(load_lexicon(dir / "conflict.tsv"), ErrorCode::LexiconConflict);
  CHECK_CODE(load_lexicon(dir / "missing.tsv"), ErrorCode::Io);
}

}
