#include "helpers.hpp"
#include "stance/topicx.hpp"

using namespace stance;
using namespace stance::topicx;

TEST_SUITE("topicx") {

TEST_CASE("parse and print round trip") {
  const std::string text = "(S (NP (DT the) (NN government)) (VP (VBZ raises) (NP (NNS taxes))) (. .))";
  ParseTree t = parse_bracketed(text);
  CHECK(t.label == "S");
  REQUIRE(t.children.size() == 3);
  CHECK(t.children[0].children[1].token == "government");
  CHECK(to_bracketed(t) == text);
  CHECK(parse_bracketed(to_bracketed(t)) == t);
  CHECK(yield(t) == "the government raises taxes .");
}

TEST_CASE("whitespace and an empty outer wrapper are accepted") {
  ParseTree t = parse_bracketed("  ( (S\n  (NP (NN tax))\n  (VP (VB rises))) )  ");
  CHECK(t.label.empty());
  REQUIRE(t.children.size() == 1);
  CHECK(yield(t) == "tax rises");
}

TEST_CASE("parse errors") {
  CHECK_CODE(parse_bracketed(""), ErrorCode::EmptyInput);
  CHECK_CODE(parse_bracketed("   \n"), ErrorCode::EmptyInput);
  CHECK_CODE(parse_bracketed("(S (NP (NN tax))"), ErrorCode::UnbalancedParens);
  CHECK_CODE(parse_bracketed("(S (NN tax)))"), ErrorCode::UnbalancedParens);
  CHECK_CODE(parse_bracketed("(S word (NP (NN tax)))"), ErrorCode::MalformedTree);
  CHECK_CODE(parse_bracketed("(S)"), ErrorCode::MalformedTree);
  CHECK_CODE(parse_bracketed("NN tax"), ErrorCode::MalformedTree);
  CHECK_CODE(parse_bracketed("(NN tax) (NN more)"), ErrorCode::MalformedTree);
}

TEST_CASE("subject and object noun phrases") {
  auto t = parse_bracketed("(ROOT (S (NP (DT The) (NN government)) (VP (VBZ raises) (NP (JJ property) (NNS taxes))) (. .)))");
  CHECK(extract_candidate_topics(t) == std::vector<std::string>{"The government", "property taxes"});
}

TEST_CASE("auxiliary chains use the nested verb phrase") {
  auto t = parse_bracketed("(S (NP (NNP We)) (VP (MD should) (VP (VB disband) (NP (NNP NATO)))))");
  CHECK(extract_candidate_topics(t) == std::vector<std::string>{"We", "NATO"});
}

TEST_CASE("coordinated clauses use the first conjunct") {
  auto t = parse_bracketed(
      "(S (S (NP (NNS guns)) (VP (VBP kill) (NP (NNS people)))) (CC and) (S (NP (NNS laws)) (VP (VBP help))))");
  CHECK(extract_candidate_topics(t) == std::vector<std::string>{"guns", "people"});
}

TEST_CASE("no verb phrase means no candidates") {
  CHECK(extract_candidate_topics(parse_bracketed("(NP (DT the) (NN tax))")).empty());
  CHECK(extract_candidate_topics(parse_bracketed("(FRAG (NP (NN tax)))")).empty());
}

TEST_CASE("candidates are always substrings of the yield") {
  const char* trees[] = {
      "(S (NP (NN tax)) (VP (VBZ is) (NP (DT a) (NN burden))))",
      "(S (NP (PRP I)) (VP (VBP think) (SBAR (S (NP (NNS schools)) (VP (VBP need) (NP (NN money)))))))",
      "(SINV (VP (VBZ Is)) (NP (NN welfare)) (VP (VBN needed)))",
  };
  for (const char* text : trees) {
    auto t = parse_bracketed(text);
    const std::string y = yield(t);
    for (const auto& topic : extract_candidate_topics(t)) CHECK(y.find(topic) != std::string::npos);
  }
}

TEST_CASE("category fallback drops proper-noun categories") {
  CHECK(fallback_category_topics({"gun politics", "Barack Obama", "taxation in the United States", "  ",
                                  "education"}) == std::vector<std::string>{"gun politics", "education"});
  CHECK(fallback_category_topics({}).empty());
}

}
