#include "stance/eval/sentiment.hpp"

#include <fstream>
#include <sstream>

#include "stance/error.hpp"
#include "stance/rng.hpp"

namespace stance::eval {

const char* majority_name(Majority m) {
  switch (m) {
    case Majority::MPlus: return "M+";
    case Majority::MMinus: return "M-";
    case Majority::Tie: return "tie";
  }
  return "?";
}

void SentimentLexicon::add_word(const std::string& word, Polarity polarity) {
  auto [it, inserted] = polarity_.emplace(word, polarity);
  if (!inserted && it->second != polarity)
    throw Error(ErrorCode::LexiconConflict, "'" + word + "' listed as both positive and negative");
}

void SentimentLexicon::add_synonym(const std::string& word, const std::string& synonym,
                                   Polarity polarity) {
  add_word(synonym, polarity);
  auto& list = synonyms_[word];
  for (const auto& s : list)
    if (s.word == synonym) return;
  list.push_back(Synonym{synonym, polarity});
}

std::optional<Polarity> SentimentLexicon::polarity(const std::string& word) const {
  auto it = polarity_.find(word);
  if (it == polarity_.end()) return std::nullopt;
  return it->second;
}

std::vector<SentimentLexicon::Synonym> SentimentLexicon::opposite_synonyms(const std::string& word) const {
  std::vector<Synonym> out;
  auto own = polarity(word);
  auto it = synonyms_.find(word);
  if (!own || it == synonyms_.end()) return out;
  for (const auto& s : it->second)
    if (s.polarity != *own) out.push_back(s);
  return out;
}

namespace {

Polarity parse_polarity(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  if (s == "positive") return Polarity::Positive;
  if (s == "negative") return Polarity::Negative;
  throw Error(ErrorCode::MalformedRecord,
              path.string() + ": line " + std::to_string(line) + ": polarity '" + s + "'");
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, '\t')) out.push_back(f);
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

}  // namespace

SentimentLexicon load_lexicon(const std::filesystem::path& lexicon,
                              const std::optional<std::filesystem::path>& synonyms) {
  SentimentLexicon lex;
  std::ifstream in(lexicon);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + lexicon.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto f = split_tabs(line);
    if (f.empty() || (f.size() == 1 && f[0].empty())) continue;
    if (f.size() != 2)
      throw Error(ErrorCode::MalformedRecord, lexicon.string() + ": line " + std::to_string(n) +
                                                  ": expected word<TAB>polarity");
    lex.add_word(f[0], parse_polarity(f[1], lexicon, n));
  }
  if (synonyms) {
    std::ifstream sin(*synonyms);
    if (!sin) throw Error(ErrorCode::Io, "cannot open " + synonyms->string());
    n = 0;
    while (std::getline(sin, line)) {
      ++n;
      auto f = split_tabs(line);
      if (f.empty() || (f.size() == 1 && f[0].empty())) continue;
      if (f.size() != 3)
        throw Error(ErrorCode::MalformedRecord, synonyms->string() + ": line " + std::to_string(n) +
                                                    ": expected word<TAB>synonym<TAB>polarity");
      lex.add_synonym(f[0], f[1], parse_polarity(f[2], *synonyms, n));
    }
  }
  return lex;
}

SentimentCounts count_sentiment(const std::vector<std::string>& tokens, const SentimentLexicon& lex) {
  SentimentCounts c;
  for (const auto& t : tokens) {
    if (auto p = lex.polarity(t)) (*p == Polarity::Positive ? c.positive : c.negative) += 1;
  }
  return c;
}

Majority sentiment_majority(const std::vector<std::string>& tokens, const SentimentLexicon& lex) {
  auto c = count_sentiment(tokens, lex);
  if (c.positive > c.negative) return Majority::MPlus;
  if (c.negative > c.positive) return Majority::MMinus;
  return Majority::Tie;
}

SwapResult sentiment_swap(const std::vector<std::string>& tokens, const SentimentLexicon& lex,
                          Majority target, std::uint64_t rng_seed) {
  if (target == Majority::Tie)
    throw Error(ErrorCode::InvalidArgument, "swap target must be M+ or M-");
  const Polarity source = target == Majority::MMinus ? Polarity::Positive : Polarity::Negative;
  rng::Rng rng(rng_seed);
  SwapResult out{tokens, {}};
  std::vector<char> replaced(tokens.size(), 0);
  while (sentiment_majority(out.tokens, lex) != target) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < out.tokens.size(); ++i)
      if (!replaced[i] && lex.polarity(out.tokens[i]) == source &&
          !lex.opposite_synonyms(out.tokens[i]).empty())
        pool.push_back(i);
    if (pool.empty())
      throw Error(ErrorCode::CannotFlip, "no replaceable words left after " +
                                             std::to_string(out.log.size()) + " replacements");
    std::size_t pos = pool[rng.index(pool.size())];
    auto options = lex.opposite_synonyms(out.tokens[pos]);
    const auto& pick = options[rng.index(options.size())];
    out.log.push_back(Replacement{pos, out.tokens[pos], pick.word});
    out.tokens[pos] = pick.word;
    replaced[pos] = 1;
  }
  return out;
}

}  // namespace stance::eval
