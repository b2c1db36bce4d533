#pragma once

// Lexicon sentiment majority and opposite-polarity synonym substitution.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stance/corpus.hpp"

namespace stance::eval {

enum class Polarity { Positive, Negative };
enum class Majority { MPlus, MMinus, Tie };

const char* majority_name(Majority m);

class SentimentLexicon {
 public:
  struct Synonym {
    std::string word;
    Polarity polarity;
  };

  /// LexiconConflict if `word` already carries the other polarity.
  void add_word(const std::string& word, Polarity polarity);
  /// Records a synonym and registers its polarity.
  void add_synonym(const std::string& word, const std::string& synonym, Polarity polarity);

  std::optional<Polarity> polarity(const std::string& word) const;
  /// Synonyms of `word` whose polarity is opposite to the word's own.
  std::vector<Synonym> opposite_synonyms(const std::string& word) const;
  const std::map<std::string, std::vector<Synonym>>& synonyms() const { return synonyms_; }
  std::size_t size() const { return polarity_.size(); }

 private:
  std::map<std::string, Polarity> polarity_;
  std::map<std::string, std::vector<Synonym>> synonyms_;
};

/// "word<TAB>positive|negative" lines, plus optional
/// "word<TAB>synonym<TAB>polarity" lines.
SentimentLexicon load_lexicon(const std::filesystem::path& lexicon,
                              const std::optional<std::filesystem::path>& synonyms = std::nullopt);

struct SentimentCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

SentimentCounts count_sentiment(const std::vector<std::string>& tokens, const SentimentLexicon& lex);
Majority sentiment_majority(const std::vector<std::string>& tokens, const SentimentLexicon& lex);

struct Replacement {
  std::size_t position = 0;
  std::string original;
  std::string replacement;
};

struct SwapResult {
  std::vector<std::string> tokens;
  std::vector<Replacement> log;
};

/// Replaces randomly chosen words of the polarity opposite to `target` by a
/// random opposite-polarity synonym until the majority equals `target`.
/// Each position is replaced at most once; CannotFlip when none remain.
SwapResult sentiment_swap(const std::vector<std::string>& tokens, const SentimentLexicon& lex,
                          Majority target, std::uint64_t rng_seed);

}  // namespace stance::eval
