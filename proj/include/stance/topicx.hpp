#pragma once

// Heuristic topic extraction from Penn-bracketed constituency parses.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stance::topicx {

struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;
  std::optional<std::string> token;  // present iff leaf

  bool is_leaf() const { return token.has_value(); }
  bool operator==(const ParseTree&) const = default;
};

/// Reads one s-expression such as "(S (NP (NN taxes)) (VP ...))". A node whose
/// only content is an atom is a leaf (preterminal + word). An outer wrapper
/// with an empty label, "( (S ...) )", is accepted.
ParseTree parse_bracketed(std::string_view text);

/// Canonical single-line printer; parse_bracketed(to_bracketed(t)) == t.
std::string to_bracketed(const ParseTree& tree);

/// Space-joined leaf tokens.
std::string yield(const ParseTree& tree);

/// Noun phrases in subject position (NP children of the root clause before the
/// main VP) and object position (NP children of the main VP).
std::vector<std::string> extract_candidate_topics(const ParseTree& tree);

/// Keeps the categories in which no token starts with an uppercase letter.
std::vector<std::string> fallback_category_topics(const std::vector<std::string>& categories);

}  // namespace stance::topicx
