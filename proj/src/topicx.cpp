#include "stance/topicx.hpp"

#include <cctype>

#include "stance/error.hpp"

namespace stance::topicx {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  ParseTree read_tree() {
    expect('(');
    ParseTree node;
    skip_ws();
    if (peek() != '(' && peek() != ')') node.label = read_atom();
    skip_ws();
    std::optional<std::string> atom;
    while (true) {
      skip_ws();
      if (at_end()) throw Error(ErrorCode::UnbalancedParens, "input ends inside a bracket");
      char c = peek();
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        if (atom) throw Error(ErrorCode::MalformedTree, "node mixes a word and subtrees");
        node.children.push_back(read_tree());
      } else {
        if (atom || !node.children.empty())
          throw Error(ErrorCode::MalformedTree, "node mixes a word and subtrees");
        atom = read_atom();
      }
    }
    if (atom) {
      node.token = std::move(atom);
    } else if (node.children.empty()) {
      throw Error(ErrorCode::MalformedTree, "empty node '" + node.label + "'");
    }
    return node;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::size_t pos() const { return pos_; }

 private:
  void expect(char c) {
    skip_ws();
    if (at_end()) throw Error(ErrorCode::UnbalancedParens, "unexpected end of input");
    if (peek() != c)
      throw Error(c == '(' ? ErrorCode::MalformedTree : ErrorCode::UnbalancedParens,
                  std::string("expected '") + c + "' at offset " + std::to_string(pos_));
    ++pos_;
  }

  std::string read_atom() {
    std::size_t start = pos_;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != '(' &&
           peek() != ')')
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print(const ParseTree& t, std::string& out) {
  out.push_back('(');
  out += t.label;
  if (t.token) {
    out.push_back(' ');
    out += *t.token;
  }
  for (const auto& c : t.children) {
    out.push_back(' ');
    print(c, out);
  }
  out.push_back(')');
}

void collect_yield(const ParseTree& t, std::string& out) {
  if (t.token) {
    if (!out.empty()) out.push_back(' ');
    out += *t.token;
    return;
  }
  for (const auto& c : t.children) collect_yield(c, out);
}

bool is_clause(const std::string& label) {
  return label == "S" || label == "SINV" || label == "SQ" || label == "SBARQ";
}

const ParseTree* first_child(const ParseTree& t, std::string_view label) {
  for (const auto& c : t.children)
    if (c.label == label) return &c;
  return nullptr;
}

bool has_child(const ParseTree& t, std::string_view label) { return first_child(t, label) != nullptr; }

}  // namespace

ParseTree parse_bracketed(std::string_view text) {
  Reader reader(text);
  reader.skip_ws();
  if (reader.at_end()) throw Error(ErrorCode::EmptyInput, "no parse tree");
  ParseTree tree = reader.read_tree();
  reader.skip_ws();
  if (!reader.at_end()) {
    if (reader.peek() == ')')
      throw Error(ErrorCode::UnbalancedParens, "extra ')' at offset " + std::to_string(reader.pos()));
    throw Error(ErrorCode::MalformedTree, "trailing input at offset " + std::to_string(reader.pos()));
  }
  return tree;
}

std::string to_bracketed(const ParseTree& tree) {
  std::string out;
  print(tree, out);
  return out;
}

std::string yield(const ParseTree& tree) {
  std::string out;
  collect_yield(tree, out);
  return out;
}

std::vector<std::string> extract_candidate_topics(const ParseTree& tree) {
  const ParseTree* clause = &tree;
  // Unwrap "( (S ...) )" and "(ROOT (S ...))".
  while ((clause->label.empty() || clause->label == "ROOT") && clause->children.size() == 1)
    clause = &clause->children.front();
  // Coordinated clauses: use the first conjunct.
  while (!has_child(*clause, "VP")) {
    const ParseTree* next = nullptr;
    for (const auto& c : clause->children)
      if (is_clause(c.label)) {
        next = &c;
        break;
      }
    if (!next) return {};
    clause = next;
  }

  std::vector<std::string> topics;
  const ParseTree* vp = nullptr;
  for (const auto& c : clause->children) {
    if (c.label == "VP") {
      vp = &c;
      break;
    }
    if (c.label == "NP") topics.push_back(yield(c));
  }
  // Auxiliary chains ("should disband NATO") put the main verb in a nested VP.
  while (!has_child(*vp, "NP") && has_child(*vp, "VP")) vp = first_child(*vp, "VP");
  for (const auto& c : vp->children)
    if (c.label == "NP") topics.push_back(yield(c));
  return topics;
}

std::vector<std::string> fallback_category_topics(const std::vector<std::string>& categories) {
  std::vector<std::string> out;
  for (const auto& cat : categories) {
    bool proper = false;
    bool word_start = true;
    bool any = false;
    for (unsigned char c : cat) {
      if (std::isspace(c)) {
        word_start = true;
        continue;
      }
      if (word_start && std::isupper(c)) proper = true;
      word_start = false;
      any = true;
    }
    if (any && !proper) out.push_back(cat);
  }
  return out;
}

}  // namespace stance::topicx
