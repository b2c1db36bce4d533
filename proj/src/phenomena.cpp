#include "stance/eval/phenomena.hpp"

#include <set>
#include <unordered_map>

#include "stance/error.hpp"

namespace stance::eval {

std::vector<std::string> default_quote_chars() {
  return {"\"", "\xE2\x80\x9C", "\xE2\x80\x9D"};  // ", left and right curly double quotes
}

bool contains_sequence(const std::vector<std::string>& haystack,
                       const std::vector<std::string>& needle) {
  if (needle.empty()) return true;
  if (needle.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    std::size_t j = 0;
    while (j < needle.size() && haystack[i + j] == needle[j]) ++j;
    if (j == needle.size()) return true;
  }
  return false;
}

std::vector<PhenomenonTags> tag_phenomena(const std::vector<StanceExample>& targets,
                                          const std::vector<StanceExample>& context,
                                          const std::vector<std::string>& quote_chars,
                                          const Lemmatizer& lemmatizer) {
  struct DocInfo {
    std::set<std::string> topics;
    bool pro = false;
    bool con = false;
  };
  std::unordered_map<std::string, DocInfo> docs;
  for (const auto* set : {&context, &targets}) {
    for (const auto& ex : *set) {
      auto& d = docs[ex.doc_id];
      d.topics.insert(topic_key(ex.topic_tokens));
      d.pro |= ex.label == StanceLabel::Pro;
      d.con |= ex.label == StanceLabel::Con;
    }
  }

  std::vector<PhenomenonTags> out;
  out.reserve(targets.size());
  std::unordered_map<std::string, std::vector<std::string>> doc_tokens;
  for (const auto& ex : targets) {
    auto it = doc_tokens.find(ex.doc_id);
    if (it == doc_tokens.end())
      it = doc_tokens.emplace(ex.doc_id, normalize_tokens(ex.document, lemmatizer)).first;
    const DocInfo& d = docs[ex.doc_id];
    PhenomenonTags t;
    t.imp = ex.label != StanceLabel::Neutral && !contains_sequence(it->second, ex.topic_tokens);
    t.mlt = d.topics.size() >= 2;
    t.mls = d.pro && d.con;
    for (const auto& q : quote_chars)
      if (!q.empty() && ex.document.find(q) != std::string::npos) t.qte = true;
    t.sarc = ex.sarcasm;
    out.push_back(t);
  }
  return out;
}

std::vector<PhenomenonTags> tag_phenomena(const std::vector<StanceExample>& examples,
                                          const std::vector<std::string>& quote_chars,
                                          const Lemmatizer& lemmatizer) {
  return tag_phenomena(examples, {}, quote_chars, lemmatizer);
}

const char* phenomenon_name(Phenomenon p) {
  switch (p) {
    case Phenomenon::Imp: return "Imp";
    case Phenomenon::MlT: return "mlT";
    case Phenomenon::MlS: return "mlS";
    case Phenomenon::Qte: return "Qte";
    case Phenomenon::Sarc: return "Sarc";
  }
  return "?";
}

bool has_phenomenon(const PhenomenonTags& tags, Phenomenon p) {
  switch (p) {
    case Phenomenon::Imp: return tags.imp;
    case Phenomenon::MlT: return tags.mlt;
    case Phenomenon::MlS: return tags.mls;
    case Phenomenon::Qte: return tags.qte;
    case Phenomenon::Sarc: return tags.sarc;
  }
  return false;
}

std::vector<PhenomenonRow> phenomenon_eval(const std::vector<StanceLabel>& gold,
                                           const std::vector<StanceLabel>& pred,
                                           const std::vector<PhenomenonTags>& tags) {
  if (gold.size() != pred.size() || gold.size() != tags.size())
    throw Error(ErrorCode::LengthMismatch, "gold, predictions and tags differ in length");
  std::vector<PhenomenonRow> rows;
  for (Phenomenon ph : kAllPhenomena) {
    std::vector<StanceLabel> gw, pw, go, po;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (has_phenomenon(tags[i], ph)) {
        gw.push_back(gold[i]);
        pw.push_back(pred[i]);
      } else {
        go.push_back(gold[i]);
        po.push_back(pred[i]);
      }
    }
    PhenomenonRow row;
    row.phenomenon = ph;
    row.n_with = gw.size();
    row.n_without = go.size();
    if (!gw.empty()) row.with = macro_f1(gw, pw);
    if (!go.empty()) row.without = macro_f1(go, po);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace stance::eval
