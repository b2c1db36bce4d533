#pragma once

// Challenging-phenomena tagging (implicit topic, multiple topics, multiple
// stances, quotations, sarcasm) and per-phenomenon scoring.

#include <optional>
#include <string>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/eval/scoring.hpp"

namespace stance::eval {

struct PhenomenonTags {
  bool imp = false;   // topic phrase absent from document, non-neutral label
  bool mlt = false;   // document appears with several topics
  bool mls = false;   // document appears with both pro and con labels
  bool qte = false;   // document contains a quotation mark
  bool sarc = false;  // external sarcasm flag
};

std::vector<std::string> default_quote_chars();

/// Tags for each example. Multi-topic and multi-stance are computed over the
/// examples given, so pass the full dataset (or the union of splits) when
/// tagging an evaluation set.
std::vector<PhenomenonTags> tag_phenomena(const std::vector<StanceExample>& examples,
                                          const std::vector<std::string>& quote_chars = default_quote_chars(),
                                          const Lemmatizer& lemmatizer = {});

/// Tags for `targets`, computing document-level phenomena over `context`.
std::vector<PhenomenonTags> tag_phenomena(const std::vector<StanceExample>& targets,
                                          const std::vector<StanceExample>& context,
                                          const std::vector<std::string>& quote_chars,
                                          const Lemmatizer& lemmatizer = {});

/// True when `needle` occurs as a contiguous run inside `haystack`.
bool contains_sequence(const std::vector<std::string>& haystack,
                       const std::vector<std::string>& needle);

enum class Phenomenon { Imp, MlT, MlS, Qte, Sarc };
inline constexpr Phenomenon kAllPhenomena[] = {Phenomenon::Imp, Phenomenon::MlT, Phenomenon::MlS,
                                               Phenomenon::Qte, Phenomenon::Sarc};
const char* phenomenon_name(Phenomenon p);
bool has_phenomenon(const PhenomenonTags& tags, Phenomenon p);

struct PhenomenonRow {
  Phenomenon phenomenon = Phenomenon::Imp;
  std::size_t n_with = 0;
  std::size_t n_without = 0;
  std::optional<EvalReport> with;     // nullopt marks an empty stratum
  std::optional<EvalReport> without;
};

std::vector<PhenomenonRow> phenomenon_eval(const std::vector<StanceLabel>& gold,
                                           const std::vector<StanceLabel>& pred,
                                           const std::vector<PhenomenonTags>& tags);

}  // namespace stance::eval
