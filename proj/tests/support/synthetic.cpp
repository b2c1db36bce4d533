#include "synthetic.hpp"

#include "stance/rng.hpp"

namespace stance::testing {

namespace {

std::string word(const char* kind, int theme, int j) {
  return "t" + std::to_string(theme) + kind + std::to_string(j);
}

StanceExample make_example(const SyntheticOptions& o, rng::Rng& rng, const std::string& part, int theme,
                           int index, bool zero_shot) {
  // Topics pair the theme's head word with a modifier; modifiers 0..5 appear
  // in train topics, 6..9 only in held-out ones.
  const int modifier = zero_shot ? 6 + int(rng.index(4)) : int(rng.index(6));

  StanceLabel label = label_from_int(theme % 3);
  if (o.content_labels) label = label_from_int(static_cast<long long>(rng.index(3)));

  std::string doc;
  for (int w = 0; w < o.doc_words; ++w) {
    if (!doc.empty()) doc.push_back(' ');
    doc += word("d", theme, int(rng.index(o.doc_vocab)));
  }
  if (o.content_labels)
    for (int w = 0; w < o.marker_words; ++w)
      doc += " mark" + std::to_string(label_index(label)) + "x" + std::to_string(rng.index(3));

  StanceExample ex;
  ex.doc_id = part + "-" + std::to_string(theme) + "-" + std::to_string(index);
  ex.example_id = ex.doc_id + "|H";
  ex.document = doc;
  ex.topic_raw = word("h", theme, 0) + " " + word("k", theme, modifier);
  ex.topic_tokens = normalize_topic(ex.topic_raw);
  ex.label = label;
  ex.kind = SourceKind::Heur;
  return ex;
}

}  // namespace

DatasetSplit make_synthetic_split(const SyntheticOptions& o) {
  rng::Rng rng(o.seed);
  DatasetSplit split;
  for (int t = 0; t < o.themes; ++t) {
    for (int i = 0; i < o.train_per_theme; ++i) split.train.push_back(make_example(o, rng, "train", t, i, false));
    for (int i = 0; i < o.dev_per_theme; ++i) split.dev.push_back(make_example(o, rng, "dev", t, i, true));
    for (int i = 0; i < o.test_per_theme; ++i) split.test.push_back(make_example(o, rng, "test", t, i, true));
  }
  assign_shot_subsets(split);
  return split;
}

}  // namespace stance::testing
