#include "stance/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "stance/error.hpp"
#include "stance/rng.hpp"

namespace stance {

namespace {

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> out;
    std::istringstream in(
#include "stopwords.inc"
    );
    std::string w;
    while (in >> w) out.insert(w);
    return out;
  }();
  return words;
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

StanceLabel label_from_int(long long v) {
  if (v < 0 || v > 2) throw Error(ErrorCode::BadLabel, "label " + std::to_string(v));
  return static_cast<StanceLabel>(v);
}

std::string_view label_name(StanceLabel l) {
  switch (l) {
    case StanceLabel::Con: return "con";
    case StanceLabel::Pro: return "pro";
    case StanceLabel::Neutral: return "neutral";
  }
  return "?";
}

std::string_view kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::Heur: return "Heur";
    case SourceKind::Corr: return "Corr";
    case SourceKind::List: return "List";
    case SourceKind::SynthNeutral: return "SynthNeutral";
  }
  return "?";
}

SourceKind kind_from_string(std::string_view s) {
  if (s == "Heur") return SourceKind::Heur;
  if (s == "Corr") return SourceKind::Corr;
  if (s == "List") return SourceKind::List;
  if (s == "SynthNeutral") return SourceKind::SynthNeutral;
  throw Error(ErrorCode::InvalidArgument, "unknown kind '" + std::string(s) + "'");
}

bool is_stopword(std::string_view word) { return stopwords().count(std::string(word)) > 0; }

std::vector<std::string> tokenize_text(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> normalize_tokens(std::string_view text, const Lemmatizer& lemmatizer) {
  std::vector<std::string> out;
  for (auto& tok : tokenize_text(text)) {
    if (is_stopword(tok)) continue;
    std::string lemma = lemmatizer ? lemmatizer(tok) : tok;
    if (!lemma.empty()) out.push_back(std::move(lemma));
  }
  return out;
}

std::vector<std::string> normalize_topic(std::string_view raw, const Lemmatizer& lemmatizer) {
  if (trim(raw).empty()) throw Error(ErrorCode::EmptyTopic, "blank topic");
  auto tokens = normalize_tokens(raw, lemmatizer);
  if (tokens.empty())
    throw Error(ErrorCode::EmptyTopic, "no content tokens in '" + std::string(raw) + "'");
  return tokens;
}

std::string topic_key(const std::vector<std::string>& tokens) {
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key.push_back(' ');
    key += t;
  }
  return key;
}

StanceLabel map_scale(int raw_stance, bool inverted) {
  if (raw_stance < 1 || raw_stance > 5)
    throw Error(ErrorCode::OutOfRange, "stance " + std::to_string(raw_stance) + " not in [1,5]");
  if (inverted) raw_stance = 6 - raw_stance;
  if (raw_stance <= 2) return StanceLabel::Con;
  if (raw_stance == 3) return StanceLabel::Neutral;
  return StanceLabel::Pro;
}

// --- aggregation ---------------------------------------------------------------

namespace {

using GroupKey = std::pair<std::string, std::string>;

struct Groups {
  std::vector<GroupKey> order;
  std::map<GroupKey, std::vector<std::size_t>> members;
};

Groups group_records(const std::vector<AnnotationRecord>& records) {
  Groups g;
  for (std::size_t i = 0; i < records.size(); ++i) {
    GroupKey key{records[i].doc_id, records[i].given_topic};
    auto [it, inserted] = g.members.try_emplace(key);
    if (inserted) g.order.push_back(key);
    it->second.push_back(i);
  }
  return g;
}

std::optional<StanceLabel> strict_majority(const std::array<int, kNumLabels>& counts, int total) {
  for (int l = 0; l < kNumLabels; ++l)
    if (2 * counts[l] > total) return static_cast<StanceLabel>(l);
  return std::nullopt;
}

bool has_correction(const AnnotationRecord& r) {
  return r.corrected_topic && !trim(*r.corrected_topic).empty();
}

std::optional<std::vector<std::string>> try_normalize(std::string_view raw, const Lemmatizer& lem) {
  try {
    return normalize_topic(raw, lem);
  } catch (const Error&) {
    return std::nullopt;
  }
}

class IdAllocator {
 public:
  std::string make(const std::string& base) {
    std::string id = base;
    for (int n = 2; used_.count(id); ++n) id = base + "#" + std::to_string(n);
    used_.insert(id);
    return id;
  }

 private:
  std::unordered_set<std::string> used_;
};

}  // namespace

std::vector<std::pair<std::string, double>> worker_agreement(
    const std::vector<AnnotationRecord>& records, bool inverted_scale) {
  std::map<std::string, std::pair<double, double>> tally;  // agree, pairs
  Groups groups = group_records(records);
  for (const auto& key : groups.order) {
    const auto& idx = groups.members[key];
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        const auto& ra = records[idx[a]];
        const auto& rb = records[idx[b]];
        if (ra.worker_id == rb.worker_id) continue;
        double agree =
            map_scale(ra.raw_stance, inverted_scale) == map_scale(rb.raw_stance, inverted_scale);
        for (const auto* w : {&ra.worker_id, &rb.worker_id}) {
          auto& t = tally[*w];
          t.first += agree;
          t.second += 1.0;
        }
      }
    }
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [w, t] : tally) out.emplace_back(w, t.first / t.second);
  return out;
}

std::vector<StanceExample> aggregate_annotations(const std::vector<AnnotationRecord>& records,
                                                 const AggregationOptions& options) {
  for (const auto& r : records) map_scale(r.raw_stance, options.inverted_scale);

  std::unordered_set<std::string> dropped;
  for (const auto& [worker, rate] : worker_agreement(records, options.inverted_scale))
    if (rate < options.min_agreement) dropped.insert(worker);

  std::unordered_map<std::string, std::string> documents;
  for (const auto& r : records)
    if (r.document && !documents.count(r.doc_id)) documents[r.doc_id] = *r.document;

  IdAllocator ids;
  std::vector<StanceExample> out;
  auto emit = [&](const std::string& doc_id, std::string topic_raw, std::vector<std::string> tokens,
                  StanceLabel label, SourceKind kind, const std::string& id_base) {
    StanceExample ex;
    ex.example_id = ids.make(id_base);
    ex.doc_id = doc_id;
    auto doc = documents.find(doc_id);
    ex.document = doc == documents.end() ? std::string() : doc->second;
    ex.topic_raw = std::move(topic_raw);
    ex.topic_tokens = std::move(tokens);
    ex.label = label;
    ex.kind = kind;
    out.push_back(std::move(ex));
  };

  Groups groups = group_records(records);
  for (const auto& key : groups.order) {
    std::vector<const AnnotationRecord*> kept;
    for (std::size_t i : groups.members[key])
      if (!dropped.count(records[i].worker_id)) kept.push_back(&records[i]);
    if (kept.empty()) continue;
    const std::string& doc_id = key.first;
    const std::string& given = key.second;
    const int total = static_cast<int>(kept.size());

    // Heur: uncorrected votes must form a strict majority of all responses.
    std::array<int, kNumLabels> heur{};
    for (const auto* r : kept)
      if (!has_correction(*r)) ++heur[label_index(map_scale(r->raw_stance, options.inverted_scale))];
    if (auto winner = strict_majority(heur, total)) {
      if (auto tokens = try_normalize(given, options.lemmatizer)) {
        std::string base = doc_id + "|H|" + topic_key(*tokens);
        emit(doc_id, given, std::move(*tokens), *winner, SourceKind::Heur, base);
      }
    }

    // Corr: one vote group per normalized corrected topic.
    std::vector<std::string> corr_order;
    std::map<std::string, std::vector<const AnnotationRecord*>> corr_groups;
    std::map<std::string, std::vector<std::string>> corr_tokens;
    for (const auto* r : kept) {
      if (!has_correction(*r)) continue;
      auto tokens = try_normalize(*r->corrected_topic, options.lemmatizer);
      if (!tokens) continue;
      std::string k = topic_key(*tokens);
      if (!corr_groups.count(k)) {
        corr_order.push_back(k);
        corr_tokens[k] = *tokens;
      }
      corr_groups[k].push_back(r);
    }
    for (const auto& k : corr_order) {
      const auto& voters = corr_groups[k];
      std::array<int, kNumLabels> counts{};
      for (const auto* r : voters)
        ++counts[label_index(map_scale(r->raw_stance, options.inverted_scale))];
      if (auto winner = strict_majority(counts, static_cast<int>(voters.size())))
        emit(doc_id, trim(*voters.front()->corrected_topic), corr_tokens[k], *winner,
             SourceKind::Corr, doc_id + "|C|" + k);
    }

    // List: every listed topic inherits its worker's label.
    for (const auto* r : kept) {
      std::set<std::string> seen;
      StanceLabel label = map_scale(r->raw_stance, options.inverted_scale);
      for (const auto& listed : r->listed_topics) {
        auto tokens = try_normalize(listed, options.lemmatizer);
        if (!tokens) continue;
        std::string k = topic_key(*tokens);
        if (!seen.insert(k).second) continue;
        emit(doc_id, trim(listed), std::move(*tokens), label, SourceKind::List,
             doc_id + "|L|" + r->worker_id + "|" + k);
      }
    }
  }
  return out;
}

// --- neutral synthesis -----------------------------------------------------------

std::vector<StanceExample> generate_neutrals(const std::vector<StanceExample>& dataset, double p,
                                             std::uint64_t rng_seed) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "neutral probability must lie in [0,1]");

  struct PoolTopic {
    std::string raw;
    std::vector<std::string> tokens;
  };
  std::map<std::string, PoolTopic> by_key;
  std::unordered_map<std::string, std::set<std::string>> doc_tokens;
  for (const auto& ex : dataset) {
    by_key.try_emplace(topic_key(ex.topic_tokens), PoolTopic{ex.topic_raw, ex.topic_tokens});
    doc_tokens[ex.doc_id].insert(ex.topic_tokens.begin(), ex.topic_tokens.end());
  }
  if (by_key.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "need at least 2 distinct topics to synthesize neutrals");
  std::vector<const PoolTopic*> pool;
  for (const auto& [k, t] : by_key) pool.push_back(&t);

  rng::Rng rng(rng_seed);
  std::vector<StanceExample> out;
  out.reserve(dataset.size() * 2);
  for (const auto& ex : dataset) {
    out.push_back(ex);
    if (ex.kind != SourceKind::Heur && ex.kind != SourceKind::Corr) continue;
    if (!rng.bernoulli(p)) continue;

    auto& blocked = doc_tokens[ex.doc_id];
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const PoolTopic* chosen = nullptr;
    for (std::size_t i : order) {
      const auto& cand = pool[i]->tokens;
      bool overlaps = std::any_of(cand.begin(), cand.end(),
                                  [&](const std::string& t) { return blocked.count(t) > 0; });
      if (!overlaps) {
        chosen = pool[i];
        break;
      }
    }
    if (!chosen)
      throw Error(ErrorCode::NoValidTopic, "no lexically distinct topic for example " + ex.example_id);

    StanceExample neutral = ex;
    neutral.example_id = ex.example_id + "|N";
    neutral.topic_raw = chosen->raw;
    neutral.topic_tokens = chosen->tokens;
    neutral.label = StanceLabel::Neutral;
    neutral.kind = SourceKind::SynthNeutral;
    blocked.insert(chosen->tokens.begin(), chosen->tokens.end());
    out.push_back(std::move(neutral));
  }
  return out;
}

// --- splitting ---------------------------------------------------------------------

std::array<std::size_t, 3> partition_sizes(std::size_t n, const SplitRatios& r) {
  if (r.train < 0 || r.dev < 0 || r.test < 0 || std::abs(r.train + r.dev + r.test - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "split ratios must be nonnegative and sum to 1");
  const double eps = 1e-9;
  std::array<std::size_t, 3> sizes{
      static_cast<std::size_t>(std::floor(n * r.train + eps)),
      static_cast<std::size_t>(std::floor(n * r.dev + eps)),
      static_cast<std::size_t>(std::floor(n * r.test + eps))};
  std::size_t assigned = sizes[0] + sizes[1] + sizes[2];
  // Leftover documents alternate dev, test, dev, ...
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++sizes[1 + i % 2];
  return sizes;
}

DatasetSplit split_dataset(const std::vector<StanceExample>& dataset, const SplitRatios& ratios,
                           std::uint64_t rng_seed) {
  std::vector<std::string> docs;
  {
    std::set<std::string> unique;
    for (const auto& ex : dataset) unique.insert(ex.doc_id);
    docs.assign(unique.begin(), unique.end());
  }
  auto sizes = partition_sizes(docs.size(), ratios);
  if (sizes[0] == 0 || sizes[1] == 0 || sizes[2] == 0)
    throw Error(ErrorCode::TooFewDocuments,
                std::to_string(docs.size()) + " documents cannot fill three partitions");

  rng::Rng rng(rng_seed);
  rng.shuffle(docs);
  std::unordered_map<std::string, int> part;
  for (std::size_t i = 0; i < docs.size(); ++i)
    part[docs[i]] = i < sizes[0] ? 0 : (i < sizes[0] + sizes[1] ? 1 : 2);

  DatasetSplit split;
  for (const auto& ex : dataset) {
    int p = part[ex.doc_id];
    if (p == 0) {
      split.train.push_back(ex);
    } else if (ex.kind != SourceKind::List) {
      (p == 1 ? split.dev : split.test).push_back(ex);
    }
  }

  assign_shot_subsets(split);
  return split;
}

void assign_shot_subsets(DatasetSplit& split) {
  split.zero_shot_dev.clear();
  split.few_shot_dev.clear();
  split.zero_shot_test.clear();
  split.few_shot_test.clear();
  std::unordered_set<std::string> train_topics;
  for (const auto& ex : split.train) train_topics.insert(topic_key(ex.topic_tokens));
  auto classify = [&](const std::vector<StanceExample>& part_examples, std::vector<std::size_t>& zero,
                      std::vector<std::size_t>& few) {
    for (std::size_t i = 0; i < part_examples.size(); ++i)
      (train_topics.count(topic_key(part_examples[i].topic_tokens)) ? few : zero).push_back(i);
  };
  classify(split.dev, split.zero_shot_dev, split.few_shot_dev);
  classify(split.test, split.zero_shot_test, split.few_shot_test);
}

// --- I/O ---------------------------------------------------------------------------

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + what);
}

template <class F>
void for_each_line(const std::filesystem::path& path, F&& f) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      f(line, line_no);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.detail());
    }
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

Json parse_object(std::string_view line, std::size_t line_no) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(line_no, e.what());
  }
  if (!j.is_object()) malformed(line_no, "record is not an object");
  return j;
}

const Json& field(const Json& j, const char* name, std::size_t line_no) {
  auto it = j.find(name);
  if (it == j.end()) malformed(line_no, std::string("missing \"") + name + "\"");
  return *it;
}

std::string string_field(const Json& j, const char* name, std::size_t line_no) {
  const Json& v = field(j, name, line_no);
  if (!v.is_string()) malformed(line_no, std::string("\"") + name + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string serialize_example(const StanceExample& ex) {
  Json j;
  j["example_id"] = ex.example_id;
  j["doc_id"] = ex.doc_id;
  j["document"] = ex.document;
  j["topic_raw"] = ex.topic_raw;
  j["topic_tokens"] = ex.topic_tokens;
  j["label"] = label_index(ex.label);
  j["kind"] = std::string(kind_name(ex.kind));
  j["sarcasm"] = ex.sarcasm;
  return j.dump();
}

StanceExample parse_example(std::string_view line, std::size_t line_no) {
  Json j = parse_object(line, line_no);
  StanceExample ex;
  ex.example_id = string_field(j, "example_id", line_no);
  ex.doc_id = string_field(j, "doc_id", line_no);
  ex.document = string_field(j, "document", line_no);
  ex.topic_raw = string_field(j, "topic_raw", line_no);
  const Json& toks = field(j, "topic_tokens", line_no);
  if (!toks.is_array() || toks.empty()) malformed(line_no, "\"topic_tokens\" must be a non-empty array");
  for (const auto& t : toks) {
    if (!t.is_string()) malformed(line_no, "\"topic_tokens\" entries must be strings");
    ex.topic_tokens.push_back(t.get<std::string>());
  }
  const Json& label = field(j, "label", line_no);
  if (!label.is_number_integer() || label.get<long long>() < 0 || label.get<long long>() > 2)
    malformed(line_no, "\"label\" must be 0, 1 or 2");
  ex.label = label_from_int(label.get<long long>());
  try {
    ex.kind = kind_from_string(string_field(j, "kind", line_no));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedRecord) throw;
    malformed(line_no, e.detail());
  }
  const Json& sarc = field(j, "sarcasm", line_no);
  if (!sarc.is_boolean()) malformed(line_no, "\"sarcasm\" must be a boolean");
  ex.sarcasm = sarc.get<bool>();
  return ex;
}

std::vector<StanceExample> read_dataset(const std::filesystem::path& path) {
  std::vector<StanceExample> out;
  for_each_line(path, [&](const std::string& line, std::size_t n) {
    out.push_back(parse_example(line, n));
  });
  return out;
}

void write_dataset(const std::vector<StanceExample>& examples, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (const auto& ex : examples) out << serialize_example(ex) << '\n';
}

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path) {
  std::vector<AnnotationRecord> out;
  for_each_line(path, [&](const std::string& line, std::size_t n) {
    Json j = parse_object(line, n);
    AnnotationRecord r;
    r.worker_id = string_field(j, "worker_id", n);
    r.doc_id = string_field(j, "doc_id", n);
    r.given_topic = string_field(j, "given_topic", n);
    const Json& s = field(j, "raw_stance", n);
    if (!s.is_number_integer() || s.get<long long>() < 1 || s.get<long long>() > 5)
      malformed(n, "\"raw_stance\" must be an integer in [1,5]");
    r.raw_stance = s.get<int>();
    if (auto it = j.find("corrected_topic"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) malformed(n, "\"corrected_topic\" must be a string or null");
      r.corrected_topic = it->get<std::string>();
    }
    if (auto it = j.find("listed_topics"); it != j.end()) {
      if (!it->is_array()) malformed(n, "\"listed_topics\" must be an array");
      for (const auto& t : *it) {
        if (!t.is_string()) malformed(n, "\"listed_topics\" entries must be strings");
        r.listed_topics.push_back(t.get<std::string>());
      }
    }
    if (auto it = j.find("document"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) malformed(n, "\"document\" must be a string");
      r.document = it->get<std::string>();
    }
    out.push_back(std::move(r));
  });
  return out;
}

void write_annotations(const std::vector<AnnotationRecord>& records,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  for (const auto& r : records) {
    Json j;
    j["worker_id"] = r.worker_id;
    j["doc_id"] = r.doc_id;
    j["given_topic"] = r.given_topic;
    j["raw_stance"] = r.raw_stance;
    j["corrected_topic"] = r.corrected_topic ? Json(*r.corrected_topic) : Json(nullptr);
    j["listed_topics"] = r.listed_topics;
    if (r.document) j["document"] = *r.document;
    out << j.dump() << '\n';
  }
}

}  // namespace stance
