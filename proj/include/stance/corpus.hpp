#pragma once

// Dataset model for topic-phrase stance examples: annotation aggregation,
// neutral-example synthesis, train/dev/test splitting and file I/O.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stance {

enum class StanceLabel : int { Con = 0, Pro = 1, Neutral = 2 };
inline constexpr std::array<StanceLabel, 3> kAllLabels{StanceLabel::Con, StanceLabel::Pro,
                                                        StanceLabel::Neutral};
inline constexpr int kNumLabels = 3;

inline int label_index(StanceLabel l) { return static_cast<int>(l); }
StanceLabel label_from_int(long long v);
std::string_view label_name(StanceLabel l);

enum class SourceKind { Heur, Corr, List, SynthNeutral };
std::string_view kind_name(SourceKind k);
SourceKind kind_from_string(std::string_view s);

struct StanceExample {
  std::string example_id;
  std::string doc_id;
  std::string document;
  std::string topic_raw;
  std::vector<std::string> topic_tokens;
  StanceLabel label = StanceLabel::Neutral;
  SourceKind kind = SourceKind::Heur;
  bool sarcasm = false;

  bool operator==(const StanceExample&) const = default;
};

struct AnnotationRecord {
  std::string worker_id;
  std::string doc_id;
  std::string given_topic;
  int raw_stance = 3;
  std::optional<std::string> corrected_topic;
  std::vector<std::string> listed_topics;
  // Comment text; only needs to be present on one record per doc_id.
  std::optional<std::string> document;

  bool operator==(const AnnotationRecord&) const = default;
};

struct DatasetSplit {
  std::vector<StanceExample> train;
  std::vector<StanceExample> dev;
  std::vector<StanceExample> test;
  std::vector<std::size_t> zero_shot_dev;
  std::vector<std::size_t> few_shot_dev;
  std::vector<std::size_t> zero_shot_test;
  std::vector<std::size_t> few_shot_test;
};

// --- normalization -------------------------------------------------------

using Lemmatizer = std::function<std::string(std::string_view)>;

bool is_stopword(std::string_view word);

/// Lowercases, splits on anything that is not an ASCII letter or digit
/// (bytes >= 0x80 are kept as word characters), drops stopwords and applies
/// the lemmatizer. May return an empty list.
std::vector<std::string> normalize_tokens(std::string_view text, const Lemmatizer& lemmatizer = {});

/// normalize_tokens that refuses to return an empty topic (EmptyTopic).
std::vector<std::string> normalize_topic(std::string_view raw, const Lemmatizer& lemmatizer = {});

/// Lowercased word tokens without stopword removal.
std::vector<std::string> tokenize_text(std::string_view text);

/// Normalized tokens joined by single spaces.
std::string topic_key(const std::vector<std::string>& tokens);

// --- labels & annotation ---------------------------------------------------

/// 1,2 -> Con; 3 -> Neutral; 4,5 -> Pro. `inverted` flips the orientation.
StanceLabel map_scale(int raw_stance, bool inverted = false);

struct AggregationOptions {
  double min_agreement = 0.5;
  bool inverted_scale = false;
  Lemmatizer lemmatizer;
};

std::vector<StanceExample> aggregate_annotations(const std::vector<AnnotationRecord>& records,
                                                 const AggregationOptions& options = {});

/// Mean pairwise label agreement of each worker with co-annotators of the
/// same (doc_id, given_topic) group. Workers without co-annotators are absent.
std::vector<std::pair<std::string, double>> worker_agreement(
    const std::vector<AnnotationRecord>& records, bool inverted_scale = false);

// --- synthesis & splitting ---------------------------------------------------

std::vector<StanceExample> generate_neutrals(const std::vector<StanceExample>& dataset,
                                             double p = 0.5, std::uint64_t rng_seed = 0);

struct SplitRatios {
  double train = 0.70;
  double dev = 0.15;
  double test = 0.15;
};

/// Partition sizes used for n unique documents.
std::array<std::size_t, 3> partition_sizes(std::size_t n, const SplitRatios& ratios);

DatasetSplit split_dataset(const std::vector<StanceExample>& dataset, const SplitRatios& ratios = {},
                           std::uint64_t rng_seed = 0);

/// Recomputes the zero-shot / few-shot index lists of dev and test from the
/// topics present in train.
void assign_shot_subsets(DatasetSplit& split);

// --- agreement ----------------------------------------------------------------

/// workers x items, missing ratings as nullopt.
using RatingMatrix = std::vector<std::vector<std::optional<StanceLabel>>>;

double krippendorff_alpha(const RatingMatrix& labels);
double percentage_agreement(const RatingMatrix& labels);

// --- I/O ----------------------------------------------------------------------

std::vector<StanceExample> read_dataset(const std::filesystem::path& path);
void write_dataset(const std::vector<StanceExample>& examples, const std::filesystem::path& path);
std::string serialize_example(const StanceExample& example);
StanceExample parse_example(std::string_view line, std::size_t line_no);

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path);
void write_annotations(const std::vector<AnnotationRecord>& records,
                       const std::filesystem::path& path);

}  // namespace stance
