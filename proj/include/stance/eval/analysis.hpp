#pragma once

// Error analyses: lexically similar zero-shot topics, sentiment-majority
// breakdowns, sentiment-swap perturbation and cluster-level model comparison.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/embed.hpp"
#include "stance/eval/scoring.hpp"
#include "stance/eval/sentiment.hpp"

namespace stance::eval {

// --- LexSimTopics ---------------------------------------------------------------

struct LexSimResult {
  std::vector<bool> flagged;                    // per test topic
  std::vector<std::optional<double>> max_sim;   // nullopt without vocabulary coverage
  std::size_t uncovered = 0;
  std::size_t flagged_count = 0;
};

/// A test topic is flagged when its static topic vector has cosine >= theta
/// with some training topic's. Topics without any in-vocabulary token are
/// never flagged and are counted in `uncovered`.
LexSimResult lexsim_topics(const std::vector<std::vector<std::string>>& test_topics,
                           const std::vector<std::vector<std::string>>& train_topics,
                           const embed::WordVectors& word_vectors, double theta = 0.9);

// --- sentiment majority by label --------------------------------------------------

struct MajorityTable {
  // [label][majority] example counts
  std::array<std::array<std::size_t, 3>, kNumLabels> counts{};
};

MajorityTable sentiment_by_label(const std::vector<StanceExample>& examples,
                                 const SentimentLexicon& lex);

// --- sentiment swap ------------------------------------------------------------------

using Predictor = std::function<StanceLabel(const StanceExample&)>;

struct NamedPredictor {
  std::string name;
  Predictor predict;
};

enum class SwapDirection { PosToNeg, NegToPos };
const char* direction_name(SwapDirection d);

struct SwapRow {
  std::string model;
  StanceLabel label = StanceLabel::Pro;
  SwapDirection direction = SwapDirection::PosToNeg;
  std::size_t n = 0;          // perturbed examples
  std::size_t skipped = 0;    // CannotFlip
  double f1_before = 0.0;     // macro-F1 on originals
  double f1_after = 0.0;      // macro-F1 on perturbed copies
  double delta() const { return f1_after - f1_before; }
};

/// Document text rebuilt from tokens with single spaces.
std::string join_tokens(const std::vector<std::string>& tokens);

/// For pro and con examples whose document is majority positive (resp.
/// negative), swaps the majority and scores every predictor before and after.
/// Rows with no eligible example have n = 0.
std::vector<SwapRow> swap_eval(const std::vector<NamedPredictor>& predictors,
                               const std::vector<StanceExample>& examples,
                               const SentimentLexicon& lex, std::uint64_t rng_seed);

// --- cluster comparison ----------------------------------------------------------------

struct CurvePoint {
  double threshold = 0.0;
  double pct_a = 0.0;
  double pct_b = 0.0;
  std::size_t n_clusters = 0;
};

/// For every threshold v, the share of clusters with statistic >= v in which
/// each model has the strictly higher score; ties give half credit to each.
std::vector<CurvePoint> cluster_comparison(const std::vector<double>& statistic,
                                           const std::vector<double>& scores_a,
                                           const std::vector<double>& scores_b,
                                           const std::vector<double>& thresholds);

std::string curve_csv(const std::vector<CurvePoint>& curve);

}  // namespace stance::eval
