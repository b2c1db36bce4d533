#pragma once

// Macro-F1 scoring with zero-shot / few-shot subset breakdowns.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "stance/corpus.hpp"

namespace stance::eval {

struct EvalReport {
  std::array<double, kNumLabels> precision{};
  std::array<double, kNumLabels> recall{};
  std::array<double, kNumLabels> f1{};
  double macro_f1 = 0.0;
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};  // [gold][pred]
  std::size_t count = 0;
};

/// Per-label F1 with 0/0 taken as 0; macro is the mean over all three labels,
/// including labels absent from gold.
EvalReport macro_f1(const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred);

struct SubsetReports {
  EvalReport all;
  std::optional<EvalReport> zero_shot;  // absent when the subset is empty
  std::optional<EvalReport> few_shot;
};

SubsetReports subset_eval(const std::vector<StanceExample>& examples,
                          const std::vector<std::size_t>& zero_shot,
                          const std::vector<std::size_t>& few_shot,
                          const std::vector<StanceLabel>& preds);

/// Predictions keyed by example_id; MissingPrediction if one is absent.
std::vector<StanceLabel> align_predictions(
    const std::vector<StanceExample>& examples,
    const std::vector<std::pair<std::string, StanceLabel>>& keyed);

std::vector<StanceLabel> gold_labels(const std::vector<StanceExample>& examples);

/// One-sided paired bootstrap: fraction of resamples in which
/// macro-F1(a) - macro-F1(b) <= 0.
double paired_bootstrap(const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred_a,
                        const std::vector<StanceLabel>& pred_b, std::size_t resamples = 10000,
                        std::uint64_t seed = 0);

}  // namespace stance::eval
