#pragma once

// Uniform random hyperparameter search and expected validation performance.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace stance::model {

/// Either a continuous range [lo, hi] (rounded when `integer`) or a finite
/// choice set.
struct Dimension {
  double lo = 0.0;
  double hi = 0.0;
  bool integer = false;
  std::vector<double> choices;
};

using SearchSpace = std::map<std::string, Dimension>;
using HpConfig = std::map<std::string, double>;

struct Trial {
  HpConfig config;
  double score = 0.0;
};

struct SearchResult {
  std::size_t best_index = 0;
  HpConfig best;
  std::vector<Trial> trials;
};

/// Draws one configuration; dimensions are sampled in name order.
HpConfig sample_config(const SearchSpace& space, std::uint64_t& state);

/// Evaluates `trials` independently sampled configurations and returns the
/// first one with the highest score.
SearchResult hp_search(const SearchSpace& space, std::size_t trials, std::uint64_t seed,
                       const std::function<double(const HpConfig&)>& objective);

/// Parses "name=lo:hi" (continuous), "name=lo:hi:int" (integer range) and
/// "name=a|b|c" (choices), comma separated.
SearchSpace parse_space(const std::string& text);

/// E[max of n trial scores] for n = 1..T under sampling with replacement from
/// the observed scores: sum_i v_(i) ((i/T)^n - ((i-1)/T)^n).
std::vector<double> expected_validation_performance(std::vector<double> scores);

}  // namespace stance::model
