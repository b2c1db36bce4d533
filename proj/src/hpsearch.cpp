#include "stance/model/hpsearch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stance/error.hpp"
#include "stance/rng.hpp"

namespace stance::model {

HpConfig sample_config(const SearchSpace& space, std::uint64_t& state) {
  rng::Rng rng(state);
  HpConfig cfg;
  for (const auto& [name, dim] : space) {
    if (!dim.choices.empty()) {
      cfg[name] = dim.choices[rng.index(dim.choices.size())];
    } else if (dim.integer) {
      cfg[name] = double(rng.range(static_cast<long long>(std::ceil(dim.lo)),
                                   static_cast<long long>(std::floor(dim.hi))));
    } else {
      cfg[name] = rng.uniform(dim.lo, dim.hi);
    }
  }
  state = rng.next();
  return cfg;
}

SearchResult hp_search(const SearchSpace& space, std::size_t trials, std::uint64_t seed,
                       const std::function<double(const HpConfig&)>& objective) {
  if (space.empty()) throw Error(ErrorCode::EmptySpace, "search space has no dimensions");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  for (const auto& [name, dim] : space)
    if (dim.choices.empty() && !(dim.lo <= dim.hi))
      throw Error(ErrorCode::EmptySpace, "dimension '" + name + "' has an empty range");

  SearchResult result;
  std::uint64_t state = seed;
  for (std::size_t t = 0; t < trials; ++t) {
    Trial trial;
    trial.config = sample_config(space, state);
    trial.score = objective(trial.config);
    if (t == 0 || trial.score > result.trials[result.best_index].score) result.best_index = t;
    result.trials.push_back(std::move(trial));
  }
  result.best = result.trials[result.best_index].config;
  return result;
}

SearchSpace parse_space(const std::string& text) {
  SearchSpace space;
  std::stringstream items(text);
  std::string item;
  auto bad = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidArgument, "search space entry '" + item + "': " + why);
  };
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) bad("expected name=spec");
    std::string name = item.substr(0, eq), spec = item.substr(eq + 1);
    Dimension dim;
    try {
      if (spec.find('|') != std::string::npos) {
        std::stringstream parts(spec);
        std::string v;
        while (std::getline(parts, v, '|')) dim.choices.push_back(std::stod(v));
      } else {
        std::stringstream parts(spec);
        std::string lo, hi, kind;
        if (!std::getline(parts, lo, ':') || !std::getline(parts, hi, ':')) bad("expected lo:hi");
        std::getline(parts, kind, ':');
        dim.lo = std::stod(lo);
        dim.hi = std::stod(hi);
        if (kind == "int") dim.integer = true;
        else if (!kind.empty()) bad("unknown range kind '" + kind + "'");
        if (dim.lo > dim.hi) bad("lo exceeds hi");
      }
    } catch (const std::invalid_argument&) {
      bad("not a number");
    } catch (const std::out_of_range&) {
      bad("number out of range");
    }
    space[name] = dim;
  }
  if (space.empty()) throw Error(ErrorCode::EmptySpace, "search space is empty");
  return space;
}

std::vector<double> expected_validation_performance(std::vector<double> scores) {
  if (scores.empty()) throw Error(ErrorCode::EmptyScores, "no trial scores");
  std::sort(scores.begin(), scores.end());
  // Extended precision keeps the result correctly rounded for small T.
  const long double t = static_cast<long double>(scores.size());
  std::vector<double> curve;
  curve.reserve(scores.size());
  for (std::size_t n = 1; n <= scores.size(); ++n) {
    long double e = 0.0L, prev = 0.0L;
    for (std::size_t i = 1; i <= scores.size(); ++i) {
      long double cur = std::pow(static_cast<long double>(i) / t, static_cast<long double>(n));
      e += static_cast<long double>(scores[i - 1]) * (cur - prev);
      prev = cur;
    }
    // The exact curve is nondecreasing and bounded by the scores; remove
    // rounding excursions.
    double v = std::clamp(static_cast<double>(e), scores.front(), scores.back());
    if (!curve.empty()) v = std::max(v, curve.back());
    curve.push_back(v);
  }
  return curve;
}

}  // namespace stance::model
