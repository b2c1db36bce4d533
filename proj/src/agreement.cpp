// Inter-annotator agreement over nominal stance labels.

#include <array>

#include "stance/corpus.hpp"
#include "stance/error.hpp"

namespace stance {

namespace {

std::vector<std::vector<StanceLabel>> ratings_per_item(const RatingMatrix& labels) {
  std::size_t items = 0;
  for (const auto& row : labels) items = std::max(items, row.size());
  std::vector<std::vector<StanceLabel>> out(items);
  for (const auto& row : labels)
    for (std::size_t u = 0; u < row.size(); ++u)
      if (row[u]) out[u].push_back(*row[u]);
  return out;
}

}  // namespace

double krippendorff_alpha(const RatingMatrix& labels) {
  // Coincidence matrix: each ordered pair of values within an item with m
  // ratings contributes 1/(m-1).
  std::array<std::array<double, kNumLabels>, kNumLabels> o{};
  std::size_t pairable = 0;
  for (const auto& values : ratings_per_item(labels)) {
    const std::size_t m = values.size();
    if (m < 2) continue;
    ++pairable;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) o[label_index(values[i])][label_index(values[j])] += 1.0 / double(m - 1);
  }
  if (pairable < 2)
    throw Error(ErrorCode::InsufficientData, "need at least 2 items with 2 or more ratings");

  std::array<double, kNumLabels> n_c{};
  double n = 0.0;
  double observed = 0.0;
  for (int c = 0; c < kNumLabels; ++c) {
    for (int k = 0; k < kNumLabels; ++k) {
      n_c[c] += o[c][k];
      if (c != k) observed += o[c][k];
    }
    n += n_c[c];
  }
  if (observed == 0.0) return 1.0;
  double expected = 0.0;
  for (int c = 0; c < kNumLabels; ++c)
    for (int k = 0; k < kNumLabels; ++k)
      if (c != k) expected += n_c[c] * n_c[k];
  return 1.0 - (n - 1.0) * observed / expected;
}

double percentage_agreement(const RatingMatrix& labels) {
  double sum = 0.0;
  std::size_t items = 0;
  for (const auto& values : ratings_per_item(labels)) {
    const std::size_t m = values.size();
    if (m < 2) continue;
    std::size_t agree = 0, pairs = 0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j, ++pairs) agree += values[i] == values[j];
    sum += double(agree) / double(pairs);
    ++items;
  }
  if (items == 0) throw Error(ErrorCode::InsufficientData, "no item has 2 or more ratings");
  return sum / double(items);
}

}  // namespace stance
