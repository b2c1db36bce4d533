#include "stance/eval/scoring.hpp"

#include <unordered_map>

#include "stance/error.hpp"
#include "stance/rng.hpp"

namespace stance::eval {

namespace {

void finish(EvalReport& r) {
  // Extended precision so small rational results (e.g. 7/18) round correctly.
  long double sum = 0.0L;
  for (int l = 0; l < kNumLabels; ++l) {
    std::size_t tp = r.confusion[l][l], pred_l = 0, gold_l = 0;
    for (int o = 0; o < kNumLabels; ++o) {
      pred_l += r.confusion[o][l];
      gold_l += r.confusion[l][o];
    }
    r.precision[l] = pred_l ? double(tp) / double(pred_l) : 0.0;
    r.recall[l] = gold_l ? double(tp) / double(gold_l) : 0.0;
    // 2PR/(P+R) written over counts; 0/0 is 0.
    const long double denom = 2.0L * tp + (pred_l - tp) + (gold_l - tp);
    const long double f1 = tp ? 2.0L * tp / denom : 0.0L;
    r.f1[l] = static_cast<double>(f1);
    sum += f1;
  }
  r.macro_f1 = static_cast<double>(sum / kNumLabels);
}

}  // namespace

EvalReport macro_f1(const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred) {
  if (gold.size() != pred.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(gold.size()) + " gold vs " +
                                               std::to_string(pred.size()) + " predicted");
  EvalReport r;
  r.count = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) ++r.confusion[label_index(gold[i])][label_index(pred[i])];
  finish(r);
  return r;
}

std::vector<StanceLabel> gold_labels(const std::vector<StanceExample>& examples) {
  std::vector<StanceLabel> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(ex.label);
  return out;
}

SubsetReports subset_eval(const std::vector<StanceExample>& examples,
                          const std::vector<std::size_t>& zero_shot,
                          const std::vector<std::size_t>& few_shot,
                          const std::vector<StanceLabel>& preds) {
  if (preds.size() < examples.size())
    throw Error(ErrorCode::MissingPrediction, std::to_string(examples.size() - preds.size()) +
                                                  " examples lack a prediction");
  if (preds.size() > examples.size())
    throw Error(ErrorCode::LengthMismatch, "more predictions than examples");
  SubsetReports out;
  out.all = macro_f1(gold_labels(examples), preds);
  auto restricted = [&](const std::vector<std::size_t>& idx) -> std::optional<EvalReport> {
    if (idx.empty()) return std::nullopt;
    std::vector<StanceLabel> g, p;
    for (std::size_t i : idx) {
      if (i >= examples.size()) throw Error(ErrorCode::InvalidArgument, "subset index out of range");
      g.push_back(examples[i].label);
      p.push_back(preds[i]);
    }
    return macro_f1(g, p);
  };
  out.zero_shot = restricted(zero_shot);
  out.few_shot = restricted(few_shot);
  return out;
}

std::vector<StanceLabel> align_predictions(
    const std::vector<StanceExample>& examples,
    const std::vector<std::pair<std::string, StanceLabel>>& keyed) {
  std::unordered_map<std::string, StanceLabel> by_id(keyed.begin(), keyed.end());
  std::vector<StanceLabel> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    auto it = by_id.find(ex.example_id);
    if (it == by_id.end())
      throw Error(ErrorCode::MissingPrediction, "no prediction for " + ex.example_id);
    out.push_back(it->second);
  }
  return out;
}

double paired_bootstrap(const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred_a,
                        const std::vector<StanceLabel>& pred_b, std::size_t resamples,
                        std::uint64_t seed) {
  if (gold.size() != pred_a.size() || gold.size() != pred_b.size())
    throw Error(ErrorCode::LengthMismatch, "gold and prediction lists differ in length");
  if (gold.empty()) throw Error(ErrorCode::InvalidArgument, "bootstrap over zero examples");
  if (resamples < 1000) throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least 1000 resamples");
  rng::Rng rng(seed);
  const std::size_t n = gold.size();
  std::size_t not_better = 0;
  std::vector<StanceLabel> g(n), a(n), b(n);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = rng.index(n);
      g[i] = gold[j];
      a[i] = pred_a[j];
      b[i] = pred_b[j];
    }
    if (macro_f1(g, a).macro_f1 - macro_f1(g, b).macro_f1 <= 0.0) ++not_better;
  }
  return double(not_better) / double(resamples);
}

}  // namespace stance::eval
