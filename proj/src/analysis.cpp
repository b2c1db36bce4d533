#include "stance/eval/analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "stance/error.hpp"
#include "stance/rng.hpp"

namespace stance::eval {

LexSimResult lexsim_topics(const std::vector<std::vector<std::string>>& test_topics,
                           const std::vector<std::vector<std::string>>& train_topics,
                           const embed::WordVectors& word_vectors, double theta) {
  std::vector<Eigen::VectorXd> train_vecs;
  for (const auto& t : train_topics) {
    try {
      train_vecs.push_back(embed::static_topic_vector(t, word_vectors));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoVocabOverlap) throw;
    }
  }
  LexSimResult out;
  out.flagged.assign(test_topics.size(), false);
  out.max_sim.assign(test_topics.size(), std::nullopt);
  for (std::size_t i = 0; i < test_topics.size(); ++i) {
    Eigen::VectorXd v;
    try {
      v = embed::static_topic_vector(test_topics[i], word_vectors);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoVocabOverlap) throw;
      ++out.uncovered;
      continue;
    }
    if (v.norm() == 0.0) continue;
    std::optional<double> best;
    for (const auto& tv : train_vecs) {
      if (tv.norm() == 0.0) continue;
      double c = embed::cosine_sim(v, tv);
      if (!best || c > *best) best = c;
    }
    out.max_sim[i] = best;
    if (best && *best >= theta) {
      out.flagged[i] = true;
      ++out.flagged_count;
    }
  }
  return out;
}

MajorityTable sentiment_by_label(const std::vector<StanceExample>& examples,
                                 const SentimentLexicon& lex) {
  MajorityTable t;
  for (const auto& ex : examples) {
    Majority m = sentiment_majority(tokenize_text(ex.document), lex);
    ++t.counts[label_index(ex.label)][static_cast<int>(m)];
  }
  return t;
}

const char* direction_name(SwapDirection d) {
  return d == SwapDirection::PosToNeg ? "+to-" : "-to+";
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::vector<SwapRow> swap_eval(const std::vector<NamedPredictor>& predictors,
                               const std::vector<StanceExample>& examples,
                               const SentimentLexicon& lex, std::uint64_t rng_seed) {
  struct Cell {
    StanceLabel label;
    SwapDirection dir;
    std::vector<StanceExample> before, after;
    std::size_t skipped = 0;
  };
  std::vector<Cell> cells;
  for (StanceLabel label : {StanceLabel::Pro, StanceLabel::Con})
    for (SwapDirection dir : {SwapDirection::PosToNeg, SwapDirection::NegToPos})
      cells.push_back(Cell{label, dir, {}, {}, 0});

  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.label == StanceLabel::Neutral) continue;
    auto tokens = tokenize_text(ex.document);
    Majority m = sentiment_majority(tokens, lex);
    if (m == Majority::Tie) continue;
    SwapDirection dir = m == Majority::MPlus ? SwapDirection::PosToNeg : SwapDirection::NegToPos;
    Majority target = m == Majority::MPlus ? Majority::MMinus : Majority::MPlus;
    auto& cell = *std::find_if(cells.begin(), cells.end(), [&](const Cell& c) {
      return c.label == ex.label && c.dir == dir;
    });
    try {
      auto swapped = sentiment_swap(tokens, lex, target, rng::derive_seed(rng_seed, ex.example_id));
      StanceExample perturbed = ex;
      perturbed.document = join_tokens(swapped.tokens);
      cell.before.push_back(ex);
      cell.after.push_back(std::move(perturbed));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CannotFlip) throw;
      ++cell.skipped;
    }
  }

  std::vector<SwapRow> rows;
  for (const auto& p : predictors) {
    for (const auto& cell : cells) {
      SwapRow row;
      row.model = p.name;
      row.label = cell.label;
      row.direction = cell.dir;
      row.n = cell.before.size();
      row.skipped = cell.skipped;
      if (row.n > 0) {
        std::vector<StanceLabel> gold, before, after;
        for (std::size_t i = 0; i < cell.before.size(); ++i) {
          gold.push_back(cell.before[i].label);
          before.push_back(p.predict(cell.before[i]));
          after.push_back(p.predict(cell.after[i]));
        }
        row.f1_before = macro_f1(gold, before).macro_f1;
        row.f1_after = macro_f1(gold, after).macro_f1;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<CurvePoint> cluster_comparison(const std::vector<double>& statistic,
                                           const std::vector<double>& scores_a,
                                           const std::vector<double>& scores_b,
                                           const std::vector<double>& thresholds) {
  if (statistic.empty()) throw Error(ErrorCode::NoClusters, "no clusters to compare");
  if (scores_a.size() != statistic.size() || scores_b.size() != statistic.size())
    throw Error(ErrorCode::LengthMismatch, "every cluster needs a score from both models");
  std::vector<CurvePoint> curve;
  for (double v : thresholds) {
    CurvePoint pt;
    pt.threshold = v;
    double a = 0.0, b = 0.0;
    for (std::size_t c = 0; c < statistic.size(); ++c) {
      if (statistic[c] < v) continue;
      ++pt.n_clusters;
      if (scores_a[c] > scores_b[c]) a += 1.0;
      else if (scores_b[c] > scores_a[c]) b += 1.0;
      else {
        a += 0.5;
        b += 0.5;
      }
    }
    if (pt.n_clusters > 0) {
      pt.pct_a = 100.0 * a / double(pt.n_clusters);
      pt.pct_b = 100.0 * b / double(pt.n_clusters);
    }
    curve.push_back(pt);
  }
  return curve;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "threshold,pct_model_a,pct_model_b,n_clusters\n" << std::setprecision(10);
  for (const auto& p : curve) out << p.threshold << ',' << p.pct_a << ',' << p.pct_b << ',' << p.n_clusters << '\n';
  return out.str();
}

}  // namespace stance::eval
