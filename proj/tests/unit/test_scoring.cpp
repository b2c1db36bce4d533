#include "helpers.hpp"
#include "oracles.hpp"
#include "stance/eval/scoring.hpp"
#include "stance/rng.hpp"

using namespace stance;
using namespace stance::eval;
using L = StanceLabel;
using testing::example;

TEST_SUITE("scoring") {

TEST_CASE("four-example fixture") {
  auto r = macro_f1({L::Pro, L::Pro, L::Con, L::Neutral}, {L::Pro, L::Con, L::Con, L::Con});
  CHECK(r.macro_f1 == 7.0 / 18.0);
  CHECK(r.f1[label_index(L::Pro)] == doctest::Approx(2.0 / 3.0));
  CHECK(r.f1[label_index(L::Con)] == doctest::Approx(0.5));
  CHECK(r.f1[label_index(L::Neutral)] == 0.0);
  CHECK(r.precision[label_index(L::Con)] == doctest::Approx(1.0 / 3.0));
  CHECK(r.recall[label_index(L::Pro)] == doctest::Approx(0.5));
  CHECK(r.confusion[label_index(L::Pro)][label_index(L::Con)] == 1);
  CHECK(r.count == 4);
}

TEST_CASE("absent labels count as zero in the macro average") {
  CHECK(macro_f1({L::Pro, L::Pro}, {L::Pro, L::Pro}).macro_f1 == doctest::Approx(1.0 / 3.0));
  auto all = macro_f1({L::Pro, L::Con, L::Neutral}, {L::Pro, L::Con, L::Neutral});
  CHECK(all.macro_f1 == 1.0);
  CHECK_CODE(macro_f1({L::Pro}, {}), ErrorCode::LengthMismatch);
}

TEST_CASE("agrees with the filtering oracle on random data") {
  rng::Rng rng(17);
  for (int run = 0; run < 100; ++run) {
    std::size_t n = 1 + rng.index(40);
    std::vector<L> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = label_from_int(static_cast<long long>(rng.index(3)));
      pred[i] = label_from_int(static_cast<long long>(rng.index(3)));
    }
    CHECK(macro_f1(gold, pred).macro_f1 == doctest::Approx(testing::oracle_macro_f1(gold, pred)).epsilon(1e-12));
  }
}

TEST_CASE("subset reports") {
  std::vector<StanceExample> exs{example("1", "a", "energy", L::Pro), example("2", "b", "wages", L::Con),
                                 example("3", "c", "zoning", L::Neutral)};
  auto r = subset_eval(exs, {0, 1}, {}, {L::Pro, L::Pro, L::Neutral});
  CHECK(r.all.count == 3);
  REQUIRE(r.zero_shot);
  CHECK(r.zero_shot->count == 2);
  CHECK(r.zero_shot->macro_f1 == doctest::Approx(macro_f1({L::Pro, L::Con}, {L::Pro, L::Pro}).macro_f1));
  CHECK_FALSE(r.few_shot);
}

TEST_CASE("align predictions by example id") {
  std::vector<StanceExample> exs{example("1", "a", "energy", L::Pro), example("2", "b", "wages", L::Con)};
  CHECK(align_predictions(exs, {{"2", L::Neutral}, {"1", L::Con}, {"9", L::Pro}}) ==
        std::vector<L>{L::Con, L::Neutral});
  CHECK_CODE(align_predictions(exs, {{"1", L::Con}}), ErrorCode::MissingPrediction);
  CHECK(gold_labels(exs) == std::vector<L>{L::Pro, L::Con});
}

TEST_CASE("paired bootstrap examples") {
  std::vector<L> gold{L::Pro, L::Con, L::Neutral, L::Pro, L::Con, L::Neutral};
  std::vector<L> wrong{L::Con, L::Neutral, L::Pro, L::Con, L::Neutral, L::Pro};
  // A perfect system never loses to an always-wrong one.
  CHECK(paired_bootstrap(gold, gold, wrong, 2000, 1) == 0.0);
  CHECK(paired_bootstrap(gold, wrong, gold, 2000, 1) == 1.0);
  // Identical systems tie on every resample.
  CHECK(paired_bootstrap(gold, wrong, wrong, 1000, 1) == 1.0);
  CHECK(paired_bootstrap(gold, gold, wrong, 1000, 5) == paired_bootstrap(gold, gold, wrong, 1000, 5));
  CHECK_CODE(paired_bootstrap(gold, gold, wrong, 999, 1), ErrorCode::InvalidArgument);
  CHECK_CODE(paired_bootstrap(gold, gold, {L::Pro}, 1000, 1), ErrorCode::LengthMismatch);
  CHECK_CODE(paired_bootstrap({}, {}, {}, 1000, 1), ErrorCode::InvalidArgument);
}

TEST_CASE("bootstrap p-value lies between 0 and 1 and favours the better system") {
  rng::Rng rng(4);
  std::vector<L> gold(60), a(60), b(60);
  for (std::size_t i = 0; i < 60; ++i) {
    gold[i] = label_from_int(static_cast<long long>(rng.index(3)));
    a[i] = rng.uniform() < 0.8 ? gold[i] : label_from_int(static_cast<long long>(rng.index(3)));
    b[i] = rng.uniform() < 0.4 ? gold[i] : label_from_int(static_cast<long long>(rng.index(3)));
  }
  double p = paired_bootstrap(gold, a, b, 2000, 9);
  CHECK(p >= 0.0);
  CHECK(p < 0.05);
  CHECK(paired_bootstrap(gold, b, a, 2000, 9) > 0.95);
}

}
