#include <cmath>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "stance/model/hpsearch.hpp"
#include "stance/rng.hpp"

using namespace stance;
using namespace stance::model;

namespace {

/// Mean of max over every ordered n-sample with replacement.
double enumerate_max(const std::vector<double>& scores, std::size_t n) {
  const std::size_t t = scores.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= t;
  double sum = 0.0;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double best = -1e300;
    for (std::size_t i = 0; i < n; ++i, c /= t) best = std::max(best, scores[c % t]);
    sum += best;
  }
  return sum / double(total);
}

}  // namespace

TEST_SUITE("hpsearch") {

TEST_CASE("parse_space forms") {
  auto s = parse_space("lr=0.0001:0.01,hidden=32:128:int,batch=32|64|128");
  REQUIRE(s.size() == 3);
  CHECK(s["lr"].lo == 0.0001);
  CHECK(s["lr"].hi == 0.01);
  CHECK_FALSE(s["lr"].integer);
  CHECK(s["hidden"].integer);
  CHECK(s["batch"].choices == std::vector<double>{32, 64, 128});
  CHECK_CODE(parse_space(""), ErrorCode::EmptySpace);
  CHECK_CODE(parse_space("lr"), ErrorCode::InvalidArgument);
  CHECK_CODE(parse_space("lr=1"), ErrorCode::InvalidArgument);
  CHECK_CODE(parse_space("lr=2:1"), ErrorCode::InvalidArgument);
  CHECK_CODE(parse_space("lr=a:1"), ErrorCode::InvalidArgument);
  CHECK_CODE(parse_space("lr=0:1:log"), ErrorCode::InvalidArgument);
}

TEST_CASE("samples stay inside their dimensions") {
  auto space = parse_space("lr=0.001:0.01,hidden=3:5:int,batch=8|16");
  std::uint64_t state = 42;
  std::set<double> hidden_seen;
  for (int i = 0; i < 500; ++i) {
    auto cfg = sample_config(space, state);
    CHECK(cfg["lr"] >= 0.001);
    CHECK(cfg["lr"] <= 0.01);
    CHECK((cfg["batch"] == 8 || cfg["batch"] == 16));
    CHECK(cfg["hidden"] == std::round(cfg["hidden"]));
    hidden_seen.insert(cfg["hidden"]);
  }
  CHECK(hidden_seen == std::set<double>{3, 4, 5});
}

TEST_CASE("the search replays the sampler") {
  auto space = parse_space("a=0:1,b=1|2|3");
  std::vector<HpConfig> seen;
  auto res = hp_search(space, 6, 9, [&](const HpConfig& c) {
    seen.push_back(c);
    return c.at("a");
  });
  std::uint64_t state = 9;
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(sample_config(space, state) == seen[i]);
    CHECK(res.trials[i].config == seen[i]);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < 6; ++i)
    if (seen[i].at("a") > seen[best].at("a")) best = i;
  CHECK(res.best_index == best);
  CHECK(res.best == seen[best]);
}

TEST_CASE("single trial and constant objective") {
  auto space = parse_space("a=0:1");
  auto one = hp_search(space, 1, 3, [](const HpConfig&) { return 0.4; });
  CHECK(one.trials.size() == 1);
  CHECK(one.best_index == 0);
  auto flat = hp_search(space, 10, 3, [](const HpConfig&) { return 0.4; });
  CHECK(flat.best_index == 0);
  CHECK(expected_validation_performance({0.4, 0.4, 0.4}) == std::vector<double>{0.4, 0.4, 0.4});
}

TEST_CASE("search errors") {
  auto f = [](const HpConfig&) { return 0.0; };
  CHECK_CODE(hp_search({}, 3, 0, f), ErrorCode::EmptySpace);
  CHECK_CODE(hp_search(parse_space("a=0:1"), 0, 0, f), ErrorCode::InvalidArgument);
  SearchSpace bad{{"a", Dimension{2.0, 1.0, false, {}}}};
  CHECK_CODE(hp_search(bad, 1, 0, f), ErrorCode::EmptySpace);
}

TEST_CASE("expected validation performance examples") {
  auto two = expected_validation_performance({0.8, 0.2});
  CHECK(two[0] == 0.5);
  CHECK(two[1] == 0.65);
  CHECK(expected_validation_performance({0.7}) == std::vector<double>{0.7});
  CHECK_CODE(expected_validation_performance({}), ErrorCode::EmptyScores);
}

TEST_CASE("expected validation performance matches enumeration") {
  rng::Rng rng(12);
  for (int run = 0; run < 20; ++run) {
    std::vector<double> scores(1 + rng.index(5));
    for (auto& s : scores) s = rng.index(4) == 0 ? 0.5 : rng.uniform();
    auto curve = expected_validation_performance(scores);
    REQUIRE(curve.size() == scores.size());
    for (std::size_t n = 1; n <= scores.size(); ++n) CHECK(curve[n - 1] == doctest::Approx(enumerate_max(scores, n)).epsilon(1e-12));
    for (std::size_t n = 1; n < curve.size(); ++n) CHECK(curve[n] >= curve[n - 1]);
    CHECK(curve.front() == doctest::Approx(std::accumulate(scores.begin(), scores.end(), 0.0) / double(scores.size())));
    CHECK(curve.back() <= *std::max_element(scores.begin(), scores.end()));
  }
}

}
