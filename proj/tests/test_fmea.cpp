#include <cmath>

#include "doctest.h"
#include "riskweave/errors.hpp"
#include "riskweave/fmea.hpp"
#include "support.hpp"

using namespace riskweave;

TEST_CASE("rating scales have ten ordered levels each") {
  const RatingScales& s = rating_scales();
  for (const auto* scale : {&s.severity, &s.occurrence, &s.detection})
    for (int r = 1; r <= 10; ++r) {
      CHECK((*scale)[static_cast<std::size_t>(r - 1)].rank == r);
      CHECK_FALSE((*scale)[static_cast<std::size_t>(r - 1)].label.empty());
    }
}

TEST_CASE("classic and weighted RPN") {
  const FmeaItem item{"mode", "cause", 8, 8, 3};
  CHECK(classic_rpn(item) == 192.0);
  CHECK(weighted_rpn(item, kNeutralExponents) == doctest::Approx(192.0));
  const ExponentWeights w{1.65, 0.69, 0.66};
  const double expected = std::exp(1.65 * std::log(8.0) + 0.69 * std::log(8.0) + 0.66 * std::log(3.0));
  CHECK(weighted_rpn(item, w) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(weighted_rpn(item, w) == doctest::Approx(267.9974).epsilon(1e-7));
  CHECK_THROWS_AS(validate(FmeaItem{"m", "c", 0, 5, 5}), ValidationError);
  CHECK_THROWS_AS(validate(FmeaItem{"m", "c", 5, 11, 5}), ValidationError);
}

TEST_CASE("exponent correction") {
  const ExponentWeights e = correct_weights(0.547081, 0.233757, 0.219162);
  CHECK(e.severity == doctest::Approx(1.641243));
  CHECK(e.occurrence == doctest::Approx(0.701271));
  CHECK(e.detection == doctest::Approx(0.657486));
  CHECK(e.sum() == doctest::Approx(3.0));
  const ExponentWeights equal = correct_weights(1.0 / 3, 1.0 / 3, 1.0 / 3);
  CHECK(equal.severity == doctest::Approx(1.0));
  CHECK_THROWS_AS(correct_weights(0.5, 0.5, 0.0), ValidationError);
  CHECK_THROWS_AS(correct_weights(0.5, 0.4, 0.4), ValidationError);
}

TEST_CASE("recover_sod finds the unique triple for worked rows") {
  const ExponentWeights w{1.65, 0.69, 0.66};
  const auto t = recover_sod(192, 267.9974, w);
  REQUIRE(t.size() == 1);
  CHECK(t[0] == SodTriple{8, 8, 3});
  CHECK(recover_sod(576, 555.348, w) == std::vector<SodTriple>{{8, 9, 8}});
  CHECK_THROWS_AS(recover_sod(997, 500.0, w), ComputationError);  // prime above 10
}

TEST_CASE("competition ranking") {
  std::vector<RiskRecord> r = score({{"m", "p", 5, 5, 5}, {"m", "q", 2, 5, 5}, {"m", "r", 5, 5, 5}, {"m", "s", 10, 10, 1}},
                                    kNeutralExponents);
  rank(r, RankKey::classic);
  CHECK(r[0].rank_classic == 1);
  CHECK(r[2].rank_classic == 1);
  CHECK(r[3].rank_classic == 3);
  CHECK(r[1].rank_classic == 4);
  rank(r, RankKey::weighted);
  CHECK(r[3].rank_weighted == 3);  // 100 within 1e-9 relative of itself only
}

TEST_CASE("weighted ranking treats near-equal values as ties") {
  std::vector<RiskRecord> r(2);
  r[0].rpn_weighted = 100.0;
  r[1].rpn_weighted = 100.0 * (1 + 1e-12);
  rank(r, RankKey::weighted);
  CHECK(r[0].rank_weighted == 1);
  CHECK(r[1].rank_weighted == 1);
  r[1].rpn_weighted = 100.0 * (1 + 1e-6);
  rank(r, RankKey::weighted);
  CHECK(r[0].rank_weighted == 2);
}
