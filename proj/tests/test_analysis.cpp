#include "doctest.h"
#include "riskweave/analysis.hpp"
#include "riskweave/errors.hpp"
#include "support.hpp"

using namespace riskweave;

TEST_CASE("midranks average tied positions") {
  CHECK(midrank({10, 20, 20, 30}) == std::vector<double>{1, 2.5, 2.5, 4});
  CHECK(midrank({3, 3, 3}) == std::vector<double>{2, 2, 2});
}

TEST_CASE("spearman agrees with the closed form on tie-free data") {
  const std::vector<double> a{1, 4, 2, 8, 5, 7}, b{2, 3, 1, 9, 4, 6};
  CHECK(spearman(a, b) == doctest::Approx(rwtest::spearman_no_ties(a, b)));
  CHECK(spearman(a, a) == doctest::Approx(1.0));
  const std::vector<double> rev{6, 5, 4, 3, 2, 1}, inc{1, 2, 3, 4, 5, 6};
  CHECK(spearman(inc, rev) == doctest::Approx(-1.0));
}

TEST_CASE("cronbach alpha by hand") {
  // items (1, 3) and (2, 5): variances 2 and 4.5; totals (3, 8): variance 12.5.
  CHECK(cronbach_alpha({{1, 2}, {3, 5}}) == doctest::Approx(2.0 * (1.0 - 6.5 / 12.5)));
  // Perfectly parallel items give alpha = 1.
  CHECK(cronbach_alpha({{1, 1, 1}, {2, 2, 2}, {4, 4, 4}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cronbach_alpha({{1, 2}}), ValidationError);
  CHECK_THROWS_AS(cronbach_alpha({{1}, {2}}), ValidationError);
  CHECK_THROWS_AS(cronbach_alpha({{1, 2}, {3}}), ValidationError);
  CHECK_THROWS_AS(cronbach_alpha({{1, 1}, {1, 1}}), ValidationError);
}

TEST_CASE("comparison report on a two-item model") {
  std::vector<RiskRecord> r = score({{"m", "p", 9, 2, 2}, {"m", "q", 2, 9, 9}}, {2.0, 0.5, 0.5});
  rank(r, RankKey::classic);
  rank(r, RankKey::weighted);
  const ComparisonReport c = compare(r);
  REQUIRE(c.rows.size() == 2);
  CHECK(c.rows[0].rank_classic == 2);
  CHECK(c.rows[0].rank_weighted == 1);
  CHECK(c.rows[0].rank_shift == 1);
  CHECK(std::abs(c.spearman) == doctest::Approx(1.0));
  CHECK(c.weighted_above_classic == 1);
  CHECK(c.weighted_below_classic == 1);
  CHECK(largest_shifts(c, 1).size() == 1);

  std::vector<RiskRecord> other = r;
  other.pop_back();
  CHECK_THROWS_AS(compare(r, other), ValidationError);
}
