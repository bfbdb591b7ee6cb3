#include <numeric>

#include "doctest.h"
#include "riskweave/errors.hpp"
#include "riskweave/judgments.hpp"
#include "support.hpp"

using namespace riskweave;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("1/7") == Rational(1, 7));
  CHECK(parse_rational("7/1") == Rational(7));
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(format_rational(Rational(1, 7)) == "1/7");
  CHECK(format_rational(Rational(9)) == "9");
  CHECK_THROWS_WITH_AS(parse_rational("0"), doctest::Contains("nonpositive judgment"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_rational("-3"), doctest::Contains("nonpositive judgment"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_rational("x"), doctest::Contains("malformed"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_rational("1/"), doctest::Contains("malformed"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
}

TEST_CASE("saaty scale has exactly seventeen values") {
  int count = 0;
  for (int n = 1; n <= 20; ++n)
    for (int d = 1; d <= 20; ++d)
      if (std::gcd(n, d) == 1 && on_saaty_scale(Rational(n, d))) ++count;
  CHECK(count == 17);
  CHECK_FALSE(on_saaty_scale(Rational(2, 3)));
  CHECK_FALSE(on_saaty_scale(Rational(11)));
}

TEST_CASE("matrix is exactly reciprocal") {
  const ComparisonMatrix m("k", {"p", "q", "r"}, {Rational(3), Rational(1, 5), Rational(7)});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m.at(i, i) == Rational(1));
    for (std::size_t j = 0; j < 3; ++j) CHECK(m.at(i, j) * m.at(j, i) == Rational(1));
  }
  const Eigen::MatrixXd d = m.to_dense();
  CHECK(d(2, 0) == doctest::Approx(5.0));
  CHECK(d(2, 1) == doctest::Approx(1.0 / 7.0));

  const ComparisonMatrix r = m.reordered({"r", "p", "q"});
  CHECK(r.at(0, 1) == Rational(5));
  CHECK(r.at(1, 2) == Rational(3));
  CHECK(r.reordered({"p", "q", "r"}) == m);
}

TEST_CASE("matrix from judgments") {
  const DecisionNetwork net = build_network(rwtest::toy_definition(false));
  const auto ctx = comparison_contexts(net);
  const ComparisonContext& goal = ctx[0];
  REQUIRE(goal.id == "goal");

  SUBCASE("either orientation") {
    const std::vector<Judgment> js{{"goal", "c2", "c1", Rational(4)}};
    CHECK(matrix_from_judgments(goal, js).at(0, 1) == Rational(1, 4));
  }
  SUBCASE("missing pair") {
    CHECK_THROWS_WITH_AS(matrix_from_judgments(goal, std::vector<Judgment>{}),
                         doctest::Contains("missing judgment for pair c1 / c2"), ValidationError);
  }
  SUBCASE("duplicate pair") {
    const std::vector<Judgment> js{{"goal", "c1", "c2", Rational(2)}, {"goal", "c2", "c1", Rational(2)}};
    CHECK_THROWS_WITH_AS(matrix_from_judgments(goal, js), doctest::Contains("duplicate"), ValidationError);
  }
  SUBCASE("off scale") {
    const std::vector<Judgment> js{{"goal", "c1", "c2", Rational(10)}};
    CHECK_THROWS_WITH_AS(matrix_from_judgments(goal, js), doctest::Contains("off the 1/9..9 scale"),
                         ValidationError);
  }
  SUBCASE("self comparison") {
    const std::vector<Judgment> js{{"goal", "c1", "c1", Rational(1)}};
    CHECK_THROWS_AS(matrix_from_judgments(goal, js), ValidationError);
  }
}

TEST_CASE("completeness and upsert") {
  const DecisionNetwork net = build_network(rwtest::toy_definition(false));
  const auto ctx = comparison_contexts(net);
  const ComparisonContext& alts = ctx.back();
  JudgmentSet set;
  CHECK(completeness(alts, set.all()).progress == 0.0);
  set.upsert(alts, {alts.id, "y", "x", Rational(3)});
  auto rep = completeness(alts, set.all());
  CHECK(rep.complete());
  CHECK(rep.answered == 1);
  // Revision replaces, never duplicates.
  set.upsert(alts, {alts.id, "x", "y", Rational(5)});
  CHECK(set.size() == 1);
  const auto stored = set.for_context(alts.id);
  REQUIRE(stored.size() == 1);
  CHECK(stored[0].row == "x");
  CHECK(stored[0].value == Rational(5));

  CHECK_THROWS_AS(set.upsert(alts, {alts.id, "x", "x", Rational(1)}), ValidationError);
  CHECK_THROWS_AS(set.upsert(alts, {alts.id, "x", "q", Rational(1)}), ValidationError);
  CHECK_THROWS_AS(set.upsert(alts, {alts.id, "x", "y", Rational(2, 3)}), ValidationError);
}
