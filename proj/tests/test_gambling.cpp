#include <cmath>
#include <vector>

#include "doctest.h"
#include "kelly/errors.hpp"
#include "kelly/gambling.hpp"
#include "kelly/random.hpp"
#include "kelly/solver.hpp"
#include "oracles.hpp"

using kelly::Distribution;
using kelly::Embedding;
using kelly::FairnessClass;
using kelly::Market;
using kelly::Odds;
using kelly::Portfolio;
using kelly::PortfolioConstraints;

TEST_CASE("odds validate positivity") {
  CHECK_NOTHROW(Odds({2.0, 3.0}));
  CHECK_THROWS_AS(Odds({2.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Odds({2.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Odds({}), std::invalid_argument);
}

TEST_CASE("worked embedding example") {
  Market m(2, 2, {1, 2, 1, 0});
  Embedding e = kelly::embed_ideal(m);
  CHECK(e.odds[0] == 2.0);
  CHECK(e.odds[1] == 2.0);
  CHECK(e.weights[0][0] == doctest::Approx(0.5));
  CHECK(e.weights[0][1] == doctest::Approx(0.5));
  CHECK(e.weights[1][0] == doctest::Approx(1.0));
  CHECK(e.weights[1][1] == doctest::Approx(0.0));
}

TEST_CASE("embedding reproduces every payoff exactly") {
  kelly::Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t m = 2 + rng.index(4);
    std::size_t k = 2 + rng.index(3);
    Market market = oracle::embeddable_market(rng, m, k);
    Embedding e = kelly::embed_ideal(market);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < k; ++i)
        CHECK(market.at(j, i) ==
              doctest::Approx(e.weights[i][j] * e.odds[j]).epsilon(1e-9));
  }
}

TEST_CASE("inconsistent markets refuse to embed") {
  // safe asset plus its double: u + u = 1 and 2u + 2u = 1 cannot both hold
  Market m(2, 2, {1, 2, 1, 2});
  CHECK_THROWS_WITH_AS(kelly::embed_ideal(m),
                       doctest::Contains("no exact embedding"), kelly::DomainError);
  // solvable only with a zero multiplier: also no embedding
  Market z(2, 2, {1, 3, 1, 1});
  CHECK_THROWS_AS(kelly::embed_ideal(z), kelly::DomainError);
}

TEST_CASE("fairness classification and dutch book") {
  kelly::FairnessReport fair = kelly::classify_fairness(Odds({2.0, 2.0}));
  CHECK(fair.kind == FairnessClass::Fair);
  CHECK(fair.inverse_sum == doctest::Approx(1.0));
  CHECK(!kelly::dutch_book(Odds({2.0, 2.0})).has_value());

  kelly::FairnessReport super = kelly::classify_fairness(Odds({3.0, 3.0}));
  CHECK(super.kind == FairnessClass::Superfair);
  auto book = kelly::dutch_book(Odds({3.0, 3.0}));
  REQUIRE(book.has_value());
  CHECK(book->portfolio[0] == doctest::Approx(0.5));
  CHECK(book->guarantee == doctest::Approx(1.5));

  kelly::FairnessReport sub = kelly::classify_fairness(Odds({1.5, 1.5}));
  CHECK(sub.kind == FairnessClass::Subfair);
  CHECK(!kelly::dutch_book(Odds({1.5, 1.5})).has_value());
}

TEST_CASE("dutch book payoff is riskless") {
  kelly::Rng rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = 2 + rng.index(5);
    std::vector<double> o(m);
    double inv = 0.0;
    for (double& x : o) {
      x = rng.uniform(1.5, 8.0);
      inv += 1.0 / x;
    }
    if (inv >= 1.0 - 1e-9) continue;  // not superfair, skip
    auto book = kelly::dutch_book(Odds(o));
    REQUIRE(book.has_value());
    for (std::size_t j = 0; j < m; ++j)
      CHECK(std::abs(book->portfolio[j] * o[j] - book->guarantee) <= 1e-12);
    CHECK(book->guarantee == doctest::Approx(1.0 / inv).epsilon(1e-12));
    CHECK(book->guarantee > 1.0);
  }
}

TEST_CASE("gambling structure detection") {
  // scaled and permuted identity
  Market g(3, 3, {0, 3, 0, 0, 0, 5, 2, 0, 0});
  auto odds = kelly::is_kelly_market(g);
  REQUIRE(odds.has_value());
  CHECK((*odds)[0] == 3.0);
  CHECK((*odds)[1] == 5.0);
  CHECK((*odds)[2] == 2.0);

  // a second positive entry in a row breaks the structure
  CHECK(!kelly::is_kelly_market(Market(2, 2, {2, 1, 0, 2})).has_value());
  // fewer assets than outcomes too
  CHECK(!kelly::is_kelly_market(Market(2, 1, {1, 2})).has_value());
}

TEST_CASE("gambling detection sees through duplicates and dominated assets") {
  // duplicate outcome rows merge first
  Market dup(3, 2, {2, 0, 2, 0, 0, 2});
  CHECK(kelly::is_kelly_market(dup).has_value());
  // a dominated side asset is pruned before the check
  kelly::Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    Market market = oracle::kelly_plus_dominated(rng, 2 + rng.index(3));
    CHECK(kelly::is_kelly_market(market).has_value());
  }
  // but a non-dominated extra asset keeps the market mixed
  Market mixed(2, 3, {2, 0, 1.5, 0, 2, 1.5});
  CHECK(!kelly::is_kelly_market(mixed).has_value());
}

TEST_CASE("reverse projection onto a half-space") {
  Distribution p({0.5, 0.5});
  PortfolioConstraints region(2, {kelly::LinearInequality{{1.0, 0.0}, 0.3}}, {});
  kelly::IProjection proj = kelly::reverse_iprojection(p, region);
  CHECK(proj.q[0] == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(proj.divergence ==
        doctest::Approx(0.5 * std::log(0.5 / 0.3) + 0.5 * std::log(0.5 / 0.7))
            .epsilon(1e-7));
  CHECK(proj.unique);
}

TEST_CASE("reverse projection of a feasible point is itself") {
  Distribution p({0.25, 0.75});
  PortfolioConstraints region(2);
  kelly::IProjection proj = kelly::reverse_iprojection(p, region);
  CHECK(proj.q[0] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(proj.divergence <= 1e-12);
}

TEST_CASE("reverse projection detects flat minimizer sets") {
  // p concentrates on the first coordinate; the cap leaves the remaining
  // mass free to split, so the minimizer is a segment
  Distribution p({1.0, 0.0, 0.0});
  PortfolioConstraints region(3, {kelly::LinearInequality{{1.0, 0.0, 0.0}, 0.4}}, {});
  kelly::IProjection proj = kelly::reverse_iprojection(p, region);
  CHECK(proj.q[0] == doctest::Approx(0.4).epsilon(1e-7));
  CHECK(proj.divergence == doctest::Approx(std::log(2.5)).epsilon(1e-7));
  CHECK(!proj.unique);
}

TEST_CASE("reverse projection rejects regions of infinite divergence") {
  Distribution p({0.5, 0.5});
  PortfolioConstraints region(2, {}, {kelly::LinearEquality{{1.0, 0.0}, 0.0}});
  CHECK_THROWS_AS(kelly::reverse_iprojection(p, region), kelly::DomainError);
}
