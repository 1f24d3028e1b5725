#include <cmath>
#include <vector>

#include "doctest.h"
#include "kelly/divergence.hpp"
#include "kelly/random.hpp"
#include "kelly/sufficiency.hpp"
#include "oracles.hpp"

using kelly::Distribution;
using kelly::Market;
using kelly::ProportionalityOutcome;
using kelly::ProportionalityVerdict;

TEST_CASE("gambling markets test proportional with unit constant") {
  kelly::Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    std::size_t m = 2 + rng.index(4);
    Market market = oracle::kelly_market(rng, m);
    ProportionalityVerdict v = kelly::proportionality_test(market, 60, 101 + trial);
    CHECK(v.outcome == ProportionalityOutcome::Proportional);
    REQUIRE(v.constant_c.has_value());
    CHECK(std::abs(*v.constant_c - 1.0) <= 1e-8);
    CHECK(!v.counterexample.has_value());
    CHECK(v.samples_tested > 0);
  }
}

TEST_CASE("mixed markets produce a verifiable counterexample") {
  // safe asset next to a gamble: regret saturates while divergence grows
  Market market(2, 2, {1, 3, 1, 0.2});
  ProportionalityVerdict v = kelly::proportionality_test(market, 200, 7);
  CHECK(v.outcome == ProportionalityOutcome::NotProportional);
  REQUIRE(v.counterexample.has_value());
  const auto& ce = *v.counterexample;
  double d = kelly::kl_divergence(ce.p, ce.q);
  double r = kelly::distribution_regret(market, ce.p, ce.q).value();
  CHECK(r == doctest::Approx(ce.regret).epsilon(1e-9));
  CHECK(std::abs(r - ce.predicted) > 1e-7 * (1.0 + d));
}

TEST_CASE("degenerate and regret-free markets are flagged") {
  // one outcome only: divergence is identically zero
  Market single(1, 2, {1, 2});
  CHECK(kelly::proportionality_test(single, 50, 1).outcome ==
        ProportionalityOutcome::Degenerate);
  // one asset: every portfolio is the same, regret identically zero
  Market one_asset(2, 1, {1, 2});
  ProportionalityVerdict v = kelly::proportionality_test(one_asset, 50, 1);
  CHECK(v.outcome == ProportionalityOutcome::NotProportional);
  CHECK(!v.constant_c.has_value());
  REQUIRE(v.counterexample.has_value());
  CHECK(v.counterexample->predicted == 0.0);
}

TEST_CASE("injectivity holds in gambling markets") {
  kelly::Rng rng(73);
  Market market = oracle::kelly_market(rng, 3);
  kelly::InjectivityReport rep = kelly::injectivity_test(market, 40, 3);
  CHECK(rep.injective);
  CHECK(!rep.witness.has_value());
  CHECK(rep.equivalence_applicable);
}

TEST_CASE("flat optimizer polytopes yield witnesses") {
  // the risky asset never enters the optimum, so many distributions share it
  Market market(2, 2, {1, 1, 1, 0});
  kelly::InjectivityReport rep = kelly::injectivity_test(market, 20, 5);
  CHECK(!rep.injective);
  REQUIRE(rep.witness.has_value());
  const auto& [p, q] = *rep.witness;
  double linf = 0.0;
  for (std::size_t j = 0; j < 2; ++j) linf = std::max(linf, std::abs(p[j] - q[j]));
  CHECK(linf > 1e-6);
  CHECK(kelly::distribution_regret(market, q, p).value() <= 1e-9);
  CHECK(!rep.equivalence_applicable);  // only two distinct rows
}

TEST_CASE("crosscheck agrees on gambling and mixed markets") {
  kelly::Rng rng(79);
  for (int trial = 0; trial < 4; ++trial) {
    Market g = oracle::kelly_market(rng, 2 + rng.index(3));
    kelly::CrosscheckReport rep = kelly::characterization_crosscheck(g, 50 + trial, 60);
    CHECK(rep.agree);
    CHECK(rep.kelly.has_value());
    CHECK(rep.verdict.outcome == ProportionalityOutcome::Proportional);
  }
  Market mixed(2, 2, {1, 3, 1, 0.2});
  kelly::CrosscheckReport rep = kelly::characterization_crosscheck(mixed, 9, 120);
  CHECK(rep.agree);
  CHECK(!rep.kelly.has_value());
  CHECK(rep.verdict.outcome == ProportionalityOutcome::NotProportional);
}

TEST_CASE("crosscheck rejects unusable markets") {
  Market dup(3, 2, {2, 0, 2, 0, 0, 2});
  CHECK_THROWS_AS(kelly::characterization_crosscheck(dup, 1, 10), std::invalid_argument);
  Market single(1, 2, {1, 2});
  CHECK_THROWS_AS(kelly::characterization_crosscheck(single, 1, 10), std::invalid_argument);
}

TEST_CASE("dominated side assets do not change the verdict") {
  kelly::Rng rng(83);
  for (int trial = 0; trial < 3; ++trial) {
    Market market = oracle::kelly_plus_dominated(rng, 2 + rng.index(2));
    kelly::CrosscheckReport rep = kelly::characterization_crosscheck(market, 11 + trial, 60);
    CHECK(rep.agree);
    CHECK(rep.kelly.has_value());
  }
}
