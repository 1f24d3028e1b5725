#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "kelly/gambling.hpp"
#include "kelly/market.hpp"

namespace kelly {

enum class ProportionalityOutcome { Proportional, NotProportional, Degenerate };

struct ProportionalityCounterexample {
  Distribution p;
  Distribution q;
  double regret;
  double predicted;  // c * divergence; 0 when no positive-regret reference exists
};

struct ProportionalityVerdict {
  ProportionalityOutcome outcome;
  std::optional<double> constant_c;  // calibrated from a reference pair
  std::optional<ProportionalityCounterexample> counterexample;
  std::size_t samples_tested = 0;
};

// Samples (p, q) pairs over the simplex, interior and near-boundary, and
// tests whether regret(p, q) == c * KL(p, q) for a single constant c at
// relative tolerance 1e-7.
ProportionalityVerdict proportionality_test(const Market& market, std::size_t sample_count,
                                            std::uint64_t seed);

struct InjectivityReport {
  bool injective;  // no witness found at the sampled resolution
  std::optional<std::pair<Distribution, Distribution>> witness;  // distinct, regret 0
  bool equivalence_applicable;  // at least three distinct outcome rows
  std::size_t samples_tested = 0;
};

// Searches for two distinct distributions with zero regret between them,
// i.e. sharing an optimal portfolio.  Probes the optimality polytope of
// sampled distributions by linear programming.
InjectivityReport injectivity_test(const Market& market, std::size_t sample_count,
                                   std::uint64_t seed);

struct CrosscheckReport {
  bool agree;  // proportionality verdict matches the structural test
  ProportionalityVerdict verdict;
  std::optional<Odds> kelly;
};

// Requires at least two outcomes and no duplicate outcome rows.
CrosscheckReport characterization_crosscheck(const Market& market, std::uint64_t seed,
                                             std::size_t sample_count = 200);

}  // namespace kelly
