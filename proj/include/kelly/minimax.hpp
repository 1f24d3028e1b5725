#pragma once

#include <cstddef>
#include <vector>

#include "kelly/market.hpp"
#include "kelly/solver.hpp"

namespace kelly {

struct MinimaxOptions {
  double gap_tol = 1e-6;
  std::size_t max_rounds = 100000;
};

struct MinimaxReport {
  double value;                       // minimax regret over the family
  Portfolio robust_portfolio;         // sup regret <= value + gap/2
  std::vector<double> worst_mixture;  // over family members
  Distribution barycenter;            // mixture of the family under worst_mixture
  double duality_gap;
  std::size_t rounds;
};

// Game value inf_b sup_i regret(p_i, b) for a finite family of distributions,
// by alternating best response: the portfolio player solves for the current
// barycenter, the mixture player takes a multiplicative-weights step on the
// per-member regrets.  Converges when the duality gap drops below gap_tol;
// throws ConvergenceError at the round cap.
MinimaxReport minimax_regret(const Market& market,
                             const std::vector<Distribution>& family,
                             const MinimaxOptions& options = {});

struct BoundCheck {
  double quantity;
  bool holds;
};

// Lower bound from a mixture t: sum_i t_i regret(p_i, .) minimized at the
// barycenter optimum, plus the barycenter's regret against that optimum
// (zero by construction).  Verifies quantity <= minimax value + 1e-8.
BoundCheck lower_bound_check(const Market& market,
                             const std::vector<Distribution>& family,
                             const std::vector<double>& t);

// Upper bound at a portfolio b: sup_i regret(p_i, b) must be at least the
// minimax value plus the worst barycenter's regret against b (within 1e-6).
BoundCheck saddle_check(const Market& market,
                        const std::vector<Distribution>& family,
                        const Portfolio& b);

}  // namespace kelly
