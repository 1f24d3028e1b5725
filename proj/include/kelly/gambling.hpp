#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kelly/market.hpp"
#include "kelly/solver.hpp"

namespace kelly {

// Payout multipliers of ideal gambling assets: asset j pays o_j exactly when
// outcome j occurs and zero otherwise.
class Odds {
 public:
  explicit Odds(std::vector<double> payouts);  // positive and finite

  std::size_t size() const { return payouts_.size(); }
  double operator[](std::size_t j) const { return payouts_[j]; }
  const std::vector<double>& payouts() const { return payouts_; }

 private:
  std::vector<double> payouts_;
};

// Representation of every market asset as a portfolio of ideal gambling
// assets: X[j][i] = weights[i][j] * odds[j].
struct Embedding {
  Odds odds;
  std::vector<Portfolio> weights;
};

// Finds u > 0 with sum_j X[j][i] u_j = 1 for every asset (odds are 1/u_j).
// Expects deduplicated outcome rows.  Throws DomainError "no exact embedding"
// (reporting the least-squares residual of the system) when no strictly
// positive solution exists.
Embedding embed_ideal(const Market& market);

enum class FairnessClass { Fair, Superfair, Subfair };

struct FairnessReport {
  FairnessClass kind;
  double inverse_sum;  // sum_j 1/o_j
};

// Fair when sum_j 1/o_j = 1 within 1e-12, superfair below, subfair above.
FairnessReport classify_fairness(const Odds& odds);

struct DutchBookReport {
  Portfolio portfolio;
  double guarantee;  // riskless payoff per period, > 1
};

// For superfair odds, the portfolio b_j = (1/o_j) / sum_i (1/o_i) pays the
// same amount under every outcome; absent unless the odds are superfair.
std::optional<DutchBookReport> dutch_book(const Odds& odds);

// After deduplicating rows and pruning strictly dominated assets, detects the
// pure gambling structure: as many assets as outcomes, each row paying on
// exactly one asset, each asset paying on exactly one row.  Returns the odds
// by outcome order of the reduced market, or absent.
std::optional<Odds> is_kelly_market(const Market& market);

struct IProjection {
  Distribution q;      // reached from the analytic center of the region
  double divergence;   // D(p || q)
  bool unique;         // false when the minimizer set is a flat piece
};

// Minimizes D(p || q) over distributions q in the given region (constraints
// over the m ideal assets).  Throws DomainError when every feasible q gives
// infinite divergence.
IProjection reverse_iprojection(const Distribution& p,
                                const PortfolioConstraints& region);

}  // namespace kelly
