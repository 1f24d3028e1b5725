#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kelly {

// Growth rate of wealth in nats per period.  Either finite or -infinity
// (ruin under some outcome with positive probability); never +infinity, never NaN.
class GrowthRate {
 public:
  GrowthRate();  // zero
  explicit GrowthRate(double nats);
  static GrowthRate neg_infinity();

  bool finite() const;
  double nats() const;  // may be -inf
  double bits() const;  // nats / ln 2, the doubling rate

 private:
  double nats_;
};

// Probability distribution over outcomes: nonnegative, sums to 1 within 1e-12.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t j) const { return probs_[j]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Portfolio weights over assets: nonnegative, sums to 1 within 1e-12.
class Portfolio {
 public:
  explicit Portfolio(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Finite market: price relative X[j][i] >= 0 paid by one unit of asset i when
// outcome j occurs.  Every outcome row and every asset column has at least one
// positive entry.
class Market {
 public:
  Market(std::size_t num_outcomes, std::size_t num_assets,
         std::vector<double> entries,  // row-major, num_outcomes x num_assets
         std::vector<std::string> outcome_names = {},
         std::vector<std::string> asset_names = {});

  std::size_t num_outcomes() const { return num_outcomes_; }
  std::size_t num_assets() const { return num_assets_; }
  double at(std::size_t outcome, std::size_t asset) const {
    return entries_[outcome * num_assets_ + asset];
  }
  std::span<const double> row(std::size_t outcome) const {
    return {entries_.data() + outcome * num_assets_, num_assets_};
  }
  const std::vector<std::string>& outcome_names() const { return outcome_names_; }
  const std::vector<std::string>& asset_names() const { return asset_names_; }

  // Payoff of portfolio b under outcome j: <X_j, b>.
  double payoff(std::size_t outcome, const Portfolio& b) const;

 private:
  std::size_t num_outcomes_;
  std::size_t num_assets_;
  std::vector<double> entries_;
  std::vector<std::string> outcome_names_;
  std::vector<std::string> asset_names_;
};

// Expected log payoff sum_j p_j ln <X_j, b>, with 0 ln 0 = 0 for zero-probability
// outcomes.  -infinity exactly when some outcome with p_j > 0 has zero payoff.
GrowthRate growth_rate(const Market& market, const Portfolio& b,
                       const Distribution& p);

// Cumulative wealth after each step of an outcome index sequence, starting
// from wealth 1 (initial wealth itself is not emitted).
std::vector<double> wealth_trajectory(const Market& market, const Portfolio& b,
                                      const std::vector<std::size_t>& outcomes);

// Frequency distribution of an outcome index sequence over m outcomes.
Distribution empirical_distribution(const std::vector<std::size_t>& outcomes,
                                    std::size_t num_outcomes);

// Result of merging outcome rows that are exactly equal as vectors.
// row_of[j] gives the merged row index of original outcome j.
struct RowDedup {
  Market market;
  std::vector<std::size_t> row_of;
};

RowDedup deduplicate_rows(const Market& market);

}  // namespace kelly
