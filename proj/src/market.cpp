#include "kelly/market.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "kelly/errors.hpp"

namespace kelly {

namespace {
constexpr double kSumTol = 1e-12;
const double kInf = std::numeric_limits<double>::infinity();

void check_simplex(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument(std::string(what) + " has a negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTol)
    throw std::invalid_argument(std::string(what) + " does not sum to 1");
}
}  // namespace

GrowthRate::GrowthRate() : nats_(0.0) {}

GrowthRate::GrowthRate(double nats) : nats_(nats) {
  if (std::isnan(nats) || nats == kInf)
    throw std::invalid_argument("growth rate must be finite or -inf");
}

GrowthRate GrowthRate::neg_infinity() { return GrowthRate(-kInf); }

bool GrowthRate::finite() const { return std::isfinite(nats_); }
double GrowthRate::nats() const { return nats_; }
double GrowthRate::bits() const { return nats_ / std::log(2.0); }

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  check_simplex(probs_, "distribution");
}

Portfolio::Portfolio(std::vector<double> weights) : weights_(std::move(weights)) {
  check_simplex(weights_, "portfolio");
}

Market::Market(std::size_t num_outcomes, std::size_t num_assets,
               std::vector<double> entries,
               std::vector<std::string> outcome_names,
               std::vector<std::string> asset_names)
    : num_outcomes_(num_outcomes),
      num_assets_(num_assets),
      entries_(std::move(entries)),
      outcome_names_(std::move(outcome_names)),
      asset_names_(std::move(asset_names)) {
  if (num_outcomes_ == 0 || num_assets_ == 0)
    throw std::invalid_argument("market needs at least one outcome and one asset");
  if (entries_.size() != num_outcomes_ * num_assets_)
    throw std::invalid_argument("market entry count does not match dimensions");
  for (double x : entries_)
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument("price relatives must be finite and nonnegative");
  for (std::size_t j = 0; j < num_outcomes_; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < num_assets_; ++i) any = any || at(j, i) > 0.0;
    if (!any)
      throw std::invalid_argument("outcome " + std::to_string(j) +
                                  " pays zero on every asset");
  }
  for (std::size_t i = 0; i < num_assets_; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < num_outcomes_; ++j) any = any || at(j, i) > 0.0;
    if (!any)
      throw std::invalid_argument("asset " + std::to_string(i) +
                                  " pays zero on every outcome");
  }
  if (outcome_names_.empty()) {
    for (std::size_t j = 0; j < num_outcomes_; ++j)
      outcome_names_.push_back("o" + std::to_string(j + 1));
  }
  if (asset_names_.empty()) {
    for (std::size_t i = 0; i < num_assets_; ++i)
      asset_names_.push_back("a" + std::to_string(i + 1));
  }
  if (outcome_names_.size() != num_outcomes_ || asset_names_.size() != num_assets_)
    throw std::invalid_argument("name list length does not match dimensions");
}

double Market::payoff(std::size_t outcome, const Portfolio& b) const {
  if (b.size() != num_assets_)
    throw std::invalid_argument("portfolio size does not match asset count");
  double y = 0.0;
  for (std::size_t i = 0; i < num_assets_; ++i) y += at(outcome, i) * b[i];
  return y;
}

GrowthRate growth_rate(const Market& market, const Portfolio& b,
                       const Distribution& p) {
  if (p.size() != market.num_outcomes())
    throw std::invalid_argument("distribution size does not match outcome count");
  if (b.size() != market.num_assets())
    throw std::invalid_argument("portfolio size does not match asset count");
  double total = 0.0;
  for (std::size_t j = 0; j < market.num_outcomes(); ++j) {
    if (p[j] == 0.0) continue;
    double y = market.payoff(j, b);
    if (y <= 0.0) return GrowthRate::neg_infinity();
    total += p[j] * std::log(y);
  }
  return GrowthRate(total);
}

std::vector<double> wealth_trajectory(const Market& market, const Portfolio& b,
                                      const std::vector<std::size_t>& outcomes) {
  std::vector<double> wealth;
  wealth.reserve(outcomes.size());
  double w = 1.0;
  for (std::size_t j : outcomes) {
    if (j >= market.num_outcomes())
      throw std::invalid_argument("outcome index out of range");
    w *= market.payoff(j, b);
    wealth.push_back(w);
  }
  return wealth;
}

Distribution empirical_distribution(const std::vector<std::size_t>& outcomes,
                                    std::size_t num_outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("empty outcome sequence");
  std::vector<double> counts(num_outcomes, 0.0);
  for (std::size_t j : outcomes) {
    if (j >= num_outcomes)
      throw std::invalid_argument("outcome index out of range");
    counts[j] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(outcomes.size());
  return Distribution(std::move(counts));
}

RowDedup deduplicate_rows(const Market& market) {
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<std::size_t> row_of(market.num_outcomes());
  std::vector<double> entries;
  std::vector<std::string> names;
  std::size_t next = 0;
  for (std::size_t j = 0; j < market.num_outcomes(); ++j) {
    std::vector<double> r(market.row(j).begin(), market.row(j).end());
    auto it = seen.find(r);
    if (it == seen.end()) {
      seen.emplace(r, next);
      row_of[j] = next;
      entries.insert(entries.end(), r.begin(), r.end());
      names.push_back(market.outcome_names()[j]);
      ++next;
    } else {
      row_of[j] = it->second;
    }
  }
  Market merged(next, market.num_assets(), std::move(entries), std::move(names),
                market.asset_names());
  return RowDedup{std::move(merged), std::move(row_of)};
}

}  // namespace kelly
