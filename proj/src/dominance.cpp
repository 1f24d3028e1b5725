#include "kelly/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kelly/errors.hpp"
#include "kelly/lp.hpp"

namespace kelly {

namespace {
constexpr double kStrictTol = 1e-10;

// Best worst-case payoff margin of a portfolio over assets `others` against
// column `target`: max_b min_j (<X_j, b> - X_{j,target}).
double domination_margin(const Market& market,
                         const std::vector<std::size_t>& others,
                         std::size_t target) {
  const std::size_t n = others.size();
  lp::Problem prob;
  prob.num_vars = n + 2;  // b, z+, z-
  prob.objective.assign(prob.num_vars, 0.0);
  prob.objective[n] = 1.0;
  prob.objective[n + 1] = -1.0;
  {
    lp::Constraint sum{std::vector<double>(prob.num_vars, 0.0), lp::Rel::EQ, 1.0};
    for (std::size_t i = 0; i < n; ++i) sum.coeffs[i] = 1.0;
    prob.constraints.push_back(std::move(sum));
  }
  for (std::size_t j = 0; j < market.num_outcomes(); ++j) {
    lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::GE,
                       market.at(j, target)};
    for (std::size_t i = 0; i < n; ++i) row.coeffs[i] = market.at(j, others[i]);
    row.coeffs[n] = -1.0;
    row.coeffs[n + 1] = 1.0;
    prob.constraints.push_back(std::move(row));
  }
  lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::Optimal)
    throw std::logic_error("domination program must have an optimum");
  return sol.value;
}

Market submarket(const Market& market, const std::vector<std::size_t>& kept) {
  std::vector<double> entries;
  std::vector<std::string> names;
  entries.reserve(market.num_outcomes() * kept.size());
  for (std::size_t j = 0; j < market.num_outcomes(); ++j)
    for (std::size_t i : kept) entries.push_back(market.at(j, i));
  for (std::size_t i : kept) names.push_back(market.asset_names()[i]);
  return Market(market.num_outcomes(), kept.size(), std::move(entries),
                market.outcome_names(), std::move(names));
}
}  // namespace

bool dominates(const Market& market, const Portfolio& b1, const Portfolio& b2) {
  for (std::size_t j = 0; j < market.num_outcomes(); ++j)
    if (market.payoff(j, b1) < market.payoff(j, b2)) return false;
  return true;
}

bool strictly_dominates(const Market& market, const Portfolio& b1,
                        const Portfolio& b2) {
  for (std::size_t j = 0; j < market.num_outcomes(); ++j)
    if (market.payoff(j, b1) <= market.payoff(j, b2)) return false;
  return true;
}

std::optional<std::size_t> basis_domination_witness(const Market& market,
                                                    const Portfolio& b1,
                                                    const Portfolio& b2) {
  if (b1.size() != market.num_assets() || b2.size() != market.num_assets())
    throw std::invalid_argument("portfolio size does not match asset count");
  for (std::size_t i = 0; i < market.num_assets(); ++i) {
    if (b2[i] == 0.0) continue;
    bool strict = true;
    for (std::size_t j = 0; j < market.num_outcomes(); ++j)
      strict = strict && market.payoff(j, b1) > market.at(j, i);
    if (strict) return i;
  }
  return std::nullopt;
}

PruneResult prune(const Market& market, bool remove_weak) {
  std::vector<std::size_t> kept(market.num_assets());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
  std::vector<std::size_t> removed;

  auto sweep = [&](double threshold) {
    bool changed = true;
    while (changed && kept.size() > 1) {
      changed = false;
      for (std::size_t pos = 0; pos < kept.size(); ++pos) {
        std::vector<std::size_t> others = kept;
        others.erase(others.begin() + pos);
        if (domination_margin(market, others, kept[pos]) > threshold) {
          removed.push_back(kept[pos]);
          kept.erase(kept.begin() + pos);
          changed = true;
          break;
        }
      }
    }
  };

  sweep(kStrictTol);
  if (remove_weak) sweep(-kStrictTol);

  std::vector<std::size_t> weak;
  if (kept.size() > 1) {
    for (std::size_t pos = 0; pos < kept.size(); ++pos) {
      std::vector<std::size_t> others = kept;
      others.erase(others.begin() + pos);
      if (domination_margin(market, others, kept[pos]) >= -kStrictTol)
        weak.push_back(kept[pos]);
    }
  }
  std::sort(removed.begin(), removed.end());
  return PruneResult{submarket(market, kept), std::move(removed), std::move(weak)};
}

}  // namespace kelly
