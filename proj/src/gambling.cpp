#include "kelly/gambling.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kelly/dominance.hpp"
#include "kelly/errors.hpp"
#include "kelly/lp.hpp"

namespace kelly {

namespace {
constexpr double kFairTol = 1e-12;

// Distance of the all-ones vector from the column space of A (k x m),
// via modified Gram-Schmidt on the columns.
double least_squares_residual(const std::vector<std::vector<double>>& cols,
                              std::size_t k) {
  std::vector<std::vector<double>> q;
  for (auto col : cols) {
    for (const auto& u : q) {
      double f = 0.0;
      for (std::size_t r = 0; r < k; ++r) f += u[r] * col[r];
      for (std::size_t r = 0; r < k; ++r) col[r] -= f * u[r];
    }
    double n = 0.0;
    for (double v : col) n += v * v;
    n = std::sqrt(n);
    if (n > 1e-12) {
      for (double& v : col) v /= n;
      q.push_back(std::move(col));
    }
  }
  std::vector<double> r(k, 1.0);
  for (const auto& u : q) {
    double f = 0.0;
    for (std::size_t i = 0; i < k; ++i) f += u[i] * r[i];
    for (std::size_t i = 0; i < k; ++i) r[i] -= f * u[i];
  }
  double n = 0.0;
  for (double v : r) n += v * v;
  return std::sqrt(n);
}

lp::Problem region_lp(const PortfolioConstraints& region, std::size_t extra) {
  const std::size_t k = region.num_assets();
  lp::Problem prob;
  prob.num_vars = k + extra;
  prob.objective.assign(prob.num_vars, 0.0);
  lp::Constraint sum{std::vector<double>(prob.num_vars, 0.0), lp::Rel::EQ, 1.0};
  for (std::size_t i = 0; i < k; ++i) sum.coeffs[i] = 1.0;
  prob.constraints.push_back(std::move(sum));
  for (const auto& c : region.inequalities()) {
    lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::LE, c.bound};
    for (std::size_t i = 0; i < k; ++i) row.coeffs[i] = c.coeffs[i];
    prob.constraints.push_back(std::move(row));
  }
  for (const auto& c : region.equalities()) {
    lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::EQ, c.value};
    for (std::size_t i = 0; i < k; ++i) row.coeffs[i] = c.coeffs[i];
    prob.constraints.push_back(std::move(row));
  }
  return prob;
}
}  // namespace

Odds::Odds(std::vector<double> payouts) : payouts_(std::move(payouts)) {
  if (payouts_.empty()) throw std::invalid_argument("odds are empty");
  for (double o : payouts_)
    if (!std::isfinite(o) || o <= 0.0)
      throw std::invalid_argument("odds must be positive and finite");
}

Embedding embed_ideal(const Market& market) {
  const std::size_t m = market.num_outcomes();
  const std::size_t k = market.num_assets();

  // maximize s  s.t.  sum_j X[j][i] u_j = 1 for every i,  u_j >= s.
  lp::Problem prob;
  prob.num_vars = m + 1;
  prob.objective.assign(prob.num_vars, 0.0);
  prob.objective[m] = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::EQ, 1.0};
    for (std::size_t j = 0; j < m; ++j) row.coeffs[j] = market.at(j, i);
    prob.constraints.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < m; ++j) {
    lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::GE, 0.0};
    row.coeffs[j] = 1.0;
    row.coeffs[m] = -1.0;
    prob.constraints.push_back(std::move(row));
  }
  lp::Solution sol = lp::solve(prob);

  if (sol.status != lp::Status::Optimal || sol.value <= 1e-12) {
    std::vector<std::vector<double>> cols(m, std::vector<double>(k));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < k; ++i) cols[j][i] = market.at(j, i);
    double res = least_squares_residual(cols, k);
    std::ostringstream msg;
    msg << "no exact embedding (least-squares residual " << res << ")";
    throw DomainError(msg.str());
  }

  std::vector<double> u(sol.x.begin(), sol.x.begin() + m);
  std::vector<double> odds(m);
  for (std::size_t j = 0; j < m; ++j) odds[j] = 1.0 / u[j];
  std::vector<Portfolio> weights;
  weights.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> w(m);
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      w[j] = market.at(j, i) * u[j];
      sum += w[j];
    }
    for (double& x : w) x /= sum;  // sum is 1 up to solver round-off
    weights.push_back(Portfolio(std::move(w)));
  }
  return Embedding{Odds(std::move(odds)), std::move(weights)};
}

FairnessReport classify_fairness(const Odds& odds) {
  double s = 0.0;
  for (std::size_t j = 0; j < odds.size(); ++j) s += 1.0 / odds[j];
  FairnessClass kind = FairnessClass::Fair;
  if (s < 1.0 - kFairTol) kind = FairnessClass::Superfair;
  else if (s > 1.0 + kFairTol) kind = FairnessClass::Subfair;
  return FairnessReport{kind, s};
}

std::optional<DutchBookReport> dutch_book(const Odds& odds) {
  FairnessReport fr = classify_fairness(odds);
  if (fr.kind != FairnessClass::Superfair) return std::nullopt;
  std::vector<double> b(odds.size());
  for (std::size_t j = 0; j < odds.size(); ++j) b[j] = (1.0 / odds[j]) / fr.inverse_sum;
  return DutchBookReport{Portfolio(std::move(b)), 1.0 / fr.inverse_sum};
}

std::optional<Odds> is_kelly_market(const Market& market) {
  RowDedup dd = deduplicate_rows(market);
  PruneResult pr = prune(dd.market);
  const Market& m = pr.market;
  if (m.num_outcomes() != m.num_assets()) return std::nullopt;
  const std::size_t n = m.num_outcomes();

  std::vector<double> odds(n, 0.0);
  std::vector<std::size_t> hits(n, 0);  // payoff rows per asset
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t positive = 0, owner = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (m.at(j, i) > 0.0) {
        ++positive;
        owner = i;
      }
    }
    if (positive != 1) return std::nullopt;
    odds[j] = m.at(j, owner);
    ++hits[owner];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (hits[i] != 1) return std::nullopt;
  return Odds(std::move(odds));
}

IProjection reverse_iprojection(const Distribution& p,
                                const PortfolioConstraints& region) {
  const std::size_t m = p.size();
  if (region.num_assets() != m)
    throw std::invalid_argument("region dimension does not match distribution");

  std::vector<std::size_t> supp;
  for (std::size_t j = 0; j < m; ++j)
    if (p[j] > 0.0) supp.push_back(j);

  {  // some feasible q must give every supported outcome positive mass
    lp::Problem prob = region_lp(region, 1);
    prob.objective[m] = 1.0;
    for (std::size_t j : supp) {
      lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::GE, 0.0};
      row.coeffs[j] = 1.0;
      row.coeffs[m] = -1.0;
      prob.constraints.push_back(std::move(row));
    }
    lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal)
      throw InfeasibleError("projection region is empty");
    if (sol.value <= 1e-13)
      throw DomainError("every feasible point has infinite divergence from p");
  }

  // Minimizing D(p||q) means maximizing sum_j p_j ln q_j: the growth-optimal
  // problem in the m-outcome identity market.
  std::vector<double> eye(m * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) eye[j * m + j] = 1.0;
  Market identity(m, m, std::move(eye));

  SolverOptions options;
  options.start = analytic_center(region);
  SolveReport rep = solve(identity, p, region, options);

  std::vector<double> qv = rep.portfolio.weights();
  Distribution q{qv};
  double div = 0.0;
  for (std::size_t j : supp) div += p[j] * std::log(p[j] / q[j]);
  div = std::max(div, 0.0);

  // The divergence only pins coordinates in supp(p); the projection is unique
  // exactly when the remaining coordinates have no feasible freedom.
  bool unique = true;
  if (supp.size() < m) {
    for (std::size_t j0 = 0; j0 < m && unique; ++j0) {
      if (p[j0] > 0.0) continue;
      double extreme[2];
      for (int dir = 0; dir < 2; ++dir) {
        lp::Problem prob = region_lp(region, 0);
        prob.objective[j0] = dir == 0 ? 1.0 : -1.0;
        for (std::size_t j : supp) {
          lp::Constraint pin{std::vector<double>(prob.num_vars, 0.0), lp::Rel::EQ,
                             q[j]};
          pin.coeffs[j] = 1.0;
          prob.constraints.push_back(std::move(pin));
        }
        lp::Solution sol = lp::solve(prob);
        if (sol.status != lp::Status::Optimal)
          throw std::logic_error("flatness probe must be solvable");
        extreme[dir] = dir == 0 ? sol.value : -sol.value;
      }
      if (extreme[0] - extreme[1] > 1e-9) unique = false;
    }
  }
  return IProjection{std::move(q), div, unique};
}

}  // namespace kelly
