#include "kelly/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kelly/errors.hpp"
#include "kelly/lp.hpp"

namespace kelly {

namespace {

const double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportEps = 1e-12;   // weight below which an asset counts as unused
constexpr double kActiveTol = 1e-8;     // first-order equality activity

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  std::size_t rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    double t = (1.0 - cum) / static_cast<double>(i + 1);
    if (u[i] + t > 0.0) {
      rho = i + 1;
      tau = t;
    }
  }
  (void)rho;
  for (double& x : v) x = std::max(0.0, x + tau);
  return v;
}

// Dykstra's alternating projections onto orthant + halfspaces, with the
// affine part (budget row plus equality rows) projected exactly.  Affine sets
// need no correction vectors, and handling them in one exact step avoids the
// sublinear stall of pairwise passes when the feasible set touches the
// orthant tangentially.
std::vector<double> dykstra(const PortfolioConstraints& cons,
                            std::vector<double> x) {
  const std::size_t k = cons.num_assets();
  const auto& ineq = cons.inequalities();
  const auto& eq = cons.equalities();

  std::vector<std::vector<double>> basis;
  std::vector<double> beta;
  auto add_affine = [&](std::vector<double> v, double rhs) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      double f = dot(basis[i], v);
      for (std::size_t c = 0; c < k; ++c) v[c] -= f * basis[i][c];
      rhs -= f * beta[i];
    }
    double n = std::sqrt(dot(v, v));
    if (n > 1e-12) {
      for (double& c : v) c /= n;
      basis.push_back(std::move(v));
      beta.push_back(rhs / n);
    }
  };
  add_affine(std::vector<double>(k, 1.0), 1.0);
  for (const auto& c : eq) add_affine(c.coeffs, c.value);
  auto affine_project = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      double f = dot(basis[i], v) - beta[i];
      for (std::size_t c = 0; c < k; ++c) v[c] -= f * basis[i][c];
    }
  };

  const std::size_t sets = 1 + ineq.size();
  std::vector<std::vector<double>> corr(sets, std::vector<double>(k, 0.0));
  std::vector<double> norm_ineq(ineq.size());
  for (std::size_t l = 0; l < ineq.size(); ++l)
    norm_ineq[l] = dot(ineq[l].coeffs, ineq[l].coeffs);

  affine_project(x);
  for (std::size_t cycle = 0; cycle < 5000; ++cycle) {
    std::vector<double> before = x;
    std::vector<std::vector<double>> corr_before = corr;
    std::size_t s = 0;
    {  // orthant
      std::vector<double> y(k);
      for (std::size_t i = 0; i < k; ++i) y[i] = x[i] + corr[s][i];
      std::vector<double> xn(k);
      for (std::size_t i = 0; i < k; ++i) xn[i] = std::max(0.0, y[i]);
      for (std::size_t i = 0; i < k; ++i) corr[s][i] = y[i] - xn[i];
      x = std::move(xn);
      ++s;
    }
    for (std::size_t l = 0; l < ineq.size(); ++l, ++s) {
      std::vector<double> y(k);
      for (std::size_t i = 0; i < k; ++i) y[i] = x[i] + corr[s][i];
      double viol = dot(ineq[l].coeffs, y) - ineq[l].bound;
      std::vector<double> xn = y;
      if (viol > 0.0 && norm_ineq[l] > 0.0) {
        double f = viol / norm_ineq[l];
        for (std::size_t i = 0; i < k; ++i) xn[i] -= f * ineq[l].coeffs[i];
      }
      for (std::size_t i = 0; i < k; ++i) corr[s][i] = y[i] - xn[i];
      x = std::move(xn);
    }
    // last so returned points satisfy the equalities exactly
    affine_project(x);
    // the iterate can repeat exactly while the corrections still move, so
    // both must settle before stopping
    double change = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      change = std::max(change, std::abs(x[i] - before[i]));
    for (std::size_t c = 0; c < sets; ++c)
      for (std::size_t i = 0; i < k; ++i)
        change = std::max(change, std::abs(corr[c][i] - corr_before[c][i]));
    if (change < 1e-14 && cycle > 0) break;
  }
  return x;
}

lp::Problem base_lp(const PortfolioConstraints& cons, std::size_t extra_vars) {
  const std::size_t k = cons.num_assets();
  lp::Problem prob;
  prob.num_vars = k + extra_vars;
  prob.objective.assign(prob.num_vars, 0.0);
  {
    lp::Constraint sum{std::vector<double>(prob.num_vars, 0.0), lp::Rel::EQ, 1.0};
    for (std::size_t i = 0; i < k; ++i) sum.coeffs[i] = 1.0;
    prob.constraints.push_back(std::move(sum));
  }
  for (const auto& c : cons.inequalities()) {
    lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::LE, c.bound};
    for (std::size_t i = 0; i < k; ++i) row.coeffs[i] = c.coeffs[i];
    prob.constraints.push_back(std::move(row));
  }
  for (const auto& c : cons.equalities()) {
    lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::EQ, c.value};
    for (std::size_t i = 0; i < k; ++i) row.coeffs[i] = c.coeffs[i];
    prob.constraints.push_back(std::move(row));
  }
  return prob;
}

struct Objective {
  const Market* market;
  const Distribution* p;
  std::vector<std::size_t> support;  // outcomes with p_j > 0

  double value(const std::vector<double>& b) const {
    double total = 0.0;
    for (std::size_t j : support) {
      double y = 0.0;
      for (std::size_t i = 0; i < b.size(); ++i) y += market->at(j, i) * b[i];
      if (y <= 0.0) return -kInf;
      total += (*p)[j] * std::log(y);
    }
    return total;
  }

  std::vector<double> gradient(const std::vector<double>& b) const {
    std::vector<double> g(b.size(), 0.0);
    for (std::size_t j : support) {
      double y = 0.0;
      for (std::size_t i = 0; i < b.size(); ++i) y += market->at(j, i) * b[i];
      double w = (*p)[j] / y;
      for (std::size_t i = 0; i < b.size(); ++i) g[i] += w * market->at(j, i);
    }
    return g;
  }
};

std::vector<std::size_t> support_of(const Distribution& p) {
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p[j] > 0.0) s.push_back(j);
  return s;
}

Portfolio clean_portfolio(std::vector<double> b) {
  double sum = 0.0;
  for (double& x : b) {
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  if (sum <= 0.0) throw std::logic_error("degenerate portfolio weights");
  for (double& x : b) x /= sum;
  return Portfolio(std::move(b));
}

std::size_t matrix_rank(std::vector<std::vector<double>> rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  double scale = 0.0;
  for (const auto& r : rows)
    for (double v : r) scale = std::max(scale, std::abs(v));
  const double tol = std::max(1e-300, scale * 1e-10);
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (std::abs(rows[r][c]) > std::abs(rows[piv][c])) piv = r;
    if (std::abs(rows[piv][c]) <= tol) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      double f = rows[r][c] / rows[rank][c];
      for (std::size_t cc = c; cc < cols; ++cc) rows[r][cc] -= f * rows[rank][cc];
    }
    ++rank;
  }
  return rank;
}

// Expected price-relative ratios E_p[X_i / <X,b>] for all assets; payoffs must
// be positive on the support of p.
std::vector<double> expectation_ratios(const Market& market, const Distribution& p,
                                       const std::vector<double>& b) {
  std::vector<double> e(market.num_assets(), 0.0);
  for (std::size_t j = 0; j < market.num_outcomes(); ++j) {
    if (p[j] == 0.0) continue;
    double y = 0.0;
    for (std::size_t i = 0; i < market.num_assets(); ++i)
      y += market.at(j, i) * b[i];
    double w = p[j] / y;
    for (std::size_t i = 0; i < market.num_assets(); ++i)
      e[i] += w * market.at(j, i);
  }
  return e;
}

}  // namespace

PortfolioConstraints::PortfolioConstraints(std::size_t num_assets)
    : num_assets_(num_assets) {
  if (num_assets_ == 0) throw std::invalid_argument("zero assets");
}

PortfolioConstraints::PortfolioConstraints(std::size_t num_assets,
                                           std::vector<LinearInequality> inequalities,
                                           std::vector<LinearEquality> equalities)
    : num_assets_(num_assets),
      inequalities_(std::move(inequalities)),
      equalities_(std::move(equalities)) {
  if (num_assets_ == 0) throw std::invalid_argument("zero assets");
  for (const auto& c : inequalities_)
    if (c.coeffs.size() != num_assets_ || !std::isfinite(c.bound))
      throw std::invalid_argument("bad inequality constraint");
  for (const auto& c : equalities_)
    if (c.coeffs.size() != num_assets_ || !std::isfinite(c.value))
      throw std::invalid_argument("bad equality constraint");
  max_slack_point();  // throws InfeasibleError on empty region
}

std::pair<double, std::vector<double>> PortfolioConstraints::max_slack_point() const {
  const std::size_t k = num_assets_;
  lp::Problem prob = base_lp(*this, 1);  // extra var: the slack margin s
  const std::size_t s_var = k;
  prob.objective[s_var] = 1.0;
  for (std::size_t i = 0; i < k; ++i) {  // b_i - s >= 0
    lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::GE, 0.0};
    row.coeffs[i] = 1.0;
    row.coeffs[s_var] = -1.0;
    prob.constraints.push_back(std::move(row));
  }
  // inequality rows gain +s on the left: <c,b> + s <= d
  for (std::size_t l = 0; l < inequalities_.size(); ++l)
    prob.constraints[1 + l].coeffs[s_var] = 1.0;

  lp::Solution sol = lp::solve(prob);
  if (sol.status == lp::Status::Infeasible)
    throw InfeasibleError("portfolio constraints have empty feasible region");
  if (sol.status != lp::Status::Optimal)
    throw std::logic_error("max-slack program must be bounded");
  std::vector<double> b(sol.x.begin(), sol.x.begin() + k);
  return {sol.value, std::move(b)};
}

std::vector<double> project_feasible(const PortfolioConstraints& constraints,
                                     const std::vector<double>& point) {
  if (point.size() != constraints.num_assets())
    throw std::invalid_argument("point size does not match asset count");
  if (constraints.empty()) return project_simplex(point);
  return dykstra(constraints, point);
}

std::vector<double> analytic_center(const PortfolioConstraints& constraints) {
  auto [margin, start] = constraints.max_slack_point();
  if (margin <= 1e-12) return start;  // empty interior

  const std::size_t k = constraints.num_assets();
  const auto& ineq = constraints.inequalities();
  const auto& eq = constraints.equalities();

  // Orthonormal basis of the affine normal space (sum-to-one plus equalities).
  std::vector<std::vector<double>> normals;
  normals.push_back(std::vector<double>(k, 1.0));
  for (const auto& c : eq) normals.push_back(c.coeffs);
  std::vector<std::vector<double>> q;
  for (auto v : normals) {
    for (const auto& u : q) {
      double f = dot(u, v);
      for (std::size_t i = 0; i < k; ++i) v[i] -= f * u[i];
    }
    double n = std::sqrt(dot(v, v));
    if (n > 1e-12) {
      for (double& x : v) x /= n;
      q.push_back(std::move(v));
    }
  }
  auto tangent = [&](std::vector<double> g) {
    for (const auto& u : q) {
      double f = dot(u, g);
      for (std::size_t i = 0; i < k; ++i) g[i] -= f * u[i];
    }
    return g;
  };
  auto barrier = [&](const std::vector<double>& b) {
    double v = 0.0;
    for (double x : b) {
      if (x <= 0.0) return -kInf;
      v += std::log(x);
    }
    for (const auto& c : ineq) {
      double slack = c.bound - dot(c.coeffs, b);
      if (slack <= 0.0) return -kInf;
      v += std::log(slack);
    }
    return v;
  };

  std::vector<double> x = start;
  double fx = barrier(x);
  for (std::size_t it = 0; it < 2000; ++it) {
    std::vector<double> g(k);
    for (std::size_t i = 0; i < k; ++i) g[i] = 1.0 / x[i];
    for (const auto& c : ineq) {
      double slack = c.bound - dot(c.coeffs, x);
      for (std::size_t i = 0; i < k; ++i) g[i] -= c.coeffs[i] / slack;
    }
    g = tangent(g);
    double gn = std::sqrt(dot(g, g));
    if (gn < 1e-11) break;
    double eta = 1.0 / (1.0 + gn);
    std::vector<double> cand(k);
    double fc = -kInf;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < k; ++i) cand[i] = x[i] + eta * g[i];
      fc = barrier(cand);
      if (fc > fx) break;
      eta *= 0.5;
    }
    if (fc <= fx + 1e-13 * (1.0 + std::abs(fx))) {
      if (fc > fx) { x = cand; }
      break;
    }
    x = cand;
    fx = fc;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Unconstrained solve: multiplicative updates b_i <- b_i E_p[X_i / <X,b>].

SolveReport solve(const Market& market, const Distribution& p,
                  const SolverOptions& options) {
  if (p.size() != market.num_outcomes())
    throw std::invalid_argument("distribution size does not match outcome count");
  const std::size_t k = market.num_assets();

  std::vector<std::size_t> outs = support_of(p);
  std::vector<std::size_t> assets;
  for (std::size_t i = 0; i < k; ++i) {
    bool pays = false;
    for (std::size_t j : outs) pays = pays || market.at(j, i) > 0.0;
    if (pays) assets.push_back(i);
  }
  const std::size_t ka = assets.size();

  std::vector<double> b(ka, 1.0 / static_cast<double>(ka));
  std::vector<double> y(outs.size());
  std::vector<double> e(ka);
  std::vector<double> cand(ka);
  std::vector<double> w1(ka), w2(ka);
  std::vector<std::size_t> zero_iter(ka, 0);
  std::size_t ref_iter = 0;
  int marks = 0;
  double prev_growth = -kInf;
  bool converged = false;
  std::size_t iterations = 0;

  auto growth_of = [&](const std::vector<double>& w) {
    double total = 0.0;
    for (std::size_t jj = 0; jj < outs.size(); ++jj) {
      double s = 0.0;
      for (std::size_t ii = 0; ii < ka; ++ii)
        s += market.at(outs[jj], assets[ii]) * w[ii];
      if (s <= 0.0) return -kInf;
      total += p[outs[jj]] * std::log(s);
    }
    return total;
  };

  auto residual_of = [&](const std::vector<double>& w) {
    for (std::size_t jj = 0; jj < outs.size(); ++jj) {
      double s = 0.0;
      for (std::size_t ii = 0; ii < ka; ++ii)
        s += market.at(outs[jj], assets[ii]) * w[ii];
      if (s <= 0.0) return kInf;
      y[jj] = s;
    }
    double res = 0.0;
    for (std::size_t ii = 0; ii < ka; ++ii) {
      double s = 0.0;
      for (std::size_t jj = 0; jj < outs.size(); ++jj)
        s += p[outs[jj]] * market.at(outs[jj], assets[ii]) / y[jj];
      res = std::max(res, s - 1.0);
      if (w[ii] > kSupportEps) res = std::max(res, std::abs(s - 1.0));
    }
    return res;
  };

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    iterations = iter;
    double growth = 0.0;
    for (std::size_t jj = 0; jj < outs.size(); ++jj) {
      double s = 0.0;
      for (std::size_t ii = 0; ii < ka; ++ii)
        s += market.at(outs[jj], assets[ii]) * b[ii];
      y[jj] = s;
      growth += p[outs[jj]] * std::log(s);
    }
    double residual = 0.0;
    for (std::size_t ii = 0; ii < ka; ++ii) {
      double s = 0.0;
      for (std::size_t jj = 0; jj < outs.size(); ++jj)
        s += p[outs[jj]] * market.at(outs[jj], assets[ii]) / y[jj];
      e[ii] = s;
      residual = std::max(residual, s - 1.0);
      if (b[ii] > kSupportEps) residual = std::max(residual, std::abs(s - 1.0));
    }
    bool stalled =
        iter > 0 && std::abs(growth - prev_growth) < options.growth_tol;
    if (stalled && residual < options.kkt_tol) {
      converged = true;
      break;
    }
    // looser trigger for the extrapolated step: near a degenerate optimum
    // the plain updates keep growth moving by tiny amounts long after real
    // progress has ended, which a tolerance at the convergence scale would
    // wait out forever
    bool slow = iter >= 100 &&
                std::abs(growth - prev_growth) < 1e-7 * (1.0 + std::abs(growth));
    prev_growth = growth;

    for (std::size_t ii = 0; ii < ka; ++ii) {
      b[ii] *= e[ii];
      if (b[ii] < kSupportEps && e[ii] < 1.0 - 1e-8) {
        b[ii] = 0.0;
        zero_iter[ii] = iter;
      }
      // a zeroed asset whose ratio settles above one blocks the certificate
      // and multiplicative steps cannot bring it back, so seed it again; the
      // ratio can spike right after a drop while the rest of the portfolio
      // has not rebalanced yet, so judge it only once that transient is gone
      if (b[ii] == 0.0 && e[ii] - 1.0 >= options.kkt_tol &&
          iter >= zero_iter[ii] + 1000)
        b[ii] = 1e-10;
    }
    double sum = 0.0;
    for (std::size_t ii = 0; ii < ka; ++ii) sum += b[ii];
    for (double& x : b) x /= sum;

    // Near-degenerate markets contract their slow coordinates by factors
    // like 1 - 1e-6 per step and would outlast the iteration cap by orders
    // of magnitude.  Snapshots taken every 64 iterations give each
    // coordinate two deltas whose ratio estimates its contraction factor;
    // summing the implied geometric tail jumps the coordinate straight to
    // its predicted limit, with negative predictions landing on the
    // boundary.  Near the optimum growth differences fade below machine
    // precision while the first-order residual stays measurable, so the
    // jump is accepted on a strict residual decrease, with a growth check
    // only to keep the sequence from genuinely regressing.
    if (iter >= ref_iter + 64) {
      if (marks >= 2 && slow) {
        bool any = false;
        for (std::size_t ii = 0; ii < ka; ++ii) {
          cand[ii] = b[ii];
          if (b[ii] <= 0.0) continue;
          double d1 = w1[ii] - w2[ii];
          double d2 = b[ii] - w1[ii];
          if (d1 == 0.0 || d2 == 0.0) continue;
          double rho = d2 / d1;
          if (std::abs(rho) <= 1e-6 || std::abs(rho) >= 0.99999) continue;
          double lim = b[ii] + d2 * rho / (1.0 - rho);
          cand[ii] = lim < 0.0 ? 0.0 : lim;
          any = true;
        }
        if (any) {
          double cs = 0.0;
          for (std::size_t ii = 0; ii < ka; ++ii) cs += cand[ii];
          if (cs > 0.0) {
            for (double& x : cand) x /= cs;
            double gb = growth_of(b);
            if (residual_of(cand) < residual_of(b) &&
                growth_of(cand) >= gb - 1e-12 * (1.0 + std::abs(gb))) {
              std::swap(b, cand);
              marks = -1;
            }
          }
        }
      }
      ref_iter = iter;
      w2 = w1;
      w1 = b;
      if (++marks > 2) marks = 2;
    }
  }
  if (!converged) throw ConvergenceError("no convergence");

  std::vector<double> full(k, 0.0);
  for (std::size_t ii = 0; ii < ka; ++ii)
    full[assets[ii]] = b[ii] < kSupportEps ? 0.0 : b[ii];
  Portfolio portfolio = clean_portfolio(std::move(full));

  GrowthRate growth = growth_rate(market, portfolio, p);
  double residual = kkt_residual(market, p, portfolio);

  // Uniqueness: payoff vectors of first-order-active assets, restricted to the
  // support of p, must be linearly independent for a single-point optimum.
  std::vector<double> ratios = expectation_ratios(market, p, portfolio.weights());
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < k; ++i)
    if (std::abs(ratios[i] - 1.0) <= kActiveTol) active.push_back(i);
  std::vector<std::vector<double>> cols;
  for (std::size_t i : active) {
    std::vector<double> col;
    for (std::size_t j : outs) col.push_back(market.at(j, i));
    cols.push_back(std::move(col));
  }
  bool unique = matrix_rank(std::move(cols)) == active.size();

  return SolveReport{std::move(portfolio), growth, residual, iterations,
                     unique ? Uniqueness::Unique : Uniqueness::NonUnique};
}

// ---------------------------------------------------------------------------
// Constrained solve: projected gradient ascent with backtracking.

SolveReport solve(const Market& market, const Distribution& p,
                  const PortfolioConstraints& constraints,
                  const SolverOptions& options) {
  if (constraints.empty() && !options.start) return solve(market, p, options);
  if (p.size() != market.num_outcomes())
    throw std::invalid_argument("distribution size does not match outcome count");
  if (constraints.num_assets() != market.num_assets())
    throw std::invalid_argument("constraint size does not match asset count");
  const std::size_t k = market.num_assets();

  Objective obj{&market, &p, support_of(p)};

  std::vector<double> x;
  if (options.start) {
    if (options.start->size() != k)
      throw std::invalid_argument("warm start size does not match asset count");
    x = project_feasible(constraints, *options.start);
  } else {
    x = project_feasible(constraints, std::vector<double>(k, 1.0 / k));
  }

  // Maximum attainable minimum payoff over the exact feasible region.  The
  // projected start can sit slightly off tangent constraint geometry, so this
  // certificate decides the forced-ruin case, not the start's own value.
  {
    lp::Problem prob = base_lp(constraints, 1);
    const std::size_t s_var = k;
    prob.objective[s_var] = 1.0;
    for (std::size_t j : obj.support) {
      lp::Constraint row{std::vector<double>(prob.num_vars, 0.0), lp::Rel::GE, 0.0};
      for (std::size_t i = 0; i < k; ++i) row.coeffs[i] = market.at(j, i);
      row.coeffs[s_var] = -1.0;
      prob.constraints.push_back(std::move(row));
    }
    lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal)
      throw std::logic_error("payoff margin program must be solvable");
    if (sol.value <= 1e-13) {
      // Every feasible portfolio has zero payoff somewhere on the support.
      Portfolio ruin = clean_portfolio(
          project_feasible(constraints, std::vector<double>(sol.x.begin(),
                                                            sol.x.begin() + k)));
      return SolveReport{std::move(ruin), GrowthRate::neg_infinity(), 0.0, 0,
                         Uniqueness::Unknown};
    }
    if (obj.value(x) == -kInf) x.assign(sol.x.begin(), sol.x.begin() + k);
  }

  double fx = obj.value(x);
  double eta = 1.0;
  std::size_t stall = 0;
  std::size_t iterations = 0;
  const std::size_t cap = std::min<std::size_t>(options.max_iterations, 50000);
  for (std::size_t it = 0; it < cap; ++it) {
    iterations = it;
    std::vector<double> g = obj.gradient(x);
    eta = std::min(eta * 2.0, 1e6);
    std::vector<double> cand;
    double fc = -kInf;
    double gain = 0.0;
    for (int bt = 0; bt < 80; ++bt) {
      std::vector<double> step(k);
      for (std::size_t i = 0; i < k; ++i) step[i] = x[i] + eta * g[i];
      cand = project_feasible(constraints, step);
      fc = obj.value(cand);
      gain = 0.0;
      for (std::size_t i = 0; i < k; ++i) gain += g[i] * (cand[i] - x[i]);
      if (fc > -kInf && fc >= fx + 0.1 * gain - 1e-16) break;
      eta *= 0.5;
      if (eta < 1e-15) break;
    }
    if (fc <= fx || !(fc > -kInf)) break;  // no ascent possible
    double improve = fc - fx;
    x = std::move(cand);
    fx = fc;
    if (improve < 1e-16 * (1.0 + std::abs(fx))) {
      if (++stall >= 25) break;
    } else {
      stall = 0;
    }
  }

  // Stationarity: displacement of a unit gradient step after projection.
  std::vector<double> g = obj.gradient(x);
  std::vector<double> probe(k);
  for (std::size_t i = 0; i < k; ++i) probe[i] = x[i] + g[i];
  std::vector<double> mapped = project_feasible(constraints, probe);
  double res = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    res = std::max(res, std::abs(mapped[i] - x[i]));

  Portfolio portfolio = clean_portfolio(std::move(x));
  GrowthRate growth = growth_rate(market, portfolio, p);
  return SolveReport{std::move(portfolio), growth, res, iterations,
                     Uniqueness::Unknown};
}

double kkt_residual(const Market& market, const Distribution& p,
                    const Portfolio& b) {
  if (p.size() != market.num_outcomes())
    throw std::invalid_argument("distribution size does not match outcome count");
  if (b.size() != market.num_assets())
    throw std::invalid_argument("portfolio size does not match asset count");
  for (std::size_t j = 0; j < market.num_outcomes(); ++j)
    if (p[j] > 0.0 && market.payoff(j, b) <= 0.0)
      throw DomainError("portfolio infeasible for p: zero payoff on a supported outcome");
  std::vector<double> e = expectation_ratios(market, p, b.weights());
  double residual = 0.0;
  for (std::size_t i = 0; i < market.num_assets(); ++i) {
    residual = std::max(residual, e[i] - 1.0);
    if (b[i] > 0.0) residual = std::max(residual, std::abs(e[i] - 1.0));
  }
  return std::max(residual, 0.0);
}

OptimalFace optimal_face(const Market& market, const Distribution& p) {
  SolveReport rep = solve(market, p);
  std::vector<double> e = expectation_ratios(market, p, rep.portfolio.weights());
  OptimalFace face;
  for (std::size_t i = 0; i < market.num_assets(); ++i)
    if (std::abs(e[i] - 1.0) <= kActiveTol) face.assets.push_back(i);
  std::vector<std::size_t> outs = support_of(p);
  std::vector<std::vector<double>> cols;
  for (std::size_t i : face.assets) {
    std::vector<double> col;
    for (std::size_t j : outs) col.push_back(market.at(j, i));
    cols.push_back(std::move(col));
  }
  face.unique = matrix_rank(std::move(cols)) == face.assets.size();
  return face;
}

}  // namespace kelly
