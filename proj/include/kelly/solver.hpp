#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kelly/market.hpp"

namespace kelly {

// Linear restrictions on portfolio weights, always on top of the implicit
// simplex (weights nonnegative, summing to 1).  Feasibility is checked at
// construction; an empty region throws InfeasibleError.
struct LinearInequality {
  std::vector<double> coeffs;  // <coeffs, b> <= bound
  double bound;
};

struct LinearEquality {
  std::vector<double> coeffs;  // <coeffs, b> = value
  double value;
};

class PortfolioConstraints {
 public:
  explicit PortfolioConstraints(std::size_t num_assets);
  PortfolioConstraints(std::size_t num_assets,
                       std::vector<LinearInequality> inequalities,
                       std::vector<LinearEquality> equalities);

  std::size_t num_assets() const { return num_assets_; }
  const std::vector<LinearInequality>& inequalities() const { return inequalities_; }
  const std::vector<LinearEquality>& equalities() const { return equalities_; }
  bool empty() const { return inequalities_.empty() && equalities_.empty(); }

  // Largest margin s such that some feasible b keeps every weight and every
  // inequality slack at least s (Chebyshev-style interior point), together
  // with an attaining b.  Used for starting points.
  std::pair<double, std::vector<double>> max_slack_point() const;

 private:
  std::size_t num_assets_;
  std::vector<LinearInequality> inequalities_;
  std::vector<LinearEquality> equalities_;
};

enum class Uniqueness { Unique, NonUnique, Unknown };

struct SolverOptions {
  double growth_tol = 1e-12;      // successive growth difference
  double kkt_tol = 1e-10;         // stationarity residual target
  std::size_t max_iterations = 100000;
  std::optional<std::vector<double>> start;  // warm start (constrained solves)
};

struct SolveReport {
  Portfolio portfolio;
  GrowthRate growth;
  double kkt_residual;  // stationarity measure; certificate only when unconstrained
  std::size_t iterations;
  Uniqueness unique;
};

// Maximizes the growth rate over the simplex by multiplicative updates from
// the uniform start.  Zero-probability outcomes are dropped; assets paying
// zero on the whole support of p are excluded up front.  Throws
// ConvergenceError if the iteration cap is reached.
SolveReport solve(const Market& market, const Distribution& p,
                  const SolverOptions& options = {});

// Constrained variant: projected gradient ascent with backtracking line
// search, projections computed by Dykstra's algorithm.
SolveReport solve(const Market& market, const Distribution& p,
                  const PortfolioConstraints& constraints,
                  const SolverOptions& options = {});

// First-order optimality residual of b for p:
//   max_i max(E_p[X_i / <X,b>] - 1, 0)  combined with
//   max_{i in supp(b)} |E_p[X_i / <X,b>] - 1|.
// Zero (within tolerance) certifies b is growth-optimal.  Throws DomainError
// when b is infeasible for p (zero payoff on a supported outcome).
double kkt_residual(const Market& market, const Distribution& p,
                    const Portfolio& b);

// Assets on which optimizers may be supported (active first-order equality),
// and whether the optimizer is a single point (payoff vectors of the active
// assets linearly independent on the support of p).
struct OptimalFace {
  std::vector<std::size_t> assets;
  bool unique;
};

OptimalFace optimal_face(const Market& market, const Distribution& p);

// Point maximizing the sum of logarithmic slacks of all constraints (weights
// included) over the feasible region; deterministic interior starting point
// for projection routines.  Falls back to the max-slack point when the
// region has an empty interior.
std::vector<double> analytic_center(const PortfolioConstraints& constraints);

// Euclidean projection onto the feasible region of `constraints`.
std::vector<double> project_feasible(const PortfolioConstraints& constraints,
                                     const std::vector<double>& point);

}  // namespace kelly
