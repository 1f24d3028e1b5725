#pragma once

#include <vector>

#include "kelly/market.hpp"
#include "kelly/solver.hpp"

namespace kelly {

// Nonnegative extended real: finite or +infinity, never NaN.
class Regret {
 public:
  explicit Regret(double value);
  static Regret infinity();
  bool finite() const;
  double value() const;  // may be +inf

 private:
  double value_;
};

// sum_j p_j ln(p_j / q_j), with 0 ln(0/q) = 0; +infinity exactly when some
// outcome has p_j > 0 and q_j = 0.
double kl_divergence(const Distribution& p, const Distribution& q);

// F(p) - W(b, p): growth given up by playing b instead of the optimal
// portfolio for p.  +infinity exactly when W(b, p) is -infinity.
Regret action_regret(const Market& market, const Distribution& p,
                     const Portfolio& b);

// Minimum of action_regret(p, .) over the growth-optimal portfolios for q.
// The optimal set for q is the polytope fixing the payoffs of one optimizer
// on the support of q; the minimum is found by a constrained solve over it.
Regret distribution_regret(const Market& market, const Distribution& p,
                           const Distribution& q);

// kl_divergence(p, q) - distribution_regret(p, q).  Tiny negative values are
// round-off; +infinity when the divergence alone is infinite.  Throws
// DomainError when divergence and regret are both infinite.
double cover_gap(const Market& market, const Distribution& p,
                 const Distribution& q);

// Absolute defect of the mixture identity
//   sum_i t_i D(p_i, q) = sum_i t_i D(p_i, pbar) + D(pbar, q),
// pbar the t-mixture of the parts and D the distribution-level regret.
// Zero when optimizers are unique; can be large when they are not.
// Throws DomainError if any regret involved is infinite.
double bregman_identity_residual(const Market& market,
                                 const std::vector<Distribution>& parts,
                                 const std::vector<double>& weights,
                                 const Distribution& q);

}  // namespace kelly
