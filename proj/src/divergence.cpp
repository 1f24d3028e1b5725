#include "kelly/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kelly/errors.hpp"

namespace kelly {

namespace {
const double kInf = std::numeric_limits<double>::infinity();

// Small negatives from solver tolerance are clamped; anything worse means the
// two solves disagree beyond what their certificates allow.
double clamp_regret(double v) {
  if (v >= 0.0) return v;
  if (v >= -1e-7) return 0.0;
  throw ConvergenceError("regret computed negative beyond solver tolerance");
}
}  // namespace

Regret::Regret(double value) : value_(value) {
  if (std::isnan(value_) || value_ < 0.0)
    throw std::invalid_argument("regret must be nonnegative and not NaN");
}

Regret Regret::infinity() { return Regret(kInf); }
bool Regret::finite() const { return std::isfinite(value_); }
double Regret::value() const { return value_; }

double kl_divergence(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("distributions have different sizes");
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    if (q[j] == 0.0) return kInf;
    total += p[j] * std::log(p[j] / q[j]);
  }
  return std::max(total, 0.0);
}

Regret action_regret(const Market& market, const Distribution& p,
                     const Portfolio& b) {
  GrowthRate w = growth_rate(market, b, p);
  if (!w.finite()) return Regret::infinity();
  double best = solve(market, p).growth.nats();
  return Regret(clamp_regret(best - w.nats()));
}

Regret distribution_regret(const Market& market, const Distribution& p,
                           const Distribution& q) {
  if (p.size() != q.size() || p.size() != market.num_outcomes())
    throw std::invalid_argument("distribution size does not match outcome count");

  SolveReport for_q = solve(market, q);
  double best_p = solve(market, p).growth.nats();

  bool p_inside_q = true;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p[j] > 0.0 && q[j] == 0.0) p_inside_q = false;

  if (p_inside_q) {
    // Payoffs on supp(q) are shared by every optimizer for q, and supp(p) lies
    // inside supp(q), so the regret is constant across the optimal set.
    GrowthRate w = growth_rate(market, for_q.portfolio, p);
    return Regret(clamp_regret(best_p - w.nats()));
  }

  // General case: maximize W(., p) over the optimal set for q, described by
  // pinning the payoffs of the found optimizer on the support of q.
  std::vector<LinearEquality> eqs;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] == 0.0) continue;
    LinearEquality eq;
    eq.coeffs.assign(market.row(j).begin(), market.row(j).end());
    eq.value = market.payoff(j, for_q.portfolio);
    eqs.push_back(std::move(eq));
  }
  PortfolioConstraints face(market.num_assets(), {}, std::move(eqs));
  SolverOptions options;
  options.start = for_q.portfolio.weights();
  SolveReport best_on_face = solve(market, p, face, options);
  if (!best_on_face.growth.finite()) return Regret::infinity();
  return Regret(clamp_regret(best_p - best_on_face.growth.nats()));
}

double cover_gap(const Market& market, const Distribution& p,
                 const Distribution& q) {
  double d = kl_divergence(p, q);
  Regret r = distribution_regret(market, p, q);
  if (!std::isfinite(d) && !r.finite())
    throw DomainError("indeterminate gap: divergence and regret both infinite");
  if (!std::isfinite(d)) return kInf;
  return d - r.value();
}

double bregman_identity_residual(const Market& market,
                                 const std::vector<Distribution>& parts,
                                 const std::vector<double>& weights,
                                 const Distribution& q) {
  if (parts.empty() || parts.size() != weights.size())
    throw std::invalid_argument("mixture parts and weights must match and be nonempty");
  double wsum = 0.0;
  for (double t : weights) {
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("mixture weights must be nonnegative");
    wsum += t;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("mixture weights must sum to 1");

  std::vector<double> mix(q.size(), 0.0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() != q.size())
      throw std::invalid_argument("mixture part size does not match");
    for (std::size_t j = 0; j < mix.size(); ++j)
      mix[j] += weights[i] * parts[i][j];
  }
  Distribution pbar{std::move(mix)};

  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (weights[i] == 0.0) continue;
    Regret to_q = distribution_regret(market, parts[i], q);
    Regret to_mix = distribution_regret(market, parts[i], pbar);
    if (!to_q.finite() || !to_mix.finite())
      throw DomainError("mixture identity undefined: infinite regret term");
    lhs += weights[i] * to_q.value();
    rhs += weights[i] * to_mix.value();
  }
  Regret mix_to_q = distribution_regret(market, pbar, q);
  if (!mix_to_q.finite())
    throw DomainError("mixture identity undefined: infinite regret term");
  rhs += mix_to_q.value();
  return std::abs(lhs - rhs);
}

}  // namespace kelly
