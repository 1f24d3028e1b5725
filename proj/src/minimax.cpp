#include "kelly/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kelly/divergence.hpp"
#include "kelly/errors.hpp"

namespace kelly {

namespace {

Distribution mix(const std::vector<Distribution>& family, const std::vector<double>& t) {
  const std::size_t m = family.front().size();
  std::vector<double> p(m, 0.0);
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) p[j] += t[i] * family[i][j];
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return Distribution(p);
}

std::vector<double> mwu_step(const std::vector<double>& t, const std::vector<double>& r,
                             double eta) {
  double rmax = *std::max_element(r.begin(), r.end());
  std::vector<double> out(t.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] = t[i] * std::exp(eta * (r[i] - rmax));
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

void check_family(const Market& market, const std::vector<Distribution>& family) {
  if (family.empty()) throw std::invalid_argument("empty family");
  for (const auto& p : family)
    if (p.size() != market.num_outcomes())
      throw std::invalid_argument("family member has wrong dimension");
}

}  // namespace

MinimaxReport minimax_regret(const Market& market, const std::vector<Distribution>& family,
                             const MinimaxOptions& options) {
  check_family(market, family);
  const std::size_t n = family.size();

  // Maximal growth of each member, cached; always finite because every
  // market row has a positive entry (the uniform portfolio hedges).
  std::vector<double> best_growth(n);
  for (std::size_t i = 0; i < n; ++i) best_growth[i] = solve(market, family[i]).growth.nats();

  std::vector<double> t(n, 1.0 / n);
  double eta = 1.0;

  double best_lower = -std::numeric_limits<double>::infinity();
  double best_upper = std::numeric_limits<double>::infinity();
  std::vector<double> best_t = t;
  Portfolio best_b = Portfolio(std::vector<double>(market.num_assets(),
                                                   1.0 / market.num_assets()));

  // previous accepted step, for the monotone safeguard on the dual ascent
  bool have_prev = false;
  std::vector<double> prev_t, prev_r;
  double prev_lower = -std::numeric_limits<double>::infinity();

  for (std::size_t round = 1; round <= options.max_rounds; ++round) {
    Distribution pbar = mix(family, t);
    SolveReport rep = solve(market, pbar);

    std::vector<double> r(n);
    double lower = 0.0, upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = std::max(0.0, best_growth[i] - growth_rate(market, rep.portfolio, family[i]).nats());
      lower += t[i] * r[i];
      upper = std::max(upper, r[i]);
    }

    if (have_prev && lower < prev_lower - 1e-12 && eta > 1e-8) {
      // overshot: retry from the previous mixture with a smaller step
      eta *= 0.5;
      t = mwu_step(prev_t, prev_r, eta);
      continue;
    }

    if (lower > best_lower) {
      best_lower = lower;
      best_t = t;
    }
    if (upper < best_upper) {
      best_upper = upper;
      best_b = rep.portfolio;
    }

    double gap = best_upper - std::max(best_lower, 0.0);
    if (gap <= options.gap_tol) {
      double lo = std::max(best_lower, 0.0);
      return {0.5 * (best_upper + lo), best_b, best_t, mix(family, best_t),
              gap,  round};
    }

    have_prev = true;
    prev_t = t;
    prev_r = r;
    prev_lower = lower;
    eta = std::min(1.0, eta * 1.5);
    t = mwu_step(t, r, eta);
  }
  throw ConvergenceError("no convergence");
}

BoundCheck lower_bound_check(const Market& market, const std::vector<Distribution>& family,
                             const std::vector<double>& t) {
  check_family(market, family);
  if (t.size() != family.size()) throw std::invalid_argument("mixture has wrong dimension");
  double sum = 0.0;
  for (double v : t) {
    if (v < 0.0) throw std::invalid_argument("negative mixture weight");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to 1");

  Distribution pbar = mix(family, t);
  SolveReport rep = solve(market, pbar);

  // inf_b sum_i t_i regret(p_i, b) is attained at the barycenter optimum,
  // where it equals sum_i t_i F(p_i) - F(pbar).
  double infimum = -rep.growth.nats();
  for (std::size_t i = 0; i < family.size(); ++i)
    infimum += t[i] * solve(market, family[i]).growth.nats();
  infimum = std::max(0.0, infimum);

  double at_optimum = std::max(0.0, rep.growth.nats() -
                                        growth_rate(market, rep.portfolio, pbar).nats());
  double bound = infimum + at_optimum;

  double value = minimax_regret(market, family).value;
  return {bound, bound <= value + 1e-8};
}

BoundCheck saddle_check(const Market& market, const std::vector<Distribution>& family,
                        const Portfolio& b) {
  check_family(market, family);
  if (b.size() != market.num_assets()) throw std::invalid_argument("portfolio has wrong dimension");

  double sup = 0.0;
  for (const auto& p : family) {
    Regret r = action_regret(market, p, b);
    sup = std::max(sup, r.finite() ? r.value() : std::numeric_limits<double>::infinity());
  }

  MinimaxReport rep = minimax_regret(market, family);
  Regret at_bary = action_regret(market, rep.barycenter, b);
  double extra = at_bary.finite() ? at_bary.value() : std::numeric_limits<double>::infinity();

  return {sup, sup + 1e-6 >= rep.value + extra};
}

}  // namespace kelly
