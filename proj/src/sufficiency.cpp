#include "kelly/sufficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kelly/divergence.hpp"
#include "kelly/errors.hpp"
#include "kelly/lp.hpp"
#include "kelly/random.hpp"
#include "kelly/solver.hpp"

namespace kelly {

namespace {

Distribution interior_sample(Rng& rng, std::size_t m) { return Distribution(rng.dirichlet(m)); }

// mass 0.99 on one outcome, the rest spread thinly: near a vertex but inside
Distribution near_boundary_sample(Rng& rng, std::size_t m) {
  std::vector<double> v = rng.dirichlet(m);
  for (double& x : v) x *= 0.01;
  v[rng.index(m)] += 0.99;
  return Distribution(v);
}

double regret_value(const Market& market, const Distribution& p, const Distribution& q) {
  Regret r = distribution_regret(market, p, q);
  return r.finite() ? r.value() : std::numeric_limits<double>::infinity();
}

}  // namespace

ProportionalityVerdict proportionality_test(const Market& market, std::size_t sample_count,
                                            std::uint64_t seed) {
  const std::size_t m = market.num_outcomes();
  ProportionalityVerdict out;
  if (m < 2) {
    out.outcome = ProportionalityOutcome::Degenerate;
    return out;
  }

  Rng rng(seed);

  // calibrate c from a reference pair with positive regret and divergence
  struct Pair {
    Distribution p, q;
    double div, reg;
  };
  std::optional<Pair> widest;  // largest divergence seen, as fallback evidence

  auto consider = [&](const Distribution& p, const Distribution& q) -> std::optional<double> {
    double d = kl_divergence(p, q);
    if (!(d > 1e-9) || !std::isfinite(d)) return std::nullopt;
    double r = regret_value(market, p, q);
    ++out.samples_tested;
    if (!std::isfinite(r)) return std::nullopt;
    if (!widest || d > widest->div) widest = Pair{p, q, d, r};
    if (r > 1e-9) return r / d;
    return std::nullopt;
  };

  {
    std::vector<double> w(m, 1.0);
    w[0] = 2.0;
    double s = static_cast<double>(m) + 1.0;
    for (double& x : w) x /= s;
    Distribution p0(w);
    Distribution q0(std::vector<double>(m, 1.0 / static_cast<double>(m)));
    out.constant_c = consider(p0, q0);
  }
  for (int attempt = 0; attempt < 64 && !out.constant_c; ++attempt)
    out.constant_c = consider(interior_sample(rng, m), interior_sample(rng, m));

  if (!out.constant_c) {
    // regret vanished on every probe while divergence did not: no positive
    // constant can relate them
    if (widest) {
      out.outcome = ProportionalityOutcome::NotProportional;
      out.counterexample =
          ProportionalityCounterexample{widest->p, widest->q, widest->reg, 0.0};
    } else {
      out.outcome = ProportionalityOutcome::Degenerate;
    }
    return out;
  }

  const double c = *out.constant_c;
  for (std::size_t s = 0; s < sample_count; ++s) {
    Distribution p = (s % 2 == 0) ? interior_sample(rng, m) : near_boundary_sample(rng, m);
    Distribution q = (s % 4 < 2) ? interior_sample(rng, m) : near_boundary_sample(rng, m);
    double d = kl_divergence(p, q);
    if (!(d > 1e-12) || !std::isfinite(d)) continue;
    double r = regret_value(market, p, q);
    ++out.samples_tested;
    if (std::abs(r - c * d) > 1e-7 * (1.0 + d)) {
      out.outcome = ProportionalityOutcome::NotProportional;
      out.counterexample = ProportionalityCounterexample{p, q, r, c * d};
      return out;
    }
  }
  out.outcome = ProportionalityOutcome::Proportional;
  return out;
}

InjectivityReport injectivity_test(const Market& market, std::size_t sample_count,
                                   std::uint64_t seed) {
  const std::size_t m = market.num_outcomes();
  const std::size_t k = market.num_assets();
  InjectivityReport out;
  out.equivalence_applicable = deduplicate_rows(market).market.num_outcomes() >= 3;

  Rng rng(seed);
  const std::size_t trials = std::max<std::size_t>(1, sample_count);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    Distribution p = interior_sample(rng, m);
    SolveReport rep = solve(market, p);
    ++out.samples_tested;

    std::vector<double> y(m);
    for (std::size_t j = 0; j < m; ++j) y[j] = market.payoff(j, rep.portfolio);

    // the set of distributions for which rep.portfolio stays optimal:
    // expected price relatives at most 1, exactly 1 on the support
    lp::Problem base;
    base.num_vars = m;
    base.objective.assign(m, 0.0);
    base.constraints.push_back({std::vector<double>(m, 1.0), lp::Rel::EQ, 1.0});
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> row(m);
      for (std::size_t j = 0; j < m; ++j) row[j] = market.at(j, i) / y[j];
      bool active = rep.portfolio[i] > 0.0;
      base.constraints.push_back({row, active ? lp::Rel::EQ : lp::Rel::LE, 1.0});
    }

    auto probe = [&](std::size_t j0, double sign) -> std::optional<Distribution> {
      lp::Problem prob = base;
      prob.objective[j0] = sign;
      lp::Solution sol = lp::solve(prob);
      if (sol.status != lp::Status::Optimal) return std::nullopt;
      double sum = 0.0;
      for (double v : sol.x) sum += std::max(0.0, v);
      if (sum <= 0.0) return std::nullopt;
      std::vector<double> q(m);
      for (std::size_t j = 0; j < m; ++j) q[j] = std::max(0.0, sol.x[j]) / sum;
      return Distribution(q);
    };

    for (std::size_t j0 = 0; j0 < m && !out.witness; ++j0) {
      for (double sign : {1.0, -1.0}) {
        auto q = probe(j0, sign);
        if (!q) continue;
        double linf = 0.0;
        for (std::size_t j = 0; j < m; ++j) linf = std::max(linf, std::abs((*q)[j] - p[j]));
        if (linf <= 1e-6) continue;
        // q is inside the support of p (interior), so this is exact
        double r = regret_value(market, *q, p);
        if (r <= 1e-9) {
          out.witness = std::make_pair(p, *q);
          break;
        }
      }
    }
    if (out.witness) break;
  }

  out.injective = !out.witness.has_value();
  return out;
}

CrosscheckReport characterization_crosscheck(const Market& market, std::uint64_t seed,
                                             std::size_t sample_count) {
  if (market.num_outcomes() < 2) throw std::invalid_argument("need at least two outcomes");
  if (deduplicate_rows(market).market.num_outcomes() != market.num_outcomes())
    throw std::invalid_argument("market has duplicate outcome rows");

  CrosscheckReport out{false, proportionality_test(market, sample_count, seed),
                       is_kelly_market(market)};
  bool proportional = out.verdict.outcome == ProportionalityOutcome::Proportional;
  out.agree = proportional == out.kelly.has_value();
  return out;
}

}  // namespace kelly
