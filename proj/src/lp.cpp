#include "kelly/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kelly/errors.hpp"

namespace kelly::lp {

namespace {

constexpr double kEps = 1e-9;
constexpr std::size_t kMaxPivots = 50000;

struct Tableau {
  std::size_t rows = 0;   // constraints
  std::size_t cols = 0;   // structural + slack + artificial columns
  std::vector<double> a;  // rows x cols
  std::vector<double> rhs;
  std::vector<std::size_t> basis;  // column basic in each row

  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    double piv = at(pr, pc);
    for (std::size_t c = 0; c < cols; ++c) at(pr, c) /= piv;
    rhs[pr] /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr) continue;
      double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
      rhs[r] -= f * rhs[pr];
    }
    basis[pr] = pc;
  }

  // Reduce the cost row against the current basis, then value of the basis.
  void canonicalize(std::vector<double>& obj) const {
    for (std::size_t r = 0; r < rows; ++r) {
      double f = obj[basis[r]];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) obj[c] -= f * at(r, c);
    }
  }

  double basis_value(const std::vector<double>& cost) const {
    double v = 0.0;
    for (std::size_t r = 0; r < rows; ++r) v += cost[basis[r]] * rhs[r];
    return v;
  }
};

// Bland's rule simplex, maximization.  obj holds reduced costs and is kept
// canonical; allowed[c] masks columns that may enter.
Status run_simplex(Tableau& t, std::vector<double>& obj,
                   const std::vector<bool>& allowed) {
  std::size_t pivots = 0;
  for (;;) {
    std::size_t enter = t.cols;
    for (std::size_t c = 0; c < t.cols; ++c) {
      if (!allowed[c]) continue;
      if (obj[c] > kEps) { enter = c; break; }  // Bland: smallest index
    }
    if (enter == t.cols) return Status::Optimal;

    std::size_t leave = t.rows;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < t.rows; ++r) {
      double a = t.at(r, enter);
      if (a > kEps) {
        double ratio = t.rhs[r] / a;
        if (leave == t.rows || ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps && t.basis[r] < t.basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave == t.rows) return Status::Unbounded;

    t.pivot(leave, enter);
    double f = obj[enter];
    for (std::size_t c = 0; c < t.cols; ++c) obj[c] -= f * t.at(leave, c);

    if (++pivots > kMaxPivots)
      throw ConvergenceError("simplex exceeded pivot limit");
  }
}

}  // namespace

Solution solve(const Problem& problem) {
  const std::size_t n = problem.num_vars;
  const std::size_t m = problem.constraints.size();
  if (problem.objective.size() != n)
    throw std::invalid_argument("objective length does not match num_vars");

  std::vector<Constraint> cons = problem.constraints;
  for (auto& c : cons) {
    if (c.coeffs.size() != n)
      throw std::invalid_argument("constraint length does not match num_vars");
    if (c.rhs < 0.0) {  // normalize to rhs >= 0
      for (double& v : c.coeffs) v = -v;
      c.rhs = -c.rhs;
      if (c.rel == Rel::LE) c.rel = Rel::GE;
      else if (c.rel == Rel::GE) c.rel = Rel::LE;
    }
  }

  std::size_t num_slack = 0, num_art = 0;
  for (const auto& c : cons) {
    if (c.rel != Rel::EQ) ++num_slack;
    if (c.rel != Rel::LE) ++num_art;
  }

  Tableau t;
  t.rows = m;
  t.cols = n + num_slack + num_art;
  t.a.assign(t.rows * t.cols, 0.0);
  t.rhs.resize(m);
  t.basis.assign(m, 0);

  std::size_t slack_at = n;
  std::size_t art_at = n + num_slack;
  std::vector<std::size_t> art_cols;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = cons[r];
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = c.coeffs[j];
    t.rhs[r] = c.rhs;
    if (c.rel == Rel::LE) {
      t.at(r, slack_at) = 1.0;
      t.basis[r] = slack_at++;
    } else if (c.rel == Rel::GE) {
      t.at(r, slack_at) = -1.0;
      ++slack_at;
      t.at(r, art_at) = 1.0;
      t.basis[r] = art_at;
      art_cols.push_back(art_at++);
    } else {
      t.at(r, art_at) = 1.0;
      t.basis[r] = art_at;
      art_cols.push_back(art_at++);
    }
  }

  std::vector<bool> allowed(t.cols, true);

  if (!art_cols.empty()) {
    // Phase 1: maximize -(sum of artificials).
    std::vector<double> cost1(t.cols, 0.0);
    for (std::size_t c : art_cols) cost1[c] = -1.0;
    std::vector<double> obj = cost1;
    t.canonicalize(obj);
    Status st = run_simplex(t, obj, allowed);
    if (st == Status::Unbounded)
      throw std::logic_error("phase-1 objective cannot be unbounded");
    if (t.basis_value(cost1) < -1e-7) return Solution{Status::Infeasible, {}, 0.0};

    // Drive remaining basic artificials out where possible.  A row where no
    // structural or slack column is usable is redundant; its artificial stays
    // basic at zero and, with the column blocked from entering, the row can
    // never change again.
    for (std::size_t r = 0; r < t.rows; ++r) {
      bool is_art = false;
      for (std::size_t c : art_cols) is_art = is_art || t.basis[r] == c;
      if (!is_art) continue;
      for (std::size_t c = 0; c < n + num_slack; ++c) {
        if (std::abs(t.at(r, c)) > kEps) {
          t.pivot(r, c);
          break;
        }
      }
    }
    for (std::size_t c : art_cols) allowed[c] = false;
  }

  // Phase 2.
  std::vector<double> cost2(t.cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost2[j] = problem.objective[j];
  std::vector<double> obj = cost2;
  t.canonicalize(obj);
  Status st = run_simplex(t, obj, allowed);
  if (st == Status::Unbounded) return Solution{Status::Unbounded, {}, 0.0};

  Solution sol;
  sol.status = Status::Optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (t.basis[r] < n) sol.x[t.basis[r]] = t.rhs[r];
  sol.value = t.basis_value(cost2);
  return sol;
}

}  // namespace kelly::lp
