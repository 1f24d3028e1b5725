#pragma once

#include <cstddef>
#include <vector>

namespace kelly::lp {

enum class Rel { LE, EQ, GE };

struct Constraint {
  std::vector<double> coeffs;
  Rel rel;
  double rhs;
};

// maximize <objective, x> subject to the constraints and x >= 0.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
  Status status;
  std::vector<double> x;
  double value = 0.0;
};

// Dense two-phase simplex with Bland's rule.  Intended for the small
// problems that arise here (tens of variables and constraints).
Solution solve(const Problem& problem);

}  // namespace kelly::lp
