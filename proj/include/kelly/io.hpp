#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kelly/market.hpp"
#include "kelly/solver.hpp"

namespace kelly {

struct MarketFile {
  Market market;
  std::optional<Distribution> probs;  // present when the file has a prob column
};

// CSV with header "outcome,<asset names...>[,prob]"; one row per outcome.
// '#' lines and blank lines skipped.
MarketFile load_market_csv(const std::string& path);

// Accepts a path to a file of m probabilities, or an inline comma separated
// list.  The sum must be within 1e-9 of one; the values are renormalized.
Distribution load_distribution(const std::string& path_or_inline, std::size_t m);

// One outcome per whitespace or comma separated token, as an outcome name or
// a zero-based index.
std::vector<std::size_t> load_outcome_sequence(const std::string& path,
                                               const Market& market);

// One distribution per line, m comma separated probabilities each.
std::vector<Distribution> load_family_csv(const std::string& path, std::size_t m);

// One constraint per line: "le|ge|eq, c_1, ..., c_k, rhs" meaning
// c . b <= rhs (resp. >=, =) on top of the simplex.
PortfolioConstraints load_constraints_csv(const std::string& path, std::size_t k);

std::string format_market_csv(const Market& market,
                              const Distribution* probs = nullptr);

// shortest decimal form that round-trips
std::string format_double(double v);

}  // namespace kelly
