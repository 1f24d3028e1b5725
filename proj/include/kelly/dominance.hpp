#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kelly/market.hpp"

namespace kelly {

// b1 dominates b2 when its payoff is at least b2's under every outcome
// (exact comparison); strict domination requires strict inequality everywhere.
bool dominates(const Market& market, const Portfolio& b1, const Portfolio& b2);
bool strictly_dominates(const Market& market, const Portfolio& b1,
                        const Portfolio& b2);

// Smallest index i in supp(b2) whose basis vector is strictly dominated by
// b1, if one exists.  A strictly dominated mixture need not contain such an
// asset, so the witness can be absent even when b1 strictly dominates b2.
std::optional<std::size_t> basis_domination_witness(const Market& market,
                                                    const Portfolio& b1,
                                                    const Portfolio& b2);

struct PruneResult {
  Market market;
  std::vector<std::size_t> removed;            // original asset indices
  std::vector<std::size_t> weakly_dominated;   // kept but weakly dominated
};

// Repeatedly removes assets whose basis vector is strictly dominated by some
// portfolio of the remaining assets (decided by a linear program maximizing
// the worst-case payoff margin; strictly dominated when the margin exceeds
// 1e-10).  Weakly dominated assets are reported, and also removed one at a
// time when remove_weak is set.
PruneResult prune(const Market& market, bool remove_weak = false);

}  // namespace kelly
