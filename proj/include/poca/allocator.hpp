#pragma once

#include <cstddef>
#include <vector>

#include "poca/bracket.hpp"

namespace poca {

struct CandidateHyperband {
  Budget max_budget = 0;
  Budget cost = 0;
  std::size_t configs = 0;
  HyperbandPlan plan;
};

// One candidate per ladder budget from the second rung up; costs are
// strictly increasing. Requires a ladder with at least two budgets.
std::vector<CandidateHyperband> build_candidates(const FidelityLadder& ladder);

struct Schedule {
  std::vector<HyperbandPlan> hyperbands;  // execution order, ascending max budget
  std::vector<double> p;                  // per-hyperband random-selection probability
  Budget total_cost = 0;
  Budget leftover = 0;

  std::size_t size() const { return hyperbands.size(); }
  std::size_t total_configs() const;
};

// Budget-conscious schedule: fill with max-length hyperbands while at least
// half the budget remains, then sweep the smaller candidates from largest
// to smallest (non-strict feasibility test), dropping a candidate size once
// it no longer fits. Execution order is ascending by max budget; leftover
// ends up smaller than the cheapest candidate. Throws when total_budget
// cannot fit one full-length hyperband.
Schedule allocate(Budget total_budget, const std::vector<CandidateHyperband>& candidates);

// Repeats the max-budget hyperband floor(T / B_n) times.
Schedule baseline_schedule(Budget total_budget, const FidelityLadder& ladder);

}  // namespace poca
