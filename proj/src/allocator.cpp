#include "poca/allocator.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "poca/selection.hpp"

namespace poca {

std::vector<CandidateHyperband> build_candidates(const FidelityLadder& ladder) {
  if (ladder.rung_count() < 2)
    throw std::invalid_argument("candidate set needs a ladder with at least two budgets");
  std::vector<CandidateHyperband> out;
  for (std::size_t i = 1; i < ladder.rung_count(); ++i) {
    CandidateHyperband c;
    c.max_budget = ladder.budgets()[i];
    c.plan = build_hyperband(ladder, c.max_budget);
    c.cost = c.plan.total_cost;
    c.configs = c.plan.total_configs;
    out.push_back(std::move(c));
  }
  return out;
}

std::size_t Schedule::total_configs() const {
  std::size_t n = 0;
  for (const HyperbandPlan& hb : hyperbands) n += hb.total_configs;
  return n;
}

Schedule allocate(Budget total_budget, const std::vector<CandidateHyperband>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("no candidate hyperbands");
  const std::size_t last = candidates.size() - 1;
  const Budget full_cost = candidates[last].cost;
  if (total_budget < full_cost)
    throw std::invalid_argument("budget too small for one full-length hyperband (need " +
                                std::to_string(full_cost) + ", got " +
                                std::to_string(total_budget) + ")");

  std::vector<std::size_t> counts(candidates.size(), 0);
  Budget remaining = total_budget;

  // Phase 1: max-length hyperbands until at least half the budget is spent.
  while (2 * remaining >= total_budget) {
    ++counts[last];
    remaining -= full_cost;
  }

  // Phase 2: sweep the remaining candidates from largest to smallest. When
  // only the full-length candidate exists it keeps filling, so the leftover
  // stays below the cheapest candidate in every case.
  std::set<std::size_t> active;
  if (last == 0) {
    active.insert(last);
  } else {
    for (std::size_t i = 0; i < last; ++i) active.insert(i);
  }
  while (!active.empty()) {
    const std::size_t sweep_top = *active.rbegin();
    for (std::size_t j = sweep_top + 1; j-- > 0;) {
      if (!active.count(j)) continue;
      if (candidates[j].cost <= remaining) {
        ++counts[j];
        remaining -= candidates[j].cost;
      } else {
        active.erase(active.lower_bound(j), active.end());
      }
    }
  }

  Schedule schedule;
  schedule.leftover = remaining;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t k = 0; k < counts[i]; ++k) {
      schedule.hyperbands.push_back(candidates[i].plan);
      schedule.total_cost += candidates[i].cost;
    }
  }
  schedule.p = make_schedule(schedule.size()).p;
  return schedule;
}

Schedule baseline_schedule(Budget total_budget, const FidelityLadder& ladder) {
  const HyperbandPlan plan = build_hyperband(ladder, ladder.b_max());
  if (total_budget < plan.total_cost)
    throw std::invalid_argument("budget too small for one full-length hyperband (need " +
                                std::to_string(plan.total_cost) + ", got " +
                                std::to_string(total_budget) + ")");
  const Budget repeats = total_budget / plan.total_cost;

  Schedule schedule;
  schedule.leftover = total_budget % plan.total_cost;
  for (Budget k = 0; k < repeats; ++k) {
    schedule.hyperbands.push_back(plan);
    schedule.total_cost += plan.total_cost;
  }
  schedule.p = make_baseline_schedule(schedule.size()).p;
  return schedule;
}

}  // namespace poca
