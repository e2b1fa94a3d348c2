#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "poca/config_space.hpp"

namespace poca {

struct TpeModel;

// Per-hyperband probability of drawing a configuration uniformly at random
// instead of from the surrogate, indexed by execution order.
struct SelectionSchedule {
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
};

// Linear decay 0.5 -> 0 across h hyperbands: p_k = 0.5 * (1 - k/(h-1)).
// h == 1 keeps p = 0.5; the untrained-model override dominates early anyway.
SelectionSchedule make_schedule(std::size_t h);

// Constant p = 1/3 for every hyperband.
SelectionSchedule make_baseline_schedule(std::size_t h);

// Draws one configuration. An absent (not-ready) model forces a uniform
// draw regardless of p_k; otherwise Bernoulli(p_k) picks uniform vs the
// surrogate's proposal.
std::pair<Configuration, Provenance> select(const SelectionSchedule& schedule, std::size_t k,
                                            const TpeModel* model, const ConfigSpace& space,
                                            RngStream& rng);

}  // namespace poca
