#include "poca/selection.hpp"

#include <stdexcept>

#include "poca/tpe.hpp"

namespace poca {

SelectionSchedule make_schedule(std::size_t h) {
  if (h == 0) throw std::invalid_argument("schedule needs at least one hyperband");
  SelectionSchedule s;
  s.p.resize(h, 0.5);
  if (h >= 2) {
    for (std::size_t k = 0; k < h; ++k)
      s.p[k] = 0.5 * (1.0 - static_cast<double>(k) / static_cast<double>(h - 1));
  }
  return s;
}

SelectionSchedule make_baseline_schedule(std::size_t h) {
  if (h == 0) throw std::invalid_argument("schedule needs at least one hyperband");
  SelectionSchedule s;
  s.p.resize(h, 1.0 / 3.0);
  return s;
}

std::pair<Configuration, Provenance> select(const SelectionSchedule& schedule, std::size_t k,
                                            const TpeModel* model, const ConfigSpace& space,
                                            RngStream& rng) {
  if (k >= schedule.size()) throw std::invalid_argument("hyperband index out of range");
  if (model == nullptr) return {space.sample_uniform(rng), Provenance::random};
  if (rng.uniform01() < schedule.p[k]) return {space.sample_uniform(rng), Provenance::random};
  return {propose(*model, space, rng), Provenance::model};
}

}  // namespace poca
