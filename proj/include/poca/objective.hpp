#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "poca/config_space.hpp"

namespace poca {

// Black-box objective. evaluate() must be deterministic in
// (configuration, budget, seed); a throw marks the evaluation failed.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual const ConfigSpace& space() const = 0;
  virtual double evaluate(const Configuration& cfg, Budget budget, std::uint64_t seed) = 0;

  // Noise-free loss, when the benchmark defines one.
  virtual std::optional<double> true_loss(const Configuration& cfg) const {
    (void)cfg;
    return std::nullopt;
  }

  virtual std::string name() const = 0;
};

// Benchmark over n_cat binary categorical dimensions and n_cont continuous
// dimensions in [0, 1]. The loss is the negated sum of the binary values
// and the per-dimension empirical Bernoulli means; the budget is the number
// of samples drawn per continuous dimension, so noise shrinks as the budget
// grows. The optimum is -(n_cat + n_cont) at all-ones.
class CountingOnes final : public Objective {
 public:
  CountingOnes(std::size_t n_cat, std::size_t n_cont);

  const ConfigSpace& space() const override { return space_; }
  double evaluate(const Configuration& cfg, Budget budget, std::uint64_t seed) override;
  std::optional<double> true_loss(const Configuration& cfg) const override;
  std::string name() const override;

  std::size_t n_cat() const { return n_cat_; }
  std::size_t n_cont() const { return n_cont_; }

 private:
  std::size_t n_cat_;
  std::size_t n_cont_;
  ConfigSpace space_;
};

}  // namespace poca
