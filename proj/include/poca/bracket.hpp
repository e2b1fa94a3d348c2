#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "poca/config_space.hpp"

namespace poca {

// Geometric budget ladder b_min * f^i up to b_max, where f is the integer
// reciprocal of the promotion proportion eta.
class FidelityLadder {
 public:
  FidelityLadder(Budget b_min, Budget b_max, double eta);

  Budget b_min() const { return budgets_.front(); }
  Budget b_max() const { return budgets_.back(); }
  int eta_factor() const { return eta_factor_; }
  double eta() const { return 1.0 / eta_factor_; }
  const std::vector<Budget>& budgets() const { return budgets_; }
  std::size_t rung_count() const { return budgets_.size(); }
  bool contains(Budget b) const;

 private:
  int eta_factor_;
  std::vector<Budget> budgets_;
};

struct Rung {
  std::size_t count = 0;
  Budget budget = 0;
};

// One successive-halving bracket: start n0 configurations at r0, promote
// the best count/f at each rung until the hyperband's maximum budget.
struct BracketPlan {
  int s = 0;
  std::size_t n0 = 0;
  Budget r0 = 0;
  std::vector<Rung> rungs;

  Budget cost() const;
};

struct HyperbandPlan {
  Budget max_budget = 0;
  int s_max = 0;
  std::vector<BracketPlan> brackets;  // s = s_max down to 0
  Budget total_cost = 0;
  std::size_t total_configs = 0;
};

// max_budget must lie on the ladder. Bracket s starts
// floor((s_max+1)/(s+1)) * f^s configurations at budget max_budget / f^s.
HyperbandPlan build_hyperband(const FidelityLadder& ladder, Budget max_budget);

struct SampledConfig {
  std::size_t id = 0;
  Configuration config;
  Provenance provenance = Provenance::random;
};

struct EvalRecord {
  std::size_t config_id = 0;
  Budget budget = 0;
  double loss = std::numeric_limits<double>::infinity();
  bool failed = false;
  int rung = 0;
};

// Pulls a fresh configuration for rung 0 of a bracket.
using ConfigSupplier = std::function<SampledConfig()>;

// Evaluates one configuration at one budget. A throw or a non-finite loss
// is recorded as a failed evaluation.
using Evaluator = std::function<double(const SampledConfig&, Budget)>;

// Receives each rung's records as soon as the rung completes, in stable
// (original evaluation) order.
using RungSink = std::function<void(const BracketPlan&, int rung, std::span<const EvalRecord>)>;

struct BracketResult {
  std::vector<EvalRecord> evals;  // rung-major, stable order within each rung
  std::optional<std::size_t> best_config_id;
  double best_loss = std::numeric_limits<double>::infinity();
  Budget consumed = 0;
};

// Executes one bracket. Evaluations within a rung are independent and fan
// out across `jobs` threads; rung completion is a barrier and results are
// independent of intra-rung completion order. Failed evaluations get loss
// +inf, are charged their budget, and are never promoted. Ties at the
// promotion cut are broken by original evaluation order.
BracketResult run_bracket(const BracketPlan& plan, const ConfigSupplier& supplier,
                          const Evaluator& evaluator, const RungSink& sink, unsigned jobs = 1);

}  // namespace poca
