#include "poca/bracket.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "poca/parallel.hpp"

namespace poca {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

FidelityLadder::FidelityLadder(Budget b_min, Budget b_max, double eta) {
  if (b_min < 1) fail("b_min must be >= 1");
  if (b_max < b_min) fail("b_max must be >= b_min");
  if (!(eta > 0.0 && eta < 1.0)) fail("eta must lie in (0, 1)");

  // Snap eta to the nearest integer reciprocal; reject anything that is not
  // close to 1/2, 1/3, 1/4, ...
  const double recip = 1.0 / eta;
  const auto f = static_cast<int>(std::llround(recip));
  if (f < 2 || std::abs(eta * f - 1.0) > 1e-3)
    fail("1/eta must be an integer >= 2 (got eta=" + std::to_string(eta) + ")");
  eta_factor_ = f;

  Budget b = b_min;
  budgets_.push_back(b);
  while (b < b_max) {
    if (b > b_max / f + 1) fail("ladder overflow");
    b *= f;
    budgets_.push_back(b);
  }
  if (budgets_.back() != b_max)
    fail("b_max must equal b_min * (1/eta)^k for an integer k");
}

bool FidelityLadder::contains(Budget b) const {
  return std::find(budgets_.begin(), budgets_.end(), b) != budgets_.end();
}

Budget BracketPlan::cost() const {
  Budget total = 0;
  for (const Rung& r : rungs) total += static_cast<Budget>(r.count) * r.budget;
  return total;
}

HyperbandPlan build_hyperband(const FidelityLadder& ladder, Budget max_budget) {
  if (!ladder.contains(max_budget)) fail("max_budget is not on the ladder");

  const int f = ladder.eta_factor();
  int s_max = 0;
  for (Budget b = ladder.b_min(); b < max_budget; b *= f) ++s_max;

  HyperbandPlan plan;
  plan.max_budget = max_budget;
  plan.s_max = s_max;

  for (int s = s_max; s >= 0; --s) {
    BracketPlan bracket;
    bracket.s = s;

    std::size_t f_pow_s = 1;
    for (int i = 0; i < s; ++i) f_pow_s *= static_cast<std::size_t>(f);

    bracket.n0 = (static_cast<std::size_t>(s_max) + 1) / (static_cast<std::size_t>(s) + 1) * f_pow_s;
    bracket.r0 = max_budget / static_cast<Budget>(f_pow_s);

    std::size_t count = bracket.n0;
    Budget budget = bracket.r0;
    for (int i = 0; i <= s; ++i) {
      if (count == 0) fail("rung count reached zero before max budget");
      bracket.rungs.push_back({count, budget});
      count /= static_cast<std::size_t>(f);  // == floor(count * eta)
      budget *= f;
    }

    plan.total_cost += bracket.cost();
    plan.total_configs += bracket.n0;
    plan.brackets.push_back(std::move(bracket));
  }
  return plan;
}

BracketResult run_bracket(const BracketPlan& plan, const ConfigSupplier& supplier,
                          const Evaluator& evaluator, const RungSink& sink, unsigned jobs) {
  struct Member {
    SampledConfig sc;
    double loss = std::numeric_limits<double>::infinity();
    bool failed = false;
  };

  std::vector<Member> members;
  members.reserve(plan.n0);
  for (std::size_t i = 0; i < plan.n0; ++i) members.push_back({supplier()});

  // Indices into `members`, kept in original order between rungs so that
  // promotion ties resolve by evaluation order.
  std::vector<std::size_t> alive(members.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

  BracketResult result;

  for (std::size_t rung = 0; rung < plan.rungs.size(); ++rung) {
    const Budget budget = plan.rungs[rung].budget;

    std::vector<EvalRecord> records(alive.size());
    parallel_for(alive.size(), jobs, [&](std::size_t i) {
      Member& m = members[alive[i]];
      EvalRecord rec;
      rec.config_id = m.sc.id;
      rec.budget = budget;
      rec.rung = static_cast<int>(rung);
      try {
        rec.loss = evaluator(m.sc, budget);
        rec.failed = !std::isfinite(rec.loss);
      } catch (...) {
        rec.failed = true;
      }
      if (rec.failed) rec.loss = std::numeric_limits<double>::infinity();
      m.loss = rec.loss;
      m.failed = rec.failed;
      records[i] = rec;
    });

    for (const EvalRecord& rec : records) {
      result.consumed += rec.budget;
      if (!rec.failed && rec.loss < result.best_loss) {
        result.best_loss = rec.loss;
        result.best_config_id = rec.config_id;
      }
    }

    sink(plan, static_cast<int>(rung), records);
    result.evals.insert(result.evals.end(), records.begin(), records.end());

    if (rung + 1 >= plan.rungs.size()) break;

    // Promote the lowest-loss survivors to the next budget.
    std::vector<std::size_t> order = alive;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return members[a].loss < members[b].loss;
    });
    std::size_t keep = std::min<std::size_t>(plan.rungs[rung + 1].count, order.size());
    while (keep > 0 && members[order[keep - 1]].failed) --keep;
    order.resize(keep);
    std::sort(order.begin(), order.end());  // restore evaluation order
    alive = std::move(order);
    if (alive.empty()) break;  // everything failed; nothing left to promote
  }

  return result;
}

}  // namespace poca
