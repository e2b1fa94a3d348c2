#include "poca/objective.hpp"

#include <stdexcept>

namespace poca {

namespace {

// Tag separating the per-(dimension, sample) Bernoulli streams from other
// derived streams.
constexpr std::uint64_t kBernoulliTag = 0x6f6e6573ULL;

std::vector<ParamSpec> counting_ones_params(std::size_t n_cat, std::size_t n_cont) {
  if (n_cat + n_cont == 0)
    throw std::invalid_argument("counting-ones needs at least one dimension");
  std::vector<ParamSpec> params;
  for (std::size_t i = 0; i < n_cat; ++i) {
    ParamSpec p;
    p.name = "x" + std::to_string(i + 1);
    p.kind = ParamKind::categorical;
    p.categories = {"0", "1"};
    params.push_back(std::move(p));
  }
  for (std::size_t j = 0; j < n_cont; ++j) {
    ParamSpec p;
    p.name = "y" + std::to_string(j + 1);
    p.kind = ParamKind::continuous;
    p.low = 0.0;
    p.high = 1.0;
    params.push_back(std::move(p));
  }
  return params;
}

}  // namespace

CountingOnes::CountingOnes(std::size_t n_cat, std::size_t n_cont)
    : n_cat_(n_cat), n_cont_(n_cont), space_(counting_ones_params(n_cat, n_cont)) {}

double CountingOnes::evaluate(const Configuration& cfg, Budget budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < n_cat_; ++i)
    sum += static_cast<double>(std::get<CategoryIndex>(cfg.values[i]).index);
  for (std::size_t j = 0; j < n_cont_; ++j) {
    const double y = std::get<double>(cfg.values[n_cat_ + j]);
    std::int64_t hits = 0;
    for (Budget t = 0; t < budget; ++t) {
      const double u = to_unit(derive_key(seed, {kBernoulliTag, j, static_cast<std::uint64_t>(t)}));
      if (u < y) ++hits;
    }
    sum += static_cast<double>(hits) / static_cast<double>(budget);
  }
  return -sum;
}

std::optional<double> CountingOnes::true_loss(const Configuration& cfg) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_cat_; ++i)
    sum += static_cast<double>(std::get<CategoryIndex>(cfg.values[i]).index);
  for (std::size_t j = 0; j < n_cont_; ++j) sum += std::get<double>(cfg.values[n_cat_ + j]);
  return -sum;
}

std::string CountingOnes::name() const {
  return "counting-ones-" + std::to_string(n_cat_) + "+" + std::to_string(n_cont_);
}

}  // namespace poca
