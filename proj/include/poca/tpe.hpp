#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "poca/config_space.hpp"

namespace poca {

inline constexpr double kDefaultGamma = 0.15;
// Candidate draws per proposal.
inline constexpr std::size_t kProposalCandidates = 64;
// Floor added to the denominator density in the acquisition ratio.
inline constexpr double kRatioFloor = 1e-12;
// Per-dimension standard deviations are floored at this fraction of the
// encoded domain width so zero-variance dimensions keep a usable kernel.
inline constexpr double kSigmaFloorFraction = 1e-3;

// One (configuration, budget, loss) result feeding the surrogate.
struct Observation {
  Configuration config;
  Budget budget = 0;
  double loss = 0.0;
};

// Gaussian width by Scott's rule: sigma * m^(-1/(dims+4)).
double scott_bandwidth(double sigma, std::size_t m, std::size_t dims);

// Aitchison-Aitken weight, capped at its uniform limit (c-1)/c.
double aitchison_aitken_weight(std::size_t m, std::size_t dims, std::size_t categories);

// Kernel value for one categorical dimension: 1-h on a match, h/(c-1)
// otherwise; sums to 1 over the category set.
double aitchison_aitken_kernel(double h, std::size_t categories, bool match);

// Product-kernel density estimator over encoded configurations. Continuous
// and integer dimensions carry Gaussian kernels, categorical dimensions
// Aitchison-Aitken kernels.
struct Kde {
  std::size_t dims = 0;
  std::size_t count = 0;              // m
  std::vector<double> points;         // count x dims, row-major
  std::vector<double> bandwidth;      // per dimension

  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dims, dims};
  }
};

struct TpeModel {
  double gamma = kDefaultGamma;
  double y_star = 0.0;  // loss of the best observation assigned to the bad half
  std::size_t n_good = 0;
  std::size_t n_bad = 0;
  Kde good;
  Kde bad;
};

// Caches per-dimension constants for repeated density queries on one half.
class KdeEvaluator {
 public:
  KdeEvaluator(const Kde& kde, const ConfigSpace& space);

  double log_density(std::span<const double> x) const;

 private:
  const Kde* kde_;
  std::vector<bool> categorical_;
  std::vector<double> inv_bandwidth_;
  std::vector<double> log_match_;
  std::vector<double> log_miss_;
  double log_norm_ = 0.0;  // Gaussian normalization, summed over dimensions
};

double kde_log_density(const Kde& kde, const ConfigSpace& space, std::span<const double> x);
double kde_density(const Kde& kde, const ConfigSpace& space, const Configuration& cfg);

// Splits observations by loss rank (best ceil(gamma*n) into the good half),
// then fits both density estimators. Returns nullopt until there are at
// least dims+2 observations with both halves nonempty.
std::optional<TpeModel> fit(std::span<const Observation> observations, const ConfigSpace& space,
                            double gamma = kDefaultGamma);

// Draws kProposalCandidates perturbations of the good half's support points
// and returns the one maximizing l(x) / (g(x) + kRatioFloor), decoded into
// a valid configuration.
Configuration propose(const TpeModel& model, const ConfigSpace& space, RngStream& rng);

// Observation store plus the model fitted from it. Refits on every ingest;
// the fitted model is immutable and read-only callers may share it.
class TpeSurrogate {
 public:
  TpeSurrogate(const ConfigSpace& space, double gamma = kDefaultGamma);

  void ingest(std::span<const Observation> new_observations);
  const TpeModel* model() const { return model_ ? &*model_ : nullptr; }
  std::size_t observation_count() const { return observations_.size(); }
  std::size_t ingest_calls() const { return ingest_calls_; }

 private:
  const ConfigSpace* space_;
  double gamma_;
  std::vector<Observation> observations_;
  std::optional<TpeModel> model_;
  std::size_t ingest_calls_ = 0;
};

}  // namespace poca
