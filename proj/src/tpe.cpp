#include "poca/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace poca {

namespace {

constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

double sample_stddev(const std::vector<double>& points, std::size_t dims, std::size_t count,
                     std::size_t dim) {
  if (count < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < count; ++i) mean += points[i * dims + dim];
  mean /= static_cast<double>(count);
  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = points[i * dims + dim] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(count - 1));
}

Kde fit_half(const ConfigSpace& space, std::vector<double> points, std::size_t count) {
  const std::size_t dims = space.size();
  Kde kde;
  kde.dims = dims;
  kde.count = count;
  kde.points = std::move(points);
  kde.bandwidth.resize(dims);
  for (std::size_t j = 0; j < dims; ++j) {
    const ParamSpec& p = space.params()[j];
    if (p.kind == ParamKind::categorical) {
      kde.bandwidth[j] = aitchison_aitken_weight(count, dims, p.categories.size());
    } else {
      double width = space.encoded_high(j) - space.encoded_low(j);
      if (width <= 0.0) width = 1.0;  // degenerate single-value dimension
      const double sigma =
          std::max(sample_stddev(kde.points, dims, count, j), kSigmaFloorFraction * width);
      kde.bandwidth[j] = scott_bandwidth(sigma, count, dims);
    }
  }
  return kde;
}

double reflect_into(double x, double lo, double hi) {
  if (x < lo) x = lo + (lo - x);
  if (x > hi) x = hi - (x - hi);
  return std::clamp(x, lo, hi);
}

// log(exp(a) + b) without overflow for large a.
double log_sum_with(double a, double b) {
  const double log_b = std::log(b);
  if (a > log_b) return a + std::log1p(std::exp(log_b - a));
  return log_b + std::log1p(std::exp(a - log_b));
}

}  // namespace

double scott_bandwidth(double sigma, std::size_t m, std::size_t dims) {
  return sigma * std::pow(static_cast<double>(m), -1.0 / (static_cast<double>(dims) + 4.0));
}

double aitchison_aitken_weight(std::size_t m, std::size_t dims, std::size_t categories) {
  const double cap =
      (static_cast<double>(categories) - 1.0) / static_cast<double>(categories);
  return std::min(cap, std::pow(static_cast<double>(m), -1.0 / (static_cast<double>(dims) + 4.0)));
}

double aitchison_aitken_kernel(double h, std::size_t categories, bool match) {
  return match ? 1.0 - h : h / (static_cast<double>(categories) - 1.0);
}

KdeEvaluator::KdeEvaluator(const Kde& kde, const ConfigSpace& space) : kde_(&kde) {
  const std::size_t dims = kde.dims;
  categorical_.resize(dims);
  inv_bandwidth_.assign(dims, 0.0);
  log_match_.assign(dims, 0.0);
  log_miss_.assign(dims, 0.0);
  for (std::size_t j = 0; j < dims; ++j) {
    const ParamSpec& p = space.params()[j];
    const double h = kde.bandwidth[j];
    if (p.kind == ParamKind::categorical) {
      categorical_[j] = true;
      log_match_[j] = std::log(aitchison_aitken_kernel(h, p.categories.size(), true));
      log_miss_[j] = std::log(aitchison_aitken_kernel(h, p.categories.size(), false));
    } else {
      categorical_[j] = false;
      inv_bandwidth_[j] = 1.0 / h;
      log_norm_ -= std::log(h * kSqrt2Pi);
    }
  }
}

double KdeEvaluator::log_density(std::span<const double> x) const {
  const std::size_t dims = kde_->dims;
  const std::size_t m = kde_->count;
  // Online log-sum-exp over per-point log kernel products.
  double run_max = -std::numeric_limits<double>::infinity();
  double run_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* p = kde_->points.data() + i * dims;
    double e = 0.0;
    for (std::size_t j = 0; j < dims; ++j) {
      if (categorical_[j]) {
        e += (x[j] == p[j]) ? log_match_[j] : log_miss_[j];
      } else {
        const double z = (x[j] - p[j]) * inv_bandwidth_[j];
        e -= 0.5 * z * z;
      }
    }
    if (e > run_max) {
      run_sum = run_sum * std::exp(run_max - e) + 1.0;
      run_max = e;
    } else {
      run_sum += std::exp(e - run_max);
    }
  }
  return log_norm_ + run_max + std::log(run_sum) - std::log(static_cast<double>(m));
}

double kde_log_density(const Kde& kde, const ConfigSpace& space, std::span<const double> x) {
  return KdeEvaluator(kde, space).log_density(x);
}

double kde_density(const Kde& kde, const ConfigSpace& space, const Configuration& cfg) {
  return std::exp(kde_log_density(kde, space, space.encode(cfg)));
}

std::optional<TpeModel> fit(std::span<const Observation> observations, const ConfigSpace& space,
                            double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  const std::size_t n = observations.size();
  const std::size_t dims = space.size();
  if (n < dims + 2) return std::nullopt;

  const auto n_good =
      static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n)));
  if (n_good == 0 || n_good >= n) return std::nullopt;

  // Rank by loss; ties keep ingest order so the split is stable.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return observations[a].loss < observations[b].loss;
  });

  std::vector<double> good_points, bad_points;
  good_points.reserve(n_good * dims);
  bad_points.reserve((n - n_good) * dims);
  for (std::size_t r = 0; r < n; ++r) {
    const std::vector<double> x = space.encode(observations[order[r]].config);
    auto& dst = (r < n_good) ? good_points : bad_points;
    dst.insert(dst.end(), x.begin(), x.end());
  }

  TpeModel model;
  model.gamma = gamma;
  model.n_good = n_good;
  model.n_bad = n - n_good;
  model.y_star = observations[order[n_good]].loss;
  model.good = fit_half(space, std::move(good_points), n_good);
  model.bad = fit_half(space, std::move(bad_points), n - n_good);
  return model;
}

Configuration propose(const TpeModel& model, const ConfigSpace& space, RngStream& rng) {
  const std::size_t dims = space.size();
  const KdeEvaluator good_eval(model.good, space);
  const KdeEvaluator bad_eval(model.bad, space);

  std::vector<double> candidate(dims);
  std::vector<double> best(dims);
  double best_score = -std::numeric_limits<double>::infinity();

  for (std::size_t c = 0; c < kProposalCandidates; ++c) {
    const std::size_t pick = static_cast<std::size_t>(rng.bounded(model.good.count));
    const std::span<const double> support = model.good.point(pick);

    for (std::size_t j = 0; j < dims; ++j) {
      const ParamSpec& p = space.params()[j];
      const double h = model.good.bandwidth[j];
      if (p.kind == ParamKind::categorical) {
        // Resample through the Aitchison-Aitken weights: keep with 1-h,
        // otherwise uniform over the remaining categories.
        auto idx = static_cast<std::size_t>(support[j]);
        if (rng.uniform01() < h) {
          const std::size_t other = static_cast<std::size_t>(rng.bounded(p.categories.size() - 1));
          idx = (other >= idx) ? other + 1 : other;
        }
        candidate[j] = static_cast<double>(idx);
      } else {
        const double x = support[j] + h * rng.normal();
        candidate[j] = reflect_into(x, space.encoded_low(j), space.encoded_high(j));
      }
    }

    const double log_l = good_eval.log_density(candidate);
    const double log_g = bad_eval.log_density(candidate);
    const double score = log_l - log_sum_with(log_g, kRatioFloor);
    if (score > best_score) {
      best_score = score;
      best = candidate;
    }
  }

  return space.decode(best);
}

TpeSurrogate::TpeSurrogate(const ConfigSpace& space, double gamma)
    : space_(&space), gamma_(gamma) {}

void TpeSurrogate::ingest(std::span<const Observation> new_observations) {
  ++ingest_calls_;
  observations_.insert(observations_.end(), new_observations.begin(), new_observations.end());
  model_ = fit(observations_, *space_, gamma_);
}

}  // namespace poca
