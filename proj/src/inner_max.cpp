#include "rmean/inner_max.hpp"

#include <algorithm>
#include <cmath>

#include "rmean/pruning.hpp"
#include "rmean/random.hpp"
#include "rmean/spectral.hpp"

namespace rmean {

namespace {

constexpr std::uint64_t kRoundStream = 0xfffffffeULL;
constexpr std::uint64_t kRefineStream = 0x10000ULL;

bool meets_fraction(std::size_t count, std::size_t total, double fraction) {
  return static_cast<double>(count) >= fraction * static_cast<double>(total) - 1e-9;
}

}  // namespace

std::size_t count_margin(const Matrix& rows, const Vector& w, double threshold) {
  const Vector proj = rows * w;
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < proj.size(); ++i) {
    if (std::abs(proj[i]) >= threshold) ++count;
  }
  return count;
}

MarginCertificate make_certificate(const Matrix& rows, Vector direction, double theta) {
  MarginCertificate cert;
  cert.satisfied_count = count_margin(rows, direction, theta / 10.0);
  cert.direction = std::move(direction);
  cert.margin_theta = theta;
  cert.total = static_cast<std::size_t>(rows.rows());
  return cert;
}

std::size_t round_trial_budget(const EstimatorConfig& config, std::size_t d) {
  const double t_des = static_cast<double>(descent_iterations(config, d));
  const double arg = std::max(t_des / config.delta, std::exp(1.0));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.round_trial_constant * std::log(arg))));
}

std::size_t inner_iterations(const EstimatorConfig& config, std::size_t k_prime, double theta) {
  const double raw = std::ceil(config.inner_iter_constant * std::log(static_cast<double>(k_prime) + 2.0) /
                               (theta * theta));
  if (!(raw < static_cast<double>(config.inner_iter_max))) return config.inner_iter_max;
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

std::optional<RoundOutcome> round_combinations(const Matrix& rows, std::span<const Vector> directions,
                                               double threshold, double accept_fraction,
                                               std::size_t max_trials, std::uint64_t seed) {
  if (directions.empty()) throw InvalidArgument("round: no directions");
  const Eigen::Index d = rows.cols();
  for (const Vector& w : directions) {
    if (w.size() != d) throw InvalidArgument("round: direction has wrong length");
  }
  const auto total = static_cast<std::size_t>(rows.rows());

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t trial = 1; trial <= max_trials; ++trial) {
    Vector combined = Vector::Zero(d);
    for (const Vector& w : directions) combined += normal(rng) * w;
    const double norm = combined.norm();
    if (!(norm > 0.0)) continue;
    combined /= norm;
    const std::size_t satisfied = count_margin(rows, combined, threshold);
    if (meets_fraction(satisfied, total, accept_fraction)) {
      return RoundOutcome{std::move(combined), satisfied, trial};
    }
  }
  return std::nullopt;
}

std::optional<MarginCertificate> round_vectors(const Matrix& rows, std::span<const Vector> directions,
                                               double theta, std::size_t max_trials, std::uint64_t seed,
                                               double accept_fraction) {
  auto outcome = round_combinations(rows, directions, theta / 10.0, accept_fraction, max_trials, seed);
  if (!outcome) return std::nullopt;
  return make_certificate(rows, std::move(outcome->direction), theta);
}

std::optional<MarginCertificate> approx_bregman(const BucketMeans& scaled, double theta, std::size_t T,
                                                const EstimatorConfig& config, std::uint64_t seed,
                                                MwuTrace* trace) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("approx_bregman: theta must lie in (0, 1]");
  if (T == 0) throw InvalidArgument("approx_bregman: T must be positive");
  const Matrix& rows = scaled.means;
  const auto k = static_cast<std::size_t>(rows.rows());
  if (k == 0) throw InvalidArgument("approx_bregman: no rows");
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    if (rows.row(i).norm() > 1.0 + kScaledNormSlack) {
      throw InvalidArgument("approx_bregman: rows must have norm at most 1");
    }
  }

  const double cap = config.smooth_cap_numerator / static_cast<double>(k);
  const double progress_level = theta * theta * config.mwu_progress_factor;
  const std::size_t power_iters = default_power_iterations(config.power_iter_constant, scaled.dim());

  WeightVector tau(k, 1.0 / static_cast<double>(k));
  std::vector<double> sigma(k);
  std::vector<Vector> directions;
  directions.reserve(T);

  for (std::size_t t = 0; t < T; ++t) {
    const WeightedMatrixView view{rows, tau};
    PowerResult top = power_top_singular(view, power_iters, mix_seed(seed, t));
    const Vector proj = rows * top.direction;
    for (std::size_t i = 0; i < k; ++i) {
      sigma[i] = std::min(1.0, std::abs(proj[static_cast<Eigen::Index>(i)]));
    }
    const bool progress = top.value >= progress_level;
    if (trace) {
      trace->tau.push_back(tau);
      trace->sigma.push_back(sigma);
      trace->rayleigh.push_back(top.value);
      trace->progress.push_back(progress);
    }
    directions.push_back(std::move(top.direction));
    if (progress) tau = mwu_reweight(tau, sigma, true, cap);
  }

  const std::size_t max_trials = round_trial_budget(config, scaled.dim());
  auto outcome = round_combinations(rows, directions, theta / 10.0, config.round_accept_fraction, max_trials,
                                    mix_seed(seed, kRoundStream));
  if (trace) {
    trace->directions = directions;
    trace->round_trials = outcome ? outcome->trials : max_trials;
  }
  if (!outcome) return std::nullopt;
  return make_certificate(rows, std::move(outcome->direction), theta);
}

std::optional<MarginSearchResult> search_margin(const BucketMeans& scaled, const EstimatorConfig& config,
                                                std::uint64_t seed) {
  const std::size_t k = scaled.count();
  if (k == 0) throw InvalidArgument("search_margin: no rows");

  std::size_t probes = 0;
  auto attempt = [&](double theta, std::uint64_t stream) {
    ++probes;
    return approx_bregman(scaled, theta, inner_iterations(config, k, theta), config, mix_seed(seed, stream));
  };

  for (std::size_t j = 0; j <= config.margin_search_steps; ++j) {
    const double theta = std::ldexp(1.0, -static_cast<int>(j));
    auto cert = attempt(theta, j);
    if (!cert) continue;

    MarginSearchResult result{theta, std::move(*cert), 0};
    if (j > 0) {
      double lo = theta;
      double hi = 2.0 * theta;
      for (std::size_t p = 0; p < config.margin_refine_probes; ++p) {
        const double mid = 0.5 * (lo + hi);
        if (auto refined = attempt(mid, kRefineStream + p)) {
          lo = mid;
          result.theta = mid;
          result.certificate = std::move(*refined);
        } else {
          hi = mid;
        }
      }
    }
    result.probes = probes;
    return result;
  }
  return std::nullopt;
}

InnerMaxProbe probe_inner_max(const BucketMeans& raw, const Vector& x, const EstimatorConfig& config,
                              std::uint64_t seed) {
  const BucketMeans scaled = center_and_scale(raw, x);
  const SpanProjection span = project_to_span(scaled);
  const double b = *scaled.scale;
  const auto k = static_cast<double>(scaled.count());

  InnerMaxProbe probe;
  probe.scale = b;
  auto found = search_margin(span.reduced, config, seed);
  if (!found) {
    const double theta_min = std::ldexp(1.0, -static_cast<int>(config.margin_search_steps));
    probe.no_margin = true;
    probe.theta = theta_min;
    probe.distance = b * theta_min / 10.0;
    probe.gradient = Vector::Unit(x.size(), 0);
    return probe;
  }

  probe.theta = found->theta;
  probe.distance = b * found->theta / 10.0;

  const Vector& w = found->certificate.direction;
  const Vector proj = span.reduced.means * w;
  const double threshold = 0.1 * found->theta;
  std::size_t positive = 0;
  for (Eigen::Index i = 0; i < proj.size(); ++i) {
    if (proj[i] >= threshold) ++positive;
  }
  const bool keep_sign = static_cast<double>(positive) >= config.grad_sign_fraction * k - 1e-9;
  const Vector lifted = span.lift(w);
  probe.gradient = keep_sign ? lifted : Vector(-lifted);

  MarginCertificate cert = found->certificate;
  cert.direction = lifted;
  probe.certificate = std::move(cert);
  return probe;
}

double dist_est(const BucketMeans& raw, const Vector& x, const EstimatorConfig& config, std::uint64_t seed) {
  return probe_inner_max(raw, x, config, seed).distance;
}

Vector grad_est(const BucketMeans& raw, const Vector& x, const EstimatorConfig& config, std::uint64_t seed) {
  return probe_inner_max(raw, x, config, seed).gradient;
}

}  // namespace rmean
