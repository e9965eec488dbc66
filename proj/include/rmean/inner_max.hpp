#pragma once

// Approximate two-sided inner maximization: MWU over bucket means with KL
// projection onto smooth distributions, Gaussian rounding of the collected
// directions, a descending margin search, and the distance / gradient
// estimates built on top of them.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rmean/core.hpp"
#include "rmean/simplex_projection.hpp"

namespace rmean {

struct MarginCertificate {
  Vector direction;
  double margin_theta = 0.0;
  /// Rows with |<Z'_i, direction>| >= margin_theta / 10.
  std::size_t satisfied_count = 0;
  std::size_t total = 0;
};

/// Number of rows with |<row, w>| >= threshold.
std::size_t count_margin(const Matrix& rows, const Vector& w, double threshold);

/// Builds a certificate for `direction` at margin theta, counting at theta / 10.
MarginCertificate make_certificate(const Matrix& rows, Vector direction, double theta);

/// ceil(c_r * ln(max(T_des / delta, e))), T_des evaluated at dimension d.
std::size_t round_trial_budget(const EstimatorConfig& config, std::size_t d);

/// min(T_max, ceil(c_T * ln(k' + 2) / theta^2)).
std::size_t inner_iterations(const EstimatorConfig& config, std::size_t k_prime, double theta);

struct RoundOutcome {
  Vector direction;
  std::size_t satisfied = 0;
  std::size_t trials = 0;
};

/// Draws w = sum_t g_t w_t / ||.|| with g_t ~ N(0, 1) until at least
/// accept_fraction * k' rows satisfy |<Z_i, w>| >= threshold, for at most
/// max_trials draws. nullopt means every trial was rejected.
std::optional<RoundOutcome> round_combinations(const Matrix& rows, std::span<const Vector> directions,
                                               double threshold, double accept_fraction,
                                               std::size_t max_trials, std::uint64_t seed);

/// Rounding at margin theta / 10 with the given acceptance fraction.
std::optional<MarginCertificate> round_vectors(const Matrix& rows, std::span<const Vector> directions,
                                               double theta, std::size_t max_trials, std::uint64_t seed,
                                               double accept_fraction = 0.6);

/// Per-iteration record of an approx_bregman run. tau[t] is the weight vector
/// used to form the matrix in iteration t.
struct MwuTrace {
  std::vector<WeightVector> tau;
  std::vector<std::vector<double>> sigma;
  std::vector<double> rayleigh;
  std::vector<bool> progress;
  std::vector<Vector> directions;
  std::size_t round_trials = 0;
};

/// T MWU rounds on the scaled rows followed by rounding. Rows must have norm
/// <= 1 (+1e-9). nullopt is a normal outcome: no certificate at this theta.
/// Throws ZeroMatrix when every row is zero.
std::optional<MarginCertificate> approx_bregman(const BucketMeans& scaled, double theta, std::size_t T,
                                                const EstimatorConfig& config, std::uint64_t seed,
                                                MwuTrace* trace = nullptr);

struct MarginSearchResult {
  double theta = 0.0;
  MarginCertificate certificate;
  std::size_t probes = 0;
};

/// Tries theta = 2^-j for j = 0..margin_search_steps and keeps the first that
/// succeeds, then bisects between it and the failing grid point above for up
/// to margin_refine_probes extra calls. nullopt when the whole grid fails.
std::optional<MarginSearchResult> search_margin(const BucketMeans& scaled, const EstimatorConfig& config,
                                                std::uint64_t seed);

/// Distance and gradient estimate at one point, sharing a single margin search.
struct InnerMaxProbe {
  double distance = 0.0;
  Vector gradient;
  double theta = 0.0;
  double scale = 0.0;
  bool no_margin = false;
  /// Every row coincided with x; distance is reported as 0.
  bool degenerate = false;
  std::optional<MarginCertificate> certificate;
};

/// Centers and scales `raw` at x, projects onto the row span when d > k',
/// searches the margin and converts the result back to ambient units.
/// Throws DegenerateData when every row equals x.
InnerMaxProbe probe_inner_max(const BucketMeans& raw, const Vector& x, const EstimatorConfig& config,
                              std::uint64_t seed);

/// B * theta / 10, or B * 2^-steps / 10 when no margin is found.
double dist_est(const BucketMeans& raw, const Vector& x, const EstimatorConfig& config, std::uint64_t seed);

/// The certified direction, signed so that at least grad_sign_fraction of the
/// rows lie on its positive side at margin theta / 10; e_1 if no margin exists.
Vector grad_est(const BucketMeans& raw, const Vector& x, const EstimatorConfig& config, std::uint64_t seed);

}  // namespace rmean
