#pragma once

// Bicriteria solver for the furthest hyperplane problem: find w in S^{d-1}
// with |<Z_i, w>| >= alpha * r for a (1 - 3 alpha) fraction of the rows, given
// a promise that some unit vector achieves margin r on every row.
//
// This is the unprojected MWU ancestor of approx_bregman: experts are rows,
// the loss of row i in round t is <Z_i, w_t>^2, weights follow the linear
// multiplicative update tau_i <- tau_i (1 - eta sigma_i^2) and are never
// projected.

#include <cstdint>
#include <optional>
#include <vector>

#include "rmean/core.hpp"
#include "rmean/inner_max.hpp"

namespace rmean {

inline constexpr double kFhpAlpha = 0.1;
inline constexpr double kFhpDefaultEta = 1.0 / 3.0;

/// ceil(c * ln k / r^2), at least 1.
std::size_t fhp_iteration_count(std::size_t k, double r, double c = 10.0);

struct FhpTrace {
  std::vector<std::vector<double>> tau;
  std::vector<std::vector<double>> sigma;
  std::vector<Vector> directions;
};

/// Rows must have norm <= 1. The returned certificate has margin_theta = r
/// and counts rows at r / 10. nullopt after max_round_trials rejections.
std::optional<MarginCertificate> fhp_solve(const BucketMeans& rows, double r, double eta_mwu, std::size_t T,
                                           std::size_t max_round_trials, std::uint64_t seed,
                                           FhpTrace* trace = nullptr);

}  // namespace rmean
