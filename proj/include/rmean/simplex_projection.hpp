#pragma once

// KL projection onto the capped simplex K = { q in Delta : q_i <= cap } and
// the multiplicative-weights step that feeds it.

#include <span>
#include <vector>

#include "rmean/core.hpp"

namespace rmean {

using WeightVector = std::vector<double>;

/// Throws InvalidArgument unless p is nonnegative and sums to 1 within 1e-9.
void validate_distribution(std::span<const double> p);

/// KL(p || q) = sum_i p_i ln(p_i / q_i), with 0 ln 0 = 0. Infinite when some
/// q_i = 0 < p_i.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// argmin_{q in K} KL(p || q), computed by sort-based water-filling:
/// q_i = min(p_i / lambda, cap) with lambda fixing sum q = 1.
///
/// If p already respects the cap it is returned unchanged. Throws
/// InfeasibleCap when cap * k' < 1. When the support of p is too small to hold
/// unit mass under the cap (cap * |supp p| < 1), the support saturates at cap
/// and the leftover mass is spread evenly over the zero coordinates.
WeightVector kl_project(std::span<const double> p, double cap);

/// One reweighting step: when `progress` is set, tau_i *= (1 - sigma_i^2 / 2),
/// renormalize, then kl_project with `cap`. Otherwise tau is returned as is.
/// Every sigma_i must lie in [0, 1].
WeightVector mwu_reweight(std::span<const double> tau, std::span<const double> sigma, bool progress,
                          double cap);

}  // namespace rmean
