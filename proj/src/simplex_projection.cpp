#include "rmean/simplex_projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rmean {

void validate_distribution(std::span<const double> p) {
  if (p.empty()) throw InvalidArgument("distribution: empty");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("distribution: negative or non-finite entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("distribution: entries must sum to 1");
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("kl_divergence: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    total += p[i] * std::log(p[i] / q[i]);
  }
  return total;
}

WeightVector kl_project(std::span<const double> p, double cap) {
  validate_distribution(p);
  const std::size_t k = p.size();
  if (!(cap > 0.0)) throw InvalidArgument("kl_project: cap must be positive");
  if (cap * static_cast<double>(k) < 1.0 - 1e-12) {
    throw InfeasibleCap("kl_project: cap * k' < 1, the capped simplex is empty");
  }

  WeightVector q(p.begin(), p.end());
  if (*std::max_element(p.begin(), p.end()) <= cap) return q;

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < k; ++i) {
    if (p[i] > 0.0) support.push_back(i);
  }
  const std::size_t nnz = support.size();

  if (cap * static_cast<double>(nnz) <= 1.0) {
    const double leftover = std::max(0.0, 1.0 - cap * static_cast<double>(nnz));
    const double fill = nnz < k ? leftover / static_cast<double>(k - nnz) : 0.0;
    for (std::size_t i = 0; i < k; ++i) q[i] = p[i] > 0.0 ? cap : fill;
    return q;
  }

  std::stable_sort(support.begin(), support.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  // Tail sums from the small end, so tiny uncapped mass is not lost to cancellation.
  std::vector<double> tail(nnz + 1, 0.0);
  for (std::size_t j = nnz; j-- > 0;) tail[j] = tail[j + 1] + p[support[j]];

  // Smallest m such that, with the top m saturated, the largest remaining
  // entry stays under the cap after rescaling.
  for (std::size_t m = 1; m < nnz; ++m) {
    const double free_mass = 1.0 - static_cast<double>(m) * cap;
    if (free_mass <= 0.0) break;
    const double lambda = tail[m] / free_mass;
    if (p[support[m]] <= cap * lambda) {
      for (std::size_t j = 0; j < m; ++j) q[support[j]] = cap;
      for (std::size_t j = m; j < nnz; ++j) q[support[j]] = p[support[j]] / lambda;
      return q;
    }
  }
  // Unreachable for cap * nnz > 1; saturating the support is the limit case.
  for (std::size_t i : support) q[i] = 1.0 / static_cast<double>(nnz);
  return q;
}

WeightVector mwu_reweight(std::span<const double> tau, std::span<const double> sigma, bool progress,
                          double cap) {
  if (tau.size() != sigma.size()) throw InvalidArgument("mwu_reweight: length mismatch");
  for (double s : sigma) {
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("mwu_reweight: sigma outside [0, 1]");
  }
  WeightVector next(tau.begin(), tau.end());
  if (!progress) return next;

  double total = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] *= 1.0 - 0.5 * sigma[i] * sigma[i];
    total += next[i];
  }
  for (double& v : next) v /= total;
  return kl_project(next, cap);
}

}  // namespace rmean
