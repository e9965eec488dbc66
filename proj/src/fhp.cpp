#include "rmean/fhp.hpp"

#include <cmath>

#include "rmean/random.hpp"
#include "rmean/spectral.hpp"

namespace rmean {

std::size_t fhp_iteration_count(std::size_t k, double r, double c) {
  if (!(r > 0.0)) throw InvalidArgument("fhp: margin must be positive");
  const double raw = std::ceil(c * std::log(static_cast<double>(std::max<std::size_t>(k, 1))) / (r * r));
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

std::optional<MarginCertificate> fhp_solve(const BucketMeans& rows, double r, double eta_mwu, std::size_t T,
                                           std::size_t max_round_trials, std::uint64_t seed, FhpTrace* trace) {
  const Matrix& z = rows.means;
  const auto k = static_cast<std::size_t>(z.rows());
  if (k == 0) throw InvalidArgument("fhp: no rows");
  if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("fhp: margin must lie in (0, 1]");
  if (!(eta_mwu > 0.0 && eta_mwu < 1.0)) throw InvalidArgument("fhp: eta must lie in (0, 1)");
  if (T == 0 || max_round_trials == 0) throw InvalidArgument("fhp: T and trial count must be positive");
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (z.row(i).norm() > 1.0 + kScaledNormSlack) throw InvalidArgument("fhp: rows must have norm at most 1");
  }

  // No direction has positive margin on an all-zero instance.
  if (z.isZero(0.0)) return std::nullopt;

  // More iterations than the estimator uses: the analysis wants the top
  // singular vector itself rather than a 1/2-approximation.
  const std::size_t power_iters = 4 * default_power_iterations(8.0, rows.dim());
  std::vector<double> tau(k, 1.0 / static_cast<double>(k));
  std::vector<double> sigma(k);
  std::vector<Vector> directions;
  directions.reserve(T);

  for (std::size_t t = 0; t < T; ++t) {
    const WeightedMatrixView view{z, tau};
    PowerResult top = power_top_singular(view, power_iters, mix_seed(seed, t));
    const Vector proj = z * top.direction;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      sigma[i] = std::min(1.0, std::abs(proj[static_cast<Eigen::Index>(i)]));
    }
    if (trace) {
      trace->tau.push_back(tau);
      trace->sigma.push_back(sigma);
    }
    for (std::size_t i = 0; i < k; ++i) {
      tau[i] *= 1.0 - eta_mwu * sigma[i] * sigma[i];
      total += tau[i];
    }
    for (double& v : tau) v /= total;
    directions.push_back(std::move(top.direction));
  }
  if (trace) trace->directions = directions;

  auto outcome = round_combinations(z, directions, kFhpAlpha * r, 1.0 - 3.0 * kFhpAlpha, max_round_trials,
                                    mix_seed(seed, 0xfffffffeULL));
  if (!outcome) return std::nullopt;
  return make_certificate(z, std::move(outcome->direction), r);
}

}  // namespace rmean
