#include "rmean/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rmean {

PruneResult prune(const BucketMeans& means, const Vector& x0, double prune_fraction) {
  if (means.is_scaled()) throw InvalidArgument("prune: expects raw bucket means");
  if (!(prune_fraction >= 0.0 && prune_fraction < 0.5)) {
    throw InvalidArgument("prune: fraction must lie in [0, 1/2)");
  }
  if (x0.size() != means.means.cols()) throw InvalidArgument("prune: x0 has wrong length");

  const std::size_t k = means.count();
  // The 1e-9 guards against 0.1 * 10 rounding up past an integer.
  const auto removal = static_cast<std::size_t>(
      std::max(0.0, std::ceil(prune_fraction * static_cast<double>(k) - 1e-9)));

  std::vector<double> dist(k);
  for (std::size_t i = 0; i < k; ++i) {
    dist[i] = (means.means.row(static_cast<Eigen::Index>(i)).transpose() - x0).norm();
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    return a > b;
  });

  PruneResult result;
  result.removed.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(removal));
  std::vector<bool> drop(k, false);
  for (std::size_t i : result.removed) drop[i] = true;

  result.kept.means.resize(static_cast<Eigen::Index>(k - removal), means.means.cols());
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!drop[i]) result.kept.means.row(row++) = means.means.row(static_cast<Eigen::Index>(i));
  }
  return result;
}

BucketMeans center_and_scale(const BucketMeans& means, const Vector& x) {
  if (means.is_scaled()) throw InvalidArgument("center_and_scale: expects raw bucket means");
  if (x.size() != means.means.cols()) throw InvalidArgument("center_and_scale: x has wrong length");
  if (means.count() == 0) throw InvalidArgument("center_and_scale: no rows");

  BucketMeans out;
  out.means = means.means.rowwise() - x.transpose();
  const double b = out.means.rowwise().norm().maxCoeff();
  if (!(b > 0.0)) throw DegenerateData("center_and_scale: every bucket mean equals the center");
  out.means /= b;
  out.center = x;
  out.scale = b;
  return out;
}

}  // namespace rmean
