#include "rmean/bucketing.hpp"

#include <algorithm>
#include <numeric>

#include "rmean/random.hpp"

namespace rmean {

std::vector<std::size_t> bucket_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

BucketMeans group_means(const DataSet& data, std::span<const std::size_t> order,
                        std::size_t group_count) {
  const std::size_t n = data.n();
  if (group_count == 0) throw InvalidArgument("group_means: group_count must be positive");
  if (group_count > n) throw InvalidArgument("group_means: group_count exceeds n");
  if (order.size() != n) throw InvalidArgument("group_means: order must be a permutation of the rows");

  const std::size_t size = n / group_count;
  const Matrix& x = data.samples();
  BucketMeans out;
  out.means = Matrix::Zero(static_cast<Eigen::Index>(group_count), x.cols());
  for (std::size_t g = 0; g < group_count; ++g) {
    auto row = out.means.row(static_cast<Eigen::Index>(g));
    for (std::size_t j = 0; j < size; ++j) {
      const std::size_t src = order[g * size + j];
      if (src >= n) throw InvalidArgument("group_means: order index out of range");
      row += x.row(static_cast<Eigen::Index>(src));
    }
    row /= static_cast<double>(size);
  }
  return out;
}

BucketMeans bucket_means(const DataSet& data, std::size_t group_count, std::uint64_t seed) {
  if (group_count == 0 || group_count > data.n()) {
    throw InvalidArgument("bucket_means: group_count must lie in [1, n]");
  }
  const auto order = bucket_order(data.n(), seed);
  return group_means(data, order, group_count);
}

BucketMeans select_rows(const BucketMeans& means, std::size_t first, std::size_t count) {
  if (first + count > means.count()) throw InvalidArgument("select_rows: range out of bounds");
  BucketMeans out;
  out.means = means.means.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count));
  return out;
}

Vector coordinate_median_of_means(const BucketMeans& means) {
  const Eigen::Index k = means.means.rows();
  if (k < 1) throw InvalidArgument("coordinate_median_of_means: no rows");
  Vector out(means.means.cols());
  std::vector<double> column(static_cast<std::size_t>(k));
  const auto mid = static_cast<std::ptrdiff_t>(k / 2);
  for (Eigen::Index j = 0; j < means.means.cols(); ++j) {
    for (Eigen::Index i = 0; i < k; ++i) column[static_cast<std::size_t>(i)] = means.means(i, j);
    std::nth_element(column.begin(), column.begin() + mid, column.end());
    const double upper = column[static_cast<std::size_t>(mid)];
    if (k % 2 == 1) {
      out[j] = upper;
    } else {
      const double lower = *std::max_element(column.begin(), column.begin() + mid);
      out[j] = lower + 0.5 * (upper - lower);
    }
  }
  return out;
}

}  // namespace rmean
