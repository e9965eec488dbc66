#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rmean/core.hpp"

namespace rmean {

/// Seeded random permutation of 0..n-1 used to assign rows to groups.
std::vector<std::size_t> bucket_order(std::size_t n, std::uint64_t seed);

/// Averages consecutive runs of floor(n / group_count) rows taken in `order`;
/// the trailing n mod group_count rows of `order` are discarded.
BucketMeans group_means(const DataSet& data, std::span<const std::size_t> order,
                        std::size_t group_count);

/// Shuffles the rows (seeded) and returns group_count raw bucket means.
BucketMeans bucket_means(const DataSet& data, std::size_t group_count, std::uint64_t seed);

/// Rows [first, first + count) of `means`, without center or scale.
BucketMeans select_rows(const BucketMeans& means, std::size_t first, std::size_t count);

/// Median of each column; even counts use the midpoint of the two middle values.
Vector coordinate_median_of_means(const BucketMeans& means);

}  // namespace rmean
