#pragma once

#include <vector>

#include "rmean/core.hpp"

namespace rmean {

struct PruneResult {
  BucketMeans kept;
  /// Original indices of the removed rows, in removal order (farthest first).
  std::vector<std::size_t> removed;
};

/// Drops the ceil(fraction * k) rows farthest from x0. Among equal distances
/// the higher original index is removed first. Kept rows stay in input order.
PruneResult prune(const BucketMeans& means, const Vector& x0, double prune_fraction);

/// Maps each row to (Z_i - x) / B with B = max_i ||Z_i - x||.
/// Throws DegenerateData when B == 0.
BucketMeans center_and_scale(const BucketMeans& means, const Vector& x);

}  // namespace rmean
