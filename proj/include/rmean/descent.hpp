#pragma once

// Outer descent loop and the end-to-end estimator.

#include <cstdint>
#include <functional>

#include "rmean/core.hpp"
#include "rmean/inner_max.hpp"

namespace rmean {

/// Supplies the distance and gradient estimate at iterate x in iteration t.
using DescentOracle = std::function<InnerMaxProbe(const Vector& x, std::size_t t)>;

/// x_{t+1} = x_t + eta * d_t * g_t for `iterations` steps; returns the iterate
/// with the smallest d_t. Stops early once d_t < 1e-12 (1 + ||x_t||).
EstimateReport run_descent(const Vector& x0, std::size_t iterations, double eta, const DescentOracle& oracle);

/// Descent driven by probe_inner_max on the pruned bucket means, with
/// ceil(c_des * log2(d + 1)) iterations. An iterate that coincides with every
/// bucket mean is an exact fixed point and is reported with d_t = 0.
EstimateReport descent(const BucketMeans& pruned, const Vector& x0, const EstimatorConfig& config,
                       std::uint64_t seed);

/// Seeds used by estimate_mean for its randomized stages.
struct PipelineSeeds {
  std::uint64_t bucketing = 0;
  std::uint64_t descent = 0;
};
PipelineSeeds pipeline_seeds(std::uint64_t seed);

/// Buckets into 2k groups, takes the coordinate-wise median of buckets
/// k+1..2k as x0, prunes buckets 1..k around x0 and runs descent on them.
/// Throws InsufficientSamples when 2k > n.
EstimateReport estimate_mean(const DataSet& data, const EstimatorConfig& config, std::uint64_t seed);

}  // namespace rmean
