#pragma once

// Reference estimators used for benchmark comparison.

#include "rmean/core.hpp"

namespace rmean {

/// Column averages with compensated (Neumaier) summation.
Vector empirical_mean(const DataSet& data);

struct GeometricMedianResult {
  Vector point;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// sum_i ||y - Z_i||.
double geometric_median_objective(const Matrix& rows, const Vector& y);

/// Weiszfeld iteration from the coordinate-wise median. Distances below
/// 1e-12 * scale mark a coincident data point, handled by the Vardi-Zhang step.
/// Returns the last iterate unless the start scores better; `converged` is set
/// once a step moves less than tolerance * (1 + ||y||).
GeometricMedianResult geometric_median(const BucketMeans& means, double tolerance = 1e-12,
                                       std::size_t max_iter = 1000);

}  // namespace rmean
