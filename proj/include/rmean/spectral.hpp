#pragma once

// Top right singular vector of a row-weighted matrix by power iteration, and
// projection of bucket means onto their row span.

#include <cstdint>
#include <span>

#include "rmean/core.hpp"

namespace rmean {

/// The matrix A whose i-th row is sqrt(weights[i]) * rows.row(i). A is never
/// materialized; products go through rows and weights directly.
struct WeightedMatrixView {
  const Matrix& rows;
  std::span<const double> weights;

  /// Returns A^T A v = sum_i w_i <Z_i, v> Z_i.
  Vector gram_apply(const Vector& v) const;
  /// sum_i w_i <Z_i, v>^2 = ||A v||^2.
  double rayleigh(const Vector& v) const;
  void validate() const;
};

struct PowerResult {
  Vector direction;
  double value = 0.0;
};

/// ceil(c_p * ln(d + 2)).
std::size_t default_power_iterations(double power_iter_constant, std::size_t d);

/// Power iteration v <- A^T (A v) / ||.|| from a seeded standard normal start.
/// Throws ZeroMatrix if every weighted row vanishes.
PowerResult power_top_singular(const WeightedMatrixView& view, std::size_t iterations,
                               std::uint64_t seed);

struct SpanProjection {
  /// Rows expressed in the orthonormal basis (k' x r); scale copied, center dropped.
  BucketMeans reduced;
  /// d x r orthonormal columns; empty when `identity` is set.
  Matrix basis;
  bool identity = true;

  /// Maps a coordinate vector of length r back to ambient R^d.
  Vector lift(const Vector& coords) const;
};

/// When d > k', re-expresses the rows in an orthonormal basis of their span
/// (Gram-Schmidt with one reorthogonalization pass, rank tolerance 1e-10 of
/// the largest row norm). Otherwise returns the input unchanged.
SpanProjection project_to_span(const BucketMeans& means);

}  // namespace rmean
