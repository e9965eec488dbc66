#include "rmean/spectral.hpp"

#include <cmath>

#include "rmean/random.hpp"

namespace rmean {

void WeightedMatrixView::validate() const {
  if (static_cast<Eigen::Index>(weights.size()) != rows.rows()) {
    throw InvalidArgument("WeightedMatrixView: weight count does not match row count");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("WeightedMatrixView: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("WeightedMatrixView: weights must sum to 1");
}

Vector WeightedMatrixView::gram_apply(const Vector& v) const {
  Vector u = rows * v;
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] *= weights[static_cast<std::size_t>(i)];
  return rows.transpose() * u;
}

double WeightedMatrixView::rayleigh(const Vector& v) const {
  const Vector u = rows * v;
  double total = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) total += weights[static_cast<std::size_t>(i)] * u[i] * u[i];
  return total;
}

std::size_t default_power_iterations(double power_iter_constant, std::size_t d) {
  const double raw = std::ceil(power_iter_constant * std::log(static_cast<double>(d) + 2.0));
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

PowerResult power_top_singular(const WeightedMatrixView& view, std::size_t iterations,
                               std::uint64_t seed) {
  view.validate();
  if (iterations == 0) throw InvalidArgument("power_top_singular: iterations must be positive");
  const Eigen::Index d = view.rows.cols();

  double energy = 0.0;
  for (Eigen::Index i = 0; i < view.rows.rows(); ++i) {
    energy += view.weights[static_cast<std::size_t>(i)] * view.rows.row(i).squaredNorm();
  }
  if (!(energy > 0.0)) throw ZeroMatrix("power_top_singular: all weighted rows are zero");

  Rng rng(seed);
  Vector v = random_unit_vector(rng, d);
  for (std::size_t it = 0; it < iterations; ++it) {
    Vector next = view.gram_apply(v);
    const double norm = next.norm();
    if (!(norm > 0.0)) {
      // Start landed in the null space; redraw.
      v = random_unit_vector(rng, d);
      continue;
    }
    v = next / norm;
  }
  return PowerResult{v, view.rayleigh(v)};
}

Vector SpanProjection::lift(const Vector& coords) const {
  if (identity) return coords;
  if (coords.size() != basis.cols()) throw InvalidArgument("SpanProjection::lift: wrong length");
  return basis * coords;
}

SpanProjection project_to_span(const BucketMeans& means) {
  SpanProjection out;
  const Eigen::Index k = means.means.rows();
  const Eigen::Index d = means.means.cols();
  if (d <= k) {
    out.reduced = means;
    out.identity = true;
    return out;
  }

  const double largest = means.means.rowwise().norm().maxCoeff();
  const double tolerance = 1e-10 * largest;
  std::vector<Vector> columns;
  columns.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    Vector v = means.means.row(i).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : columns) v -= q.dot(v) * q;
    }
    const double norm = v.norm();
    if (norm > tolerance) columns.push_back(v / norm);
  }
  // An all-zero input still needs a one-dimensional coordinate system.
  if (columns.empty()) columns.push_back(Vector::Unit(d, 0));

  out.identity = false;
  out.basis.resize(d, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) out.basis.col(static_cast<Eigen::Index>(c)) = columns[c];
  out.reduced.means = means.means * out.basis;
  // The center lives in ambient coordinates and is not carried over.
  out.reduced.scale = means.scale;
  return out;
}

}  // namespace rmean
