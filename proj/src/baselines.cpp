#include "rmean/baselines.hpp"

#include <cmath>

#include "rmean/bucketing.hpp"

namespace rmean {

Vector empirical_mean(const DataSet& data) {
  const Matrix& x = data.samples();
  Vector out(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double sum = 0.0;
    double compensation = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double v = x(i, j);
      const double t = sum + v;
      if (std::abs(sum) >= std::abs(v)) compensation += (sum - t) + v;
      else compensation += (v - t) + sum;
      sum = t;
    }
    out[j] = (sum + compensation) / static_cast<double>(x.rows());
  }
  return out;
}

double geometric_median_objective(const Matrix& rows, const Vector& y) {
  return (rows.rowwise() - y.transpose()).rowwise().norm().sum();
}

GeometricMedianResult geometric_median(const BucketMeans& means, double tolerance, std::size_t max_iter) {
  if (means.count() == 0) throw InvalidArgument("geometric_median: no rows");
  if (!(tolerance > 0.0)) throw InvalidArgument("geometric_median: tolerance must be positive");
  if (max_iter == 0) throw InvalidArgument("geometric_median: max_iter must be positive");
  const Matrix& z = means.means;

  const double scale = std::max(1.0, z.cwiseAbs().maxCoeff());
  const double floor = 1e-12 * scale;

  GeometricMedianResult best;
  best.point = coordinate_median_of_means(means);
  best.objective = geometric_median_objective(z, best.point);

  Vector y = best.point;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    // Vardi-Zhang step: rows within `floor` of y count as coincident and
    // pull y toward the Weiszfeld point only when the others outweigh them.
    Vector numerator = Vector::Zero(z.cols());
    Vector pull = Vector::Zero(z.cols());
    double denominator = 0.0;
    double coincident = 0.0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const Vector diff = z.row(i).transpose() - y;
      const double dist = diff.norm();
      if (dist <= floor) {
        coincident += 1.0;
        continue;
      }
      numerator += z.row(i).transpose() / dist;
      denominator += 1.0 / dist;
      pull += diff / dist;
    }
    if (denominator == 0.0) break;
    const Vector weiszfeld = numerator / denominator;
    const Vector before = y;
    if (coincident == 0.0) {
      y = weiszfeld;
    } else {
      const double r = pull.norm();
      if (r <= coincident) {
        best.converged = true;
        break;
      }
      const double keep = coincident / r;
      y = (1.0 - keep) * weiszfeld + keep * y;
    }
    best.iterations = it;
    if ((y - before).norm() <= tolerance * (1.0 + y.norm())) {
      best.converged = true;
      break;
    }
  }
  // Weiszfeld steps never increase the objective; the guard only absorbs rounding.
  const double objective = geometric_median_objective(z, y);
  if (objective <= best.objective) {
    best.objective = objective;
    best.point = y;
  }
  return best;
}

}  // namespace rmean
