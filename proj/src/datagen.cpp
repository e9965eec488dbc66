#include "rmean/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rmean/random.hpp"

namespace rmean {

Family parse_family(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "student_t") return Family::student_t;
  if (name == "pareto_symmetrized" || name == "pareto") return Family::pareto_symmetrized;
  if (name == "lognormal_centered" || name == "lognormal") return Family::lognormal_centered;
  throw InvalidArgument("unknown distribution family '" + name + "'");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::gaussian: return "gaussian";
    case Family::student_t: return "student_t";
    case Family::pareto_symmetrized: return "pareto_symmetrized";
    case Family::lognormal_centered: return "lognormal_centered";
  }
  return "unknown";
}

void DistributionSpec::validate() const {
  if (true_mean.size() < 1) throw InvalidArgument("DistributionSpec: empty mean");
  if (!true_mean.allFinite()) throw InvalidArgument("DistributionSpec: non-finite mean");
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("DistributionSpec: scale must be finite and nonnegative");
  }
  if ((family == Family::student_t || family == Family::pareto_symmetrized) &&
      !(tail_parameter > 2.0)) {
    throw InvalidArgument("DistributionSpec: tail parameter must exceed 2 for finite covariance");
  }
}

double DistributionSpec::coordinate_variance() const {
  const double s2 = scale * scale;
  switch (family) {
    case Family::gaussian: return s2;
    case Family::student_t: return s2 * tail_parameter / (tail_parameter - 2.0);
    // Random sign times Pareto(x_m = 1, alpha): E[X^2] = alpha / (alpha - 2).
    case Family::pareto_symmetrized: return s2 * tail_parameter / (tail_parameter - 2.0);
    // exp(N(0,1)) - sqrt(e): variance (e - 1) e.
    case Family::lognormal_centered: return s2 * (std::exp(1.0) - 1.0) * std::exp(1.0);
  }
  return 0.0;
}

SampledData sample_dataset(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw InvalidArgument("sample_dataset: n must be positive");
  const Eigen::Index d = spec.true_mean.size();
  Rng rng(seed);
  Matrix samples(static_cast<Eigen::Index>(n), d);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::student_t_distribution<double> student(spec.family == Family::student_t ? spec.tail_parameter
                                                                                : 3.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double lognormal_mean = std::exp(0.5);

  auto draw = [&]() -> double {
    switch (spec.family) {
      case Family::gaussian: return normal(rng);
      case Family::student_t: return student(rng);
      case Family::pareto_symmetrized: {
        const double u = 1.0 - uniform(rng);  // (0, 1]
        const double magnitude = std::pow(u, -1.0 / spec.tail_parameter);
        return uniform(rng) < 0.5 ? -magnitude : magnitude;
      }
      case Family::lognormal_centered: return std::exp(normal(rng)) - lognormal_mean;
    }
    return 0.0;
  };

  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      samples(i, j) = spec.true_mean[j] + spec.scale * draw();
    }
  }

  const double variance = spec.coordinate_variance();
  GroundTruth truth{spec.true_mean, variance * static_cast<double>(d), variance};
  return SampledData{DataSet(std::move(samples)), std::move(truth)};
}

Placement parse_placement(const std::string& name) {
  if (name == "cluster_at_distance" || name == "cluster") return Placement::cluster_at_distance;
  if (name == "coordinate_spike" || name == "spike") return Placement::coordinate_spike;
  throw InvalidArgument("unknown contamination placement '" + name + "'");
}

std::string placement_name(Placement placement) {
  return placement == Placement::cluster_at_distance ? "cluster_at_distance" : "coordinate_spike";
}

ContaminatedData contaminate(const DataSet& data, const ContaminationSpec& spec, std::uint64_t seed) {
  const std::size_t n = data.n();
  const Eigen::Index d = static_cast<Eigen::Index>(data.d());
  if (spec.count > n) throw InvalidArgument("contaminate: count exceeds n");
  if (spec.count == 0) return ContaminatedData{data, {}};
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
    throw InvalidArgument("contaminate: radius must be positive");
  }
  const Vector anchor = spec.anchor ? *spec.anchor : Vector::Zero(d);
  if (anchor.size() != d) throw InvalidArgument("contaminate: anchor has wrong length");

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.count));
  std::sort(rows.begin(), rows.end());

  Vector point = anchor;
  if (spec.placement == Placement::cluster_at_distance) {
    point.array() += spec.radius / std::sqrt(static_cast<double>(d));
  } else {
    std::uniform_int_distribution<Eigen::Index> coordinate(0, d - 1);
    point[coordinate(rng)] += spec.radius;
  }

  Matrix samples = data.samples();
  for (std::size_t r : rows) samples.row(static_cast<Eigen::Index>(r)) = point.transpose();
  return ContaminatedData{DataSet(std::move(samples)), std::move(rows)};
}

}  // namespace rmean
