#pragma once

// Synthetic heavy-tailed and contaminated datasets with known ground truth.
//
// Sampling is isotropic per coordinate, so the covariance is diagonal with a
// single variance v and the ground truth is Tr = d * v, ||Sigma|| = v.

#include <cstdint>
#include <string>
#include <vector>

#include "rmean/core.hpp"

namespace rmean {

enum class Family { gaussian, student_t, pareto_symmetrized, lognormal_centered };

Family parse_family(const std::string& name);
std::string family_name(Family family);

struct DistributionSpec {
  Family family = Family::gaussian;
  Vector true_mean;
  double scale = 1.0;
  /// Degrees of freedom for student_t, shape for pareto_symmetrized.
  double tail_parameter = 0.0;

  void validate() const;
  /// Per-coordinate variance of the family.
  double coordinate_variance() const;
};

struct GroundTruth {
  Vector mean;
  double sigma_trace = 0.0;
  double sigma_opnorm = 0.0;
};

struct SampledData {
  DataSet data;
  GroundTruth truth;
};

SampledData sample_dataset(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

enum class Placement { cluster_at_distance, coordinate_spike };

Placement parse_placement(const std::string& name);
std::string placement_name(Placement placement);

/// Adversarial rows replace `count` seeded-random rows of the data.
///
/// cluster_at_distance: every adversarial row equals anchor + R * 1/sqrt(d).
/// coordinate_spike:    every adversarial row equals anchor + R * e_j for one
///                      seeded coordinate j.
struct ContaminationSpec {
  std::size_t count = 0;
  Placement placement = Placement::cluster_at_distance;
  double radius = 1.0;
  /// Reference point the radius is measured from; the origin when absent.
  std::optional<Vector> anchor;
};

struct ContaminatedData {
  DataSet data;
  /// Sorted indices of replaced rows.
  std::vector<std::size_t> adversarial_rows;
};

ContaminatedData contaminate(const DataSet& data, const ContaminationSpec& spec, std::uint64_t seed);

}  // namespace rmean
