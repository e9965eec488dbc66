#pragma once

// Shared domain types for the spectral robust mean estimator.

#include <Eigen/Dense>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmean {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// 2k > n: not enough samples for the requested confidence.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

/// Every bucket mean coincides with the centering point, so no scale exists.
class DegenerateData : public Error {
 public:
  using Error::Error;
};

class ZeroMatrix : public Error {
 public:
  using Error::Error;
};

class InfeasibleCap : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Data containers
// ---------------------------------------------------------------------------

/// n x d sample matrix. Construction validates shape and finiteness.
class DataSet {
 public:
  explicit DataSet(Matrix samples);

  const Matrix& samples() const { return samples_; }
  std::size_t n() const { return static_cast<std::size_t>(samples_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(samples_.cols()); }

 private:
  Matrix samples_;
};

/// k' x d matrix of group averages. `center` and `scale` are set once the rows
/// have been mapped to (Z_i - center) / scale.
struct BucketMeans {
  Matrix means;
  std::optional<Vector> center;
  std::optional<double> scale;

  std::size_t count() const { return static_cast<std::size_t>(means.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(means.cols()); }
  bool is_scaled() const { return scale.has_value(); }

  /// Throws InvalidArgument if any invariant is broken.
  void validate() const;
};

inline constexpr double kScaledNormSlack = 1e-9;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct EstimatorConfig {
  double delta = 0.1;
  std::optional<std::size_t> k_override;
  double bucket_constant = 3600.0;
  double eta = 1.0 / 8000.0;
  double prune_fraction = 0.1;
  double smooth_cap_numerator = 4.0;
  double mwu_progress_factor = 0.1;
  double descent_iter_constant = 4.0;
  double inner_iter_constant = 40.0;
  double round_trial_constant = 10.0;
  double power_iter_constant = 8.0;
  std::size_t margin_search_steps = 20;
  std::size_t margin_refine_probes = 5;
  std::size_t inner_iter_max = 5000;
  double round_accept_fraction = 0.6;
  double grad_sign_fraction = 0.5;
  double certificate_fraction = 0.45;
  std::uint64_t rng_seed = 0;

  void validate() const;

  /// Assigns one field from its textual form, e.g. ("eta", "0.001").
  /// Throws InvalidArgument on an unknown key or unparsable value.
  void set(const std::string& key, const std::string& value);

  /// Every field as name -> printable value, in declaration order.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

// ---------------------------------------------------------------------------
// Sub-gaussian target radius
// ---------------------------------------------------------------------------

struct SubgaussianRadius {
  double trace_term = 0.0;
  double operator_term = 0.0;
  double r_delta = 0.0;
};

/// sqrt(Tr/n) + sqrt(||Sigma|| ln(1/delta) / n).
SubgaussianRadius compute_r_delta(double sigma_trace, double sigma_opnorm, std::size_t n,
                                  double delta);

/// Number of buckets per half: k_override, else ceil(bucket_constant * ln(1/delta)),
/// floored at 1. Throws InsufficientSamples when 2k > n.
std::size_t resolve_k(const EstimatorConfig& config, std::size_t n);

/// ceil(c_des * log2(d + 1)), at least 1.
std::size_t descent_iterations(const EstimatorConfig& config, std::size_t d);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct IterationRecord {
  std::size_t t = 0;
  /// The iterate at which d_t and g_t were evaluated.
  Vector x_t;
  double d_t = 0.0;
  Vector g_t;
  double margin_theta = 0.0;
  bool approx_bregman_failed = false;
  bool degenerate = false;
};

struct EstimateReport {
  Vector estimate;
  Vector initial_guess;
  std::vector<IterationRecord> iterations;
  std::size_t chosen_iteration = 0;
  bool terminated_early = false;
  std::map<std::string, double> wall_times;
};

/// Index of the first minimum d_t.
std::size_t argmin_distance(const std::vector<IterationRecord>& iterations);

class PhaseTimer {
 public:
  PhaseTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace rmean
