#pragma once

// Benchmark plans, the trial sweep and result persistence.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmean/core.hpp"
#include "rmean/datagen.hpp"

namespace rmean {

enum class EstimatorKind { spectral, empirical, geometric_median, coordinate_mom };

EstimatorKind parse_estimator(const std::string& name);
std::string estimator_name(EstimatorKind kind);

struct Scenario {
  std::string id;
  DistributionSpec distribution;
  std::size_t n = 0;
  ContaminationSpec contamination;
  std::size_t trials = 1;
  std::vector<EstimatorKind> estimators;
  /// delta and k_override live here together with any other overrides.
  EstimatorConfig config;
  /// When set, validation enforces count <= k / 200.
  bool theorem_regime = false;
};

struct BenchmarkPlan {
  std::vector<Scenario> scenarios;
  std::uint64_t seed = 0;
  /// Worker count; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

/// Scenario keys: id, family, n, d, mean (number or array), scale,
/// tail_parameter, delta, k, contamination {count, placement, radius},
/// trials, estimators, theorem_regime, config {key: value}.
BenchmarkPlan plan_from_json(const nlohmann::json& j);

struct ResultRow {
  std::string scenario;
  std::size_t trial = 0;
  EstimatorKind estimator = EstimatorKind::empirical;
  /// "ok", "insufficient_samples", "degenerate_data" or "error".
  std::string status = "ok";
  double error = 0.0;
  double wall_seconds = 0.0;
  std::size_t k = 0;
  std::size_t iterations = 0;
  std::size_t chosen_iteration = 0;
  std::size_t no_margin_iterations = 0;
};

struct SummaryRow {
  std::string scenario;
  EstimatorKind estimator = EstimatorKind::empirical;
  std::size_t ok = 0;
  std::size_t failed = 0;
  double median_error = 0.0;
  double q25_error = 0.0;
  double q75_error = 0.0;
  double q90_error = 0.0;
  double mean_wall_seconds = 0.0;
};

struct BenchmarkResult {
  /// Ordered by (scenario, trial, estimator) as listed in the plan.
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
};

/// Trial seed: mix_seed(mix_seed(plan.seed, scenario index), trial).
BenchmarkResult run_benchmark(const BenchmarkPlan& plan);

/// Linear-interpolation quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Per-trial rows without wall times, so identical plans give identical bytes.
std::string results_csv(const BenchmarkResult& result);
std::string summary_csv(const BenchmarkResult& result);
nlohmann::json results_json(const BenchmarkResult& result);

/// Writes results.csv, summary.csv and results.json into `dir`.
void write_benchmark(const BenchmarkResult& result, const std::filesystem::path& dir);

}  // namespace rmean
