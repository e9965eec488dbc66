#include "rmean/descent.hpp"

#include "rmean/bucketing.hpp"
#include "rmean/pruning.hpp"
#include "rmean/random.hpp"

namespace rmean {

EstimateReport run_descent(const Vector& x0, std::size_t iterations, double eta, const DescentOracle& oracle) {
  if (iterations == 0) throw InvalidArgument("descent: need at least one iteration");
  EstimateReport report;
  report.initial_guess = x0;

  Vector x = x0;
  for (std::size_t t = 0; t < iterations; ++t) {
    InnerMaxProbe step = oracle(x, t);
    IterationRecord record;
    record.t = t;
    record.x_t = x;
    record.d_t = step.distance;
    record.g_t = step.gradient;
    record.margin_theta = step.theta;
    record.approx_bregman_failed = step.no_margin;
    record.degenerate = step.degenerate;
    report.iterations.push_back(record);

    if (step.distance < 1e-12 * (1.0 + x.norm())) {
      report.terminated_early = t + 1 < iterations;
      break;
    }
    x += eta * step.distance * step.gradient;
  }

  report.chosen_iteration = argmin_distance(report.iterations);
  report.estimate = report.iterations[report.chosen_iteration].x_t;
  return report;
}

EstimateReport descent(const BucketMeans& pruned, const Vector& x0, const EstimatorConfig& config,
                       std::uint64_t seed) {
  config.validate();
  if (pruned.count() == 0) throw InvalidArgument("descent: no bucket means");
  if (x0.size() != pruned.means.cols()) throw InvalidArgument("descent: x0 has wrong length");

  DescentOracle oracle = [&](const Vector& x, std::size_t t) {
    try {
      return probe_inner_max(pruned, x, config, mix_seed(seed, t));
    } catch (const DegenerateData&) {
      InnerMaxProbe fixed_point;
      fixed_point.degenerate = true;
      fixed_point.gradient = Vector::Unit(x.size(), 0);
      return fixed_point;
    }
  };
  PhaseTimer timer;
  EstimateReport report = run_descent(x0, descent_iterations(config, pruned.dim()), config.eta, oracle);
  report.wall_times["descent"] = timer.seconds();
  return report;
}

PipelineSeeds pipeline_seeds(std::uint64_t seed) {
  return PipelineSeeds{mix_seed(seed, 1), mix_seed(seed, 2)};
}

EstimateReport estimate_mean(const DataSet& data, const EstimatorConfig& config, std::uint64_t seed) {
  PhaseTimer total;
  const std::size_t k = resolve_k(config, data.n());
  const PipelineSeeds seeds = pipeline_seeds(seed);

  PhaseTimer phase;
  const BucketMeans all = bucket_means(data, 2 * k, seeds.bucketing);
  const double t_bucket = phase.seconds();

  phase = PhaseTimer();
  const Vector x0 = coordinate_median_of_means(select_rows(all, k, k));
  const double t_init = phase.seconds();

  phase = PhaseTimer();
  const PruneResult pruned = prune(select_rows(all, 0, k), x0, config.prune_fraction);
  const double t_prune = phase.seconds();

  EstimateReport report = descent(pruned.kept, x0, config, seeds.descent);
  report.wall_times["bucketing"] = t_bucket;
  report.wall_times["initial_guess"] = t_init;
  report.wall_times["prune"] = t_prune;
  report.wall_times["total"] = total.seconds();
  return report;
}

}  // namespace rmean
