// rmean: command-line front end for the spectral robust mean estimator.
//
//   rmean estimate --input FILE --delta D [--k K] [--seed S] --output report.json [--set key=value]...
//   rmean datagen  --family F --n N --d D [--dof X] [--contaminate COUNT --radius R] --seed S --output FILE
//   rmean bench    --plan plan.json --output-dir DIR
//   rmean fhp      --input FILE --margin R --seed S
//
// Exit codes: 0 success, 2 invalid input, 3 insufficient samples.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rmean/benchmark.hpp"
#include "rmean/core.hpp"
#include "rmean/dataset_io.hpp"
#include "rmean/datagen.hpp"
#include "rmean/descent.hpp"
#include "rmean/fhp.hpp"
#include "rmean/random.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitInsufficient = 3;

void apply_overrides(rmean::EstimatorConfig& config, const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw rmean::InvalidArgument("--set expects key=value, got '" + a + "'");
    config.set(a.substr(0, eq), a.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral robust mean estimation"};
  app.require_subcommand(1);

  // estimate
  std::string est_input;
  std::string est_output;
  double est_delta = 0.1;
  std::size_t est_k = 0;
  std::uint64_t est_seed = 0;
  std::vector<std::string> est_set;
  auto* estimate = app.add_subcommand("estimate", "Estimate the mean of a dataset file");
  estimate->add_option("--input", est_input, "Dataset file")->required();
  estimate->add_option("--delta", est_delta, "Failure probability in (0, 1]")->required();
  estimate->add_option("--k", est_k, "Bucket count per half (overrides the delta formula)");
  estimate->add_option("--seed", est_seed, "Root seed");
  estimate->add_option("--output", est_output, "Report JSON path")->required();
  estimate->add_option("--set", est_set, "Config override key=value (repeatable)");

  // datagen
  std::string gen_family = "gaussian";
  std::size_t gen_n = 0;
  std::size_t gen_d = 0;
  double gen_dof = 0.0;
  double gen_scale = 1.0;
  double gen_mean = 0.0;
  std::size_t gen_contaminate = 0;
  double gen_radius = 1.0;
  std::string gen_placement = "cluster_at_distance";
  std::uint64_t gen_seed = 0;
  std::string gen_output;
  auto* datagen = app.add_subcommand("datagen", "Write a synthetic dataset and its ground truth");
  datagen->add_option("--family", gen_family, "gaussian | student_t | pareto_symmetrized | lognormal_centered");
  datagen->add_option("--n", gen_n, "Sample count")->required();
  datagen->add_option("--d", gen_d, "Dimension")->required();
  datagen->add_option("--dof", gen_dof, "Tail parameter (student_t dof, pareto shape)");
  datagen->add_option("--scale", gen_scale, "Per-coordinate scale");
  datagen->add_option("--mean", gen_mean, "Value of every coordinate of the true mean");
  auto* contaminate_opt = datagen->add_option("--contaminate", gen_contaminate, "Adversarial row count");
  datagen->add_option("--radius", gen_radius, "Adversarial distance from the true mean")->needs(contaminate_opt);
  datagen->add_option("--placement", gen_placement, "cluster_at_distance | coordinate_spike");
  datagen->add_option("--seed", gen_seed, "Root seed")->required();
  datagen->add_option("--output", gen_output, "Dataset file")->required();

  // bench
  std::string bench_plan;
  std::string bench_dir;
  std::size_t bench_threads = 0;
  std::vector<std::string> bench_set;
  auto* bench = app.add_subcommand("bench", "Run a benchmark plan");
  bench->add_option("--plan", bench_plan, "Plan JSON")->required();
  bench->add_option("--output-dir", bench_dir, "Directory for results.csv, summary.csv, results.json")->required();
  bench->add_option("--threads", bench_threads, "Worker threads (0 = hardware)");
  bench->add_option("--set", bench_set, "Config override applied to every scenario");

  // fhp
  std::string fhp_input;
  double fhp_margin = 0.0;
  std::uint64_t fhp_seed = 0;
  double fhp_eta = rmean::kFhpDefaultEta;
  double fhp_constant = 10.0;
  std::size_t fhp_trials = 100;
  auto* fhp = app.add_subcommand("fhp", "Bicriteria furthest hyperplane on a points file");
  fhp->add_option("--input", fhp_input, "Points file (rows of norm <= 1)")->required();
  fhp->add_option("--margin", fhp_margin, "Promised margin r")->required();
  fhp->add_option("--seed", fhp_seed, "Root seed");
  fhp->add_option("--eta", fhp_eta, "MWU step size in (0, 1)");
  fhp->add_option("--iteration-constant", fhp_constant, "c in T = ceil(c ln k / r^2)");
  fhp->add_option("--round-trials", fhp_trials, "Maximum rounding trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*estimate) {
      rmean::EstimatorConfig config;
      config.delta = est_delta;
      if (est_k > 0) config.k_override = est_k;
      config.rng_seed = est_seed;
      apply_overrides(config, est_set);
      config.validate();
      const rmean::DataSet data = rmean::read_dataset(est_input);
      const rmean::EstimateReport report = rmean::estimate_mean(data, config, config.rng_seed);
      std::ofstream out(est_output, std::ios::trunc);
      if (!out) throw rmean::InvalidArgument("cannot write " + est_output);
      out << rmean::report_to_json(report, config).dump(2) << '\n';
    } else if (*datagen) {
      rmean::DistributionSpec spec;
      spec.family = rmean::parse_family(gen_family);
      if (gen_d == 0) throw rmean::InvalidArgument("--d must be positive");
      spec.true_mean = rmean::Vector::Constant(static_cast<Eigen::Index>(gen_d), gen_mean);
      spec.scale = gen_scale;
      spec.tail_parameter = gen_dof;
      rmean::SampledData sampled = rmean::sample_dataset(spec, gen_n, rmean::mix_seed(gen_seed, 0));
      rmean::ContaminationSpec cspec;
      cspec.count = gen_contaminate;
      cspec.radius = gen_radius;
      cspec.placement = rmean::parse_placement(gen_placement);
      cspec.anchor = spec.true_mean;
      const rmean::ContaminatedData contaminated =
          rmean::contaminate(sampled.data, cspec, rmean::mix_seed(gen_seed, 1));
      rmean::write_dataset(gen_output, contaminated.data);
      nlohmann::json extra = {{"family", rmean::family_name(spec.family)},
                              {"n", gen_n},
                              {"d", gen_d},
                              {"scale", spec.scale},
                              {"tail_parameter", spec.tail_parameter},
                              {"seed", gen_seed},
                              {"adversarial_rows", contaminated.adversarial_rows}};
      rmean::write_ground_truth(rmean::ground_truth_path(gen_output), sampled.truth, extra);
    } else if (*bench) {
      std::ifstream in(bench_plan);
      if (!in) throw rmean::InvalidArgument("cannot open " + bench_plan);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw rmean::InvalidArgument(std::string("plan: ") + e.what());
      }
      rmean::BenchmarkPlan plan = rmean::plan_from_json(j);
      if (bench_threads > 0) plan.threads = bench_threads;
      for (auto& s : plan.scenarios) apply_overrides(s.config, bench_set);
      const rmean::BenchmarkResult result = rmean::run_benchmark(plan);
      rmean::write_benchmark(result, bench_dir);
      std::cout << rmean::summary_csv(result);
    } else if (*fhp) {
      const rmean::DataSet points = rmean::read_dataset(fhp_input);
      rmean::BucketMeans rows;
      rows.means = points.samples();
      const std::size_t T = rmean::fhp_iteration_count(points.n(), fhp_margin, fhp_constant);
      const auto cert = rmean::fhp_solve(rows, fhp_margin, fhp_eta, T, fhp_trials, fhp_seed);
      nlohmann::json out;
      out["iterations"] = T;
      if (cert) {
        out["status"] = "ok";
        out["certificate"] = rmean::to_json(*cert);
      } else {
        out["status"] = "fail";
      }
      std::cout << out.dump(2) << '\n';
    }
  } catch (const rmean::InsufficientSamples& e) {
    std::cerr << "insufficient samples: " << e.what() << '\n';
    return kExitInsufficient;
  } catch (const rmean::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
