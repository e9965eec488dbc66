#include "rmean/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "rmean/baselines.hpp"
#include "rmean/bucketing.hpp"
#include "rmean/descent.hpp"
#include "rmean/random.hpp"

namespace rmean {

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "spectral") return EstimatorKind::spectral;
  if (name == "empirical") return EstimatorKind::empirical;
  if (name == "geometric_median") return EstimatorKind::geometric_median;
  if (name == "coordinate_mom") return EstimatorKind::coordinate_mom;
  throw InvalidArgument("unknown estimator '" + name + "'");
}

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::spectral: return "spectral";
    case EstimatorKind::empirical: return "empirical";
    case EstimatorKind::geometric_median: return "geometric_median";
    case EstimatorKind::coordinate_mom: return "coordinate_mom";
  }
  return "unknown";
}

void BenchmarkPlan::validate() const {
  if (scenarios.empty()) throw InvalidArgument("plan: no scenarios");
  std::set<std::string> ids;
  for (const Scenario& s : scenarios) {
    if (!ids.insert(s.id).second) throw InvalidArgument("plan: duplicate scenario id '" + s.id + "'");
    if (s.trials == 0) throw InvalidArgument("plan: scenario '" + s.id + "' needs trials >= 1");
    if (s.n == 0) throw InvalidArgument("plan: scenario '" + s.id + "' needs n >= 1");
    if (s.estimators.empty()) throw InvalidArgument("plan: scenario '" + s.id + "' lists no estimators");
    if (s.contamination.count > s.n) throw InvalidArgument("plan: contamination count exceeds n");
    s.distribution.validate();
    s.config.validate();
    if (s.theorem_regime) {
      const std::size_t k = resolve_k(s.config, s.n);
      if (200 * s.contamination.count > k) {
        throw InvalidArgument("plan: scenario '" + s.id + "' exceeds k/200 adversarial points");
      }
    }
  }
}

BenchmarkPlan plan_from_json(const nlohmann::json& j) {
  BenchmarkPlan plan;
  try {
    plan.seed = j.value("seed", std::uint64_t{0});
    plan.threads = j.value("threads", std::size_t{0});
    for (const auto& js : j.at("scenarios")) {
      Scenario s;
      s.id = js.at("id").get<std::string>();
      s.n = js.at("n").get<std::size_t>();
      const auto d = js.at("d").get<Eigen::Index>();
      if (d < 1) throw InvalidArgument("plan: d must be positive");
      s.distribution.family = parse_family(js.value("family", std::string("gaussian")));
      const auto mean = js.value("mean", nlohmann::json(0.0));
      if (mean.is_array()) {
        if (static_cast<Eigen::Index>(mean.size()) != d) throw InvalidArgument("plan: mean length != d");
        s.distribution.true_mean.resize(d);
        for (Eigen::Index i = 0; i < d; ++i) s.distribution.true_mean[i] = mean[static_cast<std::size_t>(i)].get<double>();
      } else {
        s.distribution.true_mean = Vector::Constant(d, mean.get<double>());
      }
      s.distribution.scale = js.value("scale", 1.0);
      s.distribution.tail_parameter = js.value("tail_parameter", 0.0);
      s.config.delta = js.value("delta", s.config.delta);
      if (js.contains("k") && !js.at("k").is_null()) s.config.k_override = js.at("k").get<std::size_t>();
      if (js.contains("config")) {
        for (const auto& [key, value] : js.at("config").items()) {
          s.config.set(key, value.is_string() ? value.get<std::string>() : value.dump());
        }
      }
      if (js.contains("contamination")) {
        const auto& jc = js.at("contamination");
        s.contamination.count = jc.value("count", std::size_t{0});
        s.contamination.placement = parse_placement(jc.value("placement", std::string("cluster_at_distance")));
        s.contamination.radius = jc.value("radius", 1.0);
      }
      s.trials = js.value("trials", std::size_t{1});
      for (const auto& e : js.at("estimators")) s.estimators.push_back(parse_estimator(e.get<std::string>()));
      s.theorem_regime = js.value("theorem_regime", false);
      plan.scenarios.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("plan: ") + e.what());
  }
  plan.validate();
  return plan;
}

namespace {

struct TrialTask {
  std::size_t scenario = 0;
  std::size_t trial = 0;
};

std::vector<ResultRow> run_trial(const Scenario& s, std::size_t trial, std::uint64_t trial_seed) {
  std::vector<ResultRow> rows;
  auto base_row = [&](EstimatorKind kind) {
    ResultRow r;
    r.scenario = s.id;
    r.trial = trial;
    r.estimator = kind;
    return r;
  };

  std::optional<DataSet> data;
  try {
    SampledData sampled = sample_dataset(s.distribution, s.n, mix_seed(trial_seed, 0));
    ContaminationSpec spec = s.contamination;
    spec.anchor = s.distribution.true_mean;
    data = contaminate(sampled.data, spec, mix_seed(trial_seed, 1)).data;
  } catch (const std::exception&) {
    for (EstimatorKind kind : s.estimators) {
      ResultRow r = base_row(kind);
      r.status = "error";
      r.error = std::numeric_limits<double>::quiet_NaN();
      rows.push_back(r);
    }
    return rows;
  }

  const Vector& mu = s.distribution.true_mean;
  const std::uint64_t estimator_seed = mix_seed(trial_seed, 2);
  for (EstimatorKind kind : s.estimators) {
    ResultRow r = base_row(kind);
    PhaseTimer timer;
    try {
      Vector estimate;
      switch (kind) {
        case EstimatorKind::spectral: {
          const EstimateReport report = estimate_mean(*data, s.config, estimator_seed);
          estimate = report.estimate;
          r.k = resolve_k(s.config, s.n);
          r.iterations = report.iterations.size();
          r.chosen_iteration = report.chosen_iteration;
          for (const auto& rec : report.iterations) r.no_margin_iterations += rec.approx_bregman_failed ? 1 : 0;
          break;
        }
        case EstimatorKind::empirical:
          estimate = empirical_mean(*data);
          break;
        case EstimatorKind::geometric_median:
        case EstimatorKind::coordinate_mom: {
          // Same 2k buckets as the spectral pipeline.
          r.k = resolve_k(s.config, s.n);
          const BucketMeans buckets = bucket_means(*data, 2 * r.k, pipeline_seeds(estimator_seed).bucketing);
          estimate = kind == EstimatorKind::geometric_median ? geometric_median(buckets).point
                                                             : coordinate_median_of_means(buckets);
          break;
        }
      }
      r.error = (estimate - mu).norm();
    } catch (const InsufficientSamples&) {
      r.status = "insufficient_samples";
      r.error = std::numeric_limits<double>::quiet_NaN();
    } catch (const DegenerateData&) {
      r.status = "degenerate_data";
      r.error = std::numeric_limits<double>::quiet_NaN();
    } catch (const std::exception&) {
      r.status = "error";
      r.error = std::numeric_limits<double>::quiet_NaN();
    }
    r.wall_seconds = timer.seconds();
    rows.push_back(r);
  }
  return rows;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(values.size() - 1, lo + 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

BenchmarkResult run_benchmark(const BenchmarkPlan& plan) {
  plan.validate();
  std::vector<TrialTask> tasks;
  for (std::size_t s = 0; s < plan.scenarios.size(); ++s) {
    for (std::size_t t = 0; t < plan.scenarios[s].trials; ++t) tasks.push_back({s, t});
  }

  std::vector<std::vector<ResultRow>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const TrialTask& task = tasks[i];
      const std::uint64_t seed = mix_seed(mix_seed(plan.seed, task.scenario), task.trial);
      slots[i] = run_trial(plan.scenarios[task.scenario], task.trial, seed);
    }
  };
  std::size_t threads = plan.threads ? plan.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, tasks.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  BenchmarkResult result;
  for (auto& slot : slots) {
    for (auto& row : slot) result.rows.push_back(std::move(row));
  }

  for (const Scenario& s : plan.scenarios) {
    for (EstimatorKind kind : s.estimators) {
      SummaryRow sum;
      sum.scenario = s.id;
      sum.estimator = kind;
      std::vector<double> errors;
      double wall = 0.0;
      for (const ResultRow& r : result.rows) {
        if (r.scenario != s.id || r.estimator != kind) continue;
        wall += r.wall_seconds;
        if (r.status == "ok") errors.push_back(r.error);
        else ++sum.failed;
      }
      sum.ok = errors.size();
      sum.median_error = quantile(errors, 0.5);
      sum.q25_error = quantile(errors, 0.25);
      sum.q75_error = quantile(errors, 0.75);
      sum.q90_error = quantile(errors, 0.9);
      sum.mean_wall_seconds = wall / static_cast<double>(s.trials);
      result.summary.push_back(sum);
    }
  }
  return result;
}

std::string results_csv(const BenchmarkResult& result) {
  std::ostringstream out;
  out << "scenario,trial,estimator,status,error,k,iterations,chosen_iteration,no_margin_iterations\n";
  for (const ResultRow& r : result.rows) {
    out << r.scenario << ',' << r.trial << ',' << estimator_name(r.estimator) << ',' << r.status << ','
        << format_number(r.error) << ',' << r.k << ',' << r.iterations << ',' << r.chosen_iteration << ','
        << r.no_margin_iterations << '\n';
  }
  return out.str();
}

std::string summary_csv(const BenchmarkResult& result) {
  std::ostringstream out;
  out << "scenario,estimator,ok,failed,median_error,q25_error,q75_error,q90_error\n";
  for (const SummaryRow& s : result.summary) {
    out << s.scenario << ',' << estimator_name(s.estimator) << ',' << s.ok << ',' << s.failed << ','
        << format_number(s.median_error) << ',' << format_number(s.q25_error) << ','
        << format_number(s.q75_error) << ',' << format_number(s.q90_error) << '\n';
  }
  return out.str();
}

nlohmann::json results_json(const BenchmarkResult& result) {
  auto number = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultRow& r : result.rows) {
    rows.push_back({{"scenario", r.scenario},
                    {"trial", r.trial},
                    {"estimator", estimator_name(r.estimator)},
                    {"status", r.status},
                    {"error", number(r.error)},
                    {"wall_seconds", r.wall_seconds},
                    {"k", r.k},
                    {"iterations", r.iterations},
                    {"chosen_iteration", r.chosen_iteration},
                    {"no_margin_iterations", r.no_margin_iterations}});
  }
  nlohmann::json summary = nlohmann::json::array();
  for (const SummaryRow& s : result.summary) {
    summary.push_back({{"scenario", s.scenario},
                       {"estimator", estimator_name(s.estimator)},
                       {"ok", s.ok},
                       {"failed", s.failed},
                       {"median_error", number(s.median_error)},
                       {"q25_error", number(s.q25_error)},
                       {"q75_error", number(s.q75_error)},
                       {"q90_error", number(s.q90_error)},
                       {"mean_wall_seconds", s.mean_wall_seconds}});
  }
  return {{"rows", rows}, {"summary", summary}};
}

void write_benchmark(const BenchmarkResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + (dir / name).string());
    out << text;
  };
  write("results.csv", results_csv(result));
  write("summary.csv", summary_csv(result));
  write("results.json", results_json(result).dump(2) + "\n");
}

}  // namespace rmean
