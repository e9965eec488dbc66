#include <doctest.h>

#include <cmath>

#include "rmean/baselines.hpp"
#include "rmean/bucketing.hpp"
#include "rmean/datagen.hpp"
#include "rmean/descent.hpp"
#include "rmean/pruning.hpp"

using namespace rmean;

namespace {

// Oracle returning d = ||mu - x|| / ratio and a unit g with <g, (mu - x)/||mu - x||> = alignment.
DescentOracle scripted(const Vector& mu, double ratio, double alignment) {
  return [=](const Vector& x, std::size_t) {
    InnerMaxProbe p;
    const Vector diff = mu - x;
    const double dist = diff.norm();
    const Vector u = diff / dist;
    Vector v = Vector::Unit(x.size(), 1);
    v -= v.dot(u) * u;
    v.normalize();
    p.distance = dist / ratio;
    p.gradient = alignment * u + std::sqrt(1.0 - alignment * alignment) * v;
    p.theta = 1.0;
    return p;
  };
}

}  // namespace

TEST_CASE("exact oracles contract by 1 - eta per step") {
  const double eta = 1.0 / 8000.0;
  Vector mu(3);
  mu << 1.0, -2.0, 0.5;
  const Vector x0 = mu + Vector::Constant(3, 10.0);
  const EstimateReport r = run_descent(x0, 50, eta, scripted(mu, 1.0, 1.0));
  REQUIRE(r.iterations.size() == 50);
  for (std::size_t t = 1; t < r.iterations.size(); ++t) {
    const double prev = (r.iterations[t - 1].x_t - mu).norm();
    const double next = (r.iterations[t].x_t - mu).norm();
    CHECK(next / prev == doctest::Approx(1.0 - eta).epsilon(1e-12));
  }
  CHECK(r.chosen_iteration == 49);
  CHECK(r.estimate == r.iterations.back().x_t);
  CHECK_FALSE(r.terminated_early);
}

TEST_CASE("boundary oracles give the closed-form squared multiplier") {
  const double eta = 1.0 / 8000.0;
  const Vector mu = Vector::Zero(4);
  const Vector x0 = Vector::Constant(4, 3.0);
  const EstimateReport r = run_descent(x0, 20, eta, scripted(mu, 21.0, 1.0 / 200.0));
  const double expected = 1.0 - 2.0 * eta / (21.0 * 200.0) + eta * eta / 441.0;
  for (std::size_t t = 1; t < r.iterations.size(); ++t) {
    const double prev = (r.iterations[t - 1].x_t - mu).squaredNorm();
    const double next = (r.iterations[t].x_t - mu).squaredNorm();
    CHECK(next / prev == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("run_descent picks the first minimum and stops at zero distance") {
  std::vector<double> script{3.0, 1.0, 2.0, 1.0, 0.0, 5.0};
  DescentOracle oracle = [&](const Vector& x, std::size_t t) {
    InnerMaxProbe p;
    p.distance = script[t];
    p.gradient = Vector::Unit(x.size(), 0);
    return p;
  };
  const EstimateReport r = run_descent(Vector::Zero(2), 6, 0.5, oracle);
  CHECK(r.iterations.size() == 5);
  CHECK(r.terminated_early);
  CHECK(r.chosen_iteration == 4);
  CHECK(r.estimate[0] == doctest::Approx(0.5 * (3.0 + 1.0 + 2.0 + 1.0)));

  script = {3.0, 1.0, 2.0, 1.0};
  const EstimateReport s = run_descent(Vector::Zero(2), 4, 0.5, oracle);
  CHECK(s.chosen_iteration == 1);
  CHECK(s.estimate[0] == doctest::Approx(1.5));
  CHECK_THROWS_AS(run_descent(Vector::Zero(2), 0, 0.5, oracle), InvalidArgument);
}

TEST_CASE("all buckets at x0 form a fixed point") {
  EstimatorConfig config;
  const Vector v = Vector::LinSpaced(3, -1.0, 1.0);
  BucketMeans b;
  b.means = Matrix(9, 3);
  b.means.rowwise() = v.transpose();
  const EstimateReport r = descent(b, v, config, 1);
  CHECK(r.iterations.size() == 1);
  CHECK(r.iterations[0].degenerate);
  CHECK(r.iterations[0].d_t == 0.0);
  CHECK(r.estimate == v);
}

TEST_CASE("estimate_mean on constant data returns the constant") {
  EstimatorConfig config;
  config.k_override = 5;
  const Vector v = Vector::LinSpaced(4, 0.25, 1.0);
  Matrix m(20, 4);
  m.rowwise() = v.transpose();
  const EstimateReport r = estimate_mean(DataSet(m), config, 3);
  CHECK(r.estimate == v);
  CHECK(r.initial_guess == v);
  CHECK(r.iterations.size() == 1);
}

TEST_CASE("estimate_mean reports insufficient samples") {
  EstimatorConfig config;
  config.delta = 0.01;
  DistributionSpec spec{Family::gaussian, Vector::Zero(2), 1.0, 0.0};
  CHECK_THROWS_AS(estimate_mean(sample_dataset(spec, 100, 0).data, config, 0), InsufficientSamples);
}

TEST_CASE("x0 uses only the second half and descent only the first") {
  EstimatorConfig config;
  config.k_override = 20;
  DistributionSpec spec{Family::student_t, Vector::Constant(6, 2.0), 1.0, 3.0};
  const auto s = sample_dataset(spec, 1000, 5);
  const std::uint64_t seed = 77;
  const EstimateReport r = estimate_mean(s.data, config, seed);

  const PipelineSeeds seeds = pipeline_seeds(seed);
  const BucketMeans all = bucket_means(s.data, 40, seeds.bucketing);
  const Vector x0 = coordinate_median_of_means(select_rows(all, 20, 20));
  CHECK(r.initial_guess == x0);

  const PruneResult pruned = prune(select_rows(all, 0, 20), x0, config.prune_fraction);
  CHECK(pruned.kept.count() == 18);
  const EstimateReport again = descent(pruned.kept, x0, config, seeds.descent);
  CHECK(again.estimate == r.estimate);
  CHECK(again.iterations.size() == r.iterations.size());

  // Changing the second half moves x0 but descent still sees the same buckets.
  BucketMeans shifted = all;
  shifted.means.bottomRows(20).array() += 1.0;
  CHECK(coordinate_median_of_means(select_rows(shifted, 20, 20)) != x0);
  CHECK(select_rows(shifted, 0, 20).means == select_rows(all, 0, 20).means);
}

TEST_CASE("chosen iterate has the minimum distance") {
  EstimatorConfig config;
  config.k_override = 25;
  DistributionSpec spec{Family::student_t, Vector::Zero(5), 1.0, 2.5};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const EstimateReport r = estimate_mean(sample_dataset(spec, 600, seed).data, config, seed);
    double best = r.iterations.front().d_t;
    for (const auto& it : r.iterations) best = std::min(best, it.d_t);
    CHECK(r.iterations[r.chosen_iteration].d_t == best);
    CHECK(r.estimate == r.iterations[r.chosen_iteration].x_t);
    CHECK(r.iterations.size() <= descent_iterations(config, 5));
    CHECK(r.wall_times.count("descent") == 1);
    CHECK(r.wall_times.count("total") == 1);
  }
}

TEST_CASE("clean gaussian data stays within three times the empirical error") {
  EstimatorConfig config;
  config.k_override = 40;
  Vector mu = Vector::LinSpaced(20, -2.0, 2.0);
  int ok = 0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    const auto s = sample_dataset(DistributionSpec{Family::gaussian, mu, 1.0, 0.0}, 4000, 500 + trial);
    const EstimateReport r = estimate_mean(s.data, config, trial);
    ok += (r.estimate - mu).norm() <= 3.0 * (empirical_mean(s.data) - mu).norm() ? 1 : 0;
  }
  CHECK(ok >= 9);
}
