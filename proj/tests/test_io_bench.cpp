#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmean/benchmark.hpp"
#include "rmean/dataset_io.hpp"
#include "rmean/descent.hpp"

using namespace rmean;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rmean_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("dataset files round-trip exactly") {
  Matrix m(3, 2);
  m << 1.0 / 3.0, -0.0, 1e-310, 1e300, -7.25, 42.0;
  const fs::path p = scratch("roundtrip.bin");
  write_dataset(p, DataSet(m));
  CHECK(fs::file_size(p) == 24 + 6 * 8);
  const DataSet back = read_dataset(p);
  CHECK(back.samples() == m);
  CHECK(std::signbit(back.samples()(0, 1)));

  std::ifstream in(p, std::ios::binary);
  char header[24];
  in.read(header, 24);
  CHECK(std::string(header, 8) == "RMKDATA1");
  CHECK(static_cast<unsigned char>(header[8]) == 3);
  CHECK(static_cast<unsigned char>(header[16]) == 2);
}

TEST_CASE("dataset reader rejects malformed files") {
  const fs::path bad = scratch("bad_magic.bin");
  {
    std::ofstream out(bad, std::ios::binary);
    out << "NOTDATA!xxxxxxxxxxxxxxxx";
  }
  CHECK_THROWS_AS(read_dataset(bad), InvalidArgument);

  const fs::path good = scratch("truncated.bin");
  write_dataset(good, DataSet(Matrix::Ones(4, 4)));
  fs::resize_file(good, fs::file_size(good) - 8);
  CHECK_THROWS_AS(read_dataset(good), InvalidArgument);

  write_dataset(good, DataSet(Matrix::Ones(2, 2)));
  {
    std::ofstream out(good, std::ios::binary | std::ios::app);
    out << "extra";
  }
  CHECK_THROWS_AS(read_dataset(good), InvalidArgument);
  CHECK_THROWS_AS(read_dataset(scratch("missing.bin")), InvalidArgument);
}

TEST_CASE("ground truth sidecar round-trips") {
  GroundTruth t;
  t.mean = Vector::LinSpaced(3, 0.1, 0.3);
  t.sigma_trace = 63.0;
  t.sigma_opnorm = 21.0;
  const fs::path p = ground_truth_path(scratch("data.bin"));
  CHECK(p.filename() == "data.bin.json");
  write_ground_truth(p, t, {{"family", "student_t"}});
  const GroundTruth back = read_ground_truth(p);
  CHECK(back.mean == t.mean);
  CHECK(back.sigma_trace == 63.0);
  CHECK(back.sigma_opnorm == 21.0);
}

TEST_CASE("report JSON carries the iteration records") {
  EstimatorConfig config;
  config.k_override = 10;
  DistributionSpec spec{Family::gaussian, Vector::Zero(3), 1.0, 0.0};
  const EstimateReport r = estimate_mean(sample_dataset(spec, 200, 1).data, config, 2);
  const nlohmann::json j = report_to_json(r, config);
  for (const char* key : {"estimate", "initial_guess", "chosen_iteration", "terminated_early", "config",
                          "iterations", "timing"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["estimate"].size() == 3);
  CHECK(vector_from_json(j["estimate"]) == r.estimate);
  REQUIRE(j["iterations"].size() == r.iterations.size());
  const auto& it0 = j["iterations"][0];
  for (const char* key : {"t", "x_t", "d_t", "g_t", "margin_theta", "approx_bregman_failed", "degenerate"}) {
    CHECK(it0.contains(key));
  }
  CHECK(j["config"]["k_override"] == 10);
  CHECK(j["timing"].contains("total"));
}

TEST_CASE("quantile interpolates linearly") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.0) == 1.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 1.0) == 4.0);
  CHECK(quantile({0.0, 10.0}, 0.9) == doctest::Approx(9.0));
}

TEST_CASE("single empirical trial on zero-variance data") {
  const nlohmann::json j = {
      {"seed", 1},
      {"scenarios",
       {{{"id", "flat"}, {"family", "gaussian"}, {"n", 10}, {"d", 2}, {"mean", 3.0}, {"scale", 0.0},
         {"trials", 1}, {"estimators", {"empirical"}}}}}};
  const BenchmarkResult r = run_benchmark(plan_from_json(j));
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].status == "ok");
  CHECK(r.rows[0].error == 0.0);
}

TEST_CASE("benchmark cardinality, ordering and determinism") {
  const nlohmann::json j = {
      {"seed", 9},
      {"threads", 2},
      {"scenarios",
       {{{"id", "a"}, {"family", "student_t"}, {"tail_parameter", 3.0}, {"n", 400}, {"d", 4},
         {"k", 10}, {"trials", 3}, {"estimators", {"spectral", "empirical"}}},
        {{"id", "b"}, {"family", "gaussian"}, {"n", 300}, {"d", 3}, {"k", 8}, {"trials", 2},
         {"contamination", {{"count", 2}, {"placement", "coordinate_spike"}, {"radius", 50.0}}},
         {"estimators", {"geometric_median", "coordinate_mom", "empirical"}}}}}};
  const BenchmarkPlan plan = plan_from_json(j);
  const BenchmarkResult first = run_benchmark(plan);
  CHECK(first.rows.size() == 3 * 2 + 2 * 3);
  const std::string csv = results_csv(first);
  CHECK(count_lines(csv) == first.rows.size() + 1);
  CHECK(first.rows[0].scenario == "a");
  CHECK(first.rows[0].trial == 0);
  CHECK(first.rows[0].estimator == EstimatorKind::spectral);
  CHECK(first.rows[1].estimator == EstimatorKind::empirical);
  CHECK(first.rows[2].trial == 1);
  CHECK(first.rows.back().scenario == "b");
  CHECK(first.summary.size() == 2 + 3);

  BenchmarkPlan serial = plan;
  serial.threads = 1;
  CHECK(results_csv(run_benchmark(serial)) == csv);
  CHECK(results_csv(run_benchmark(plan)) == csv);

  const fs::path dir = scratch("bench_out");
  write_benchmark(first, dir);
  for (const char* f : {"results.csv", "summary.csv", "results.json"}) CHECK(fs::exists(dir / f));
  std::ifstream in(dir / "results.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == csv);
}

TEST_CASE("theorem regime caps the contamination") {
  nlohmann::json j = {
      {"scenarios",
       {{{"id", "t"}, {"n", 1000}, {"d", 2}, {"k", 100}, {"theorem_regime", true},
         {"contamination", {{"count", 1}, {"radius", 10.0}}}, {"estimators", {"empirical"}}}}}};
  CHECK_THROWS_AS(plan_from_json(j), InvalidArgument);
  j["scenarios"][0]["k"] = 200;
  j["scenarios"][0]["n"] = 1000;
  CHECK_NOTHROW(plan_from_json(j));
}

TEST_CASE("plan parser rejects bad input") {
  CHECK_THROWS_AS(plan_from_json(nlohmann::json::object()), InvalidArgument);
  const nlohmann::json unknown = {
      {"scenarios", {{{"id", "x"}, {"n", 10}, {"d", 1}, {"estimators", {"magic"}}}}}};
  CHECK_THROWS_AS(plan_from_json(unknown), InvalidArgument);
}

TEST_CASE("insufficient samples become a row status") {
  const nlohmann::json j = {
      {"scenarios",
       {{{"id", "small"}, {"n", 20}, {"d", 2}, {"delta", 0.01}, {"estimators", {"spectral", "empirical"}}}}}};
  const BenchmarkResult r = run_benchmark(plan_from_json(j));
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].status == "insufficient_samples");
  CHECK(r.rows[1].status == "ok");
}
