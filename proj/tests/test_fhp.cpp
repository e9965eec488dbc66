#include <doctest.h>

#include <cmath>
#include <random>

#include "rmean/fhp.hpp"

using namespace rmean;

namespace {

Vector random_unit(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = normal(rng);
  return v.normalized();
}

BucketMeans rows_of(const Matrix& m) {
  BucketMeans b;
  b.means = m;
  return b;
}

// k rows with |<Z_i, w*>| >= r and norm <= 1.
Matrix planted(std::size_t k, std::size_t d, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Vector w = random_unit(d, rng);
  Matrix m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < k; ++i) {
    Vector side = random_unit(d, rng);
    side -= side.dot(w) * w;
    side.normalize();
    const double along = r + (1.0 - r) * unif(rng);
    const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
    const Vector row = sign * along * w + std::sqrt(1.0 - along * along) * unif(rng) * side;
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

}  // namespace

TEST_CASE("fhp iteration count") {
  CHECK(fhp_iteration_count(50, 0.3) == static_cast<std::size_t>(std::ceil(10.0 * std::log(50.0) / 0.09)));
  CHECK(fhp_iteration_count(1, 1.0) == 1);
  CHECK_THROWS_AS(fhp_iteration_count(5, 0.0), InvalidArgument);
}

TEST_CASE("fhp on a rank-one instance") {
  Matrix m(2, 3);
  m << 1, 0, 0, -1, 0, 0;
  const auto cert = fhp_solve(rows_of(m), 1.0, kFhpDefaultEta, fhp_iteration_count(2, 1.0), 10, 4);
  REQUIRE(cert);
  CHECK(std::abs(cert->direction[0]) == doctest::Approx(1.0));
  CHECK(std::abs(m.row(0).dot(cert->direction)) == doctest::Approx(1.0));
  CHECK(std::abs(m.row(1).dot(cert->direction)) == doctest::Approx(1.0));
  CHECK(cert->satisfied_count == 2);
}

TEST_CASE("fhp certifies planted instances") {
  std::mt19937_64 rng(101);
  const std::size_t k = 50, d = 20;
  const double r = 0.3;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix m = planted(k, d, r, rng);
    const auto cert = fhp_solve(rows_of(m), r, kFhpDefaultEta, fhp_iteration_count(k, r), 100, seed);
    if (cert && count_margin(m, cert->direction, kFhpAlpha * r) >= static_cast<std::size_t>(std::ceil(0.7 * k))) {
      ++ok;
      CHECK(cert->satisfied_count == count_margin(m, cert->direction, r / 10.0));
    }
  }
  CHECK(ok >= 90);
}

TEST_CASE("fhp fails on an infeasible instance") {
  const Matrix zeros = Matrix::Zero(6, 4);
  CHECK_FALSE(fhp_solve(rows_of(zeros), 0.5, kFhpDefaultEta, 20, 20, 1));

  // One real row, the rest negligible: no direction reaches 70% at r / 10.
  Matrix m = 1e-4 * Matrix::Ones(10, 3);
  m.row(0) << 1, 0, 0;
  CHECK_FALSE(fhp_solve(rows_of(m), 0.5, kFhpDefaultEta, 30, 50, 2));
}

TEST_CASE("fhp rejects bad arguments") {
  const Matrix m = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(fhp_solve(rows_of(m), 0.0, kFhpDefaultEta, 5, 5, 0), InvalidArgument);
  CHECK_THROWS_AS(fhp_solve(rows_of(m), 0.5, 1.0, 5, 5, 0), InvalidArgument);
  CHECK_THROWS_AS(fhp_solve(rows_of(2.0 * m), 0.5, kFhpDefaultEta, 5, 5, 0), InvalidArgument);
}

TEST_CASE("fhp weights obey the multiplicative-weights regret bound") {
  std::mt19937_64 rng(7);
  const std::size_t k = 30, d = 8;
  const double eta = kFhpDefaultEta;
  for (int run = 0; run < 5; ++run) {
    const Matrix m = planted(k, d, 0.4, rng);
    FhpTrace trace;
    fhp_solve(rows_of(m), 0.4, eta, fhp_iteration_count(k, 0.4), 50, static_cast<std::uint64_t>(run), &trace);
    double mixed = 0.0;
    std::vector<double> per_row(k, 0.0);
    for (std::size_t t = 0; t < trace.tau.size(); ++t) {
      double norm = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double s2 = trace.sigma[t][i] * trace.sigma[t][i];
        mixed += trace.tau[t][i] * s2;
        per_row[i] += s2;
        norm += trace.tau[t][i];
        CHECK(trace.tau[t][i] > 0.0);
      }
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < k; ++i) CHECK(mixed - (1.0 + eta) * per_row[i] <= std::log(double(k)) / eta + 1e-9);
  }
}
