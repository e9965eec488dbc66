#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rmean/pruning.hpp"

using namespace rmean;

namespace {

BucketMeans from_rows(const Matrix& m) {
  BucketMeans b;
  b.means = m;
  return b;
}

}  // namespace

TEST_CASE("prune removes the farthest tenth") {
  Matrix m(10, 1);
  for (Eigen::Index i = 0; i < 10; ++i) m(i, 0) = static_cast<double>(i + 1);
  const PruneResult r = prune(from_rows(m), Vector::Zero(1), 0.1);
  CHECK(r.kept.count() == 9);
  REQUIRE(r.removed.size() == 1);
  CHECK(r.removed[0] == 9);
  for (Eigen::Index i = 0; i < 9; ++i) CHECK(r.kept.means(i, 0) == static_cast<double>(i + 1));
}

TEST_CASE("prune with fraction 0 is a no-op") {
  Matrix m = Matrix::Random(7, 3);
  const PruneResult r = prune(from_rows(m), Vector::Zero(3), 0.0);
  CHECK(r.removed.empty());
  CHECK(r.kept.means == m);
}

TEST_CASE("prune separates a far point from good points") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  const double beta = 1.0;
  Vector mu = Vector::Constant(5, 3.0);
  Matrix m(10, 5);
  for (Eigen::Index i = 0; i < 9; ++i) {
    Vector u(5);
    for (auto& v : u) v = normal(rng);
    m.row(i) = (mu + 0.9 * beta * u.normalized()).transpose();
  }
  m.row(9) = (mu + 30.0 * beta * Vector::Unit(5, 2)).transpose();
  const Vector x0 = mu + 0.5 * beta * Vector::Unit(5, 0);
  const PruneResult r = prune(from_rows(m), x0, 0.1);
  REQUIRE(r.removed.size() == 1);
  CHECK(r.removed[0] == 9);
}

TEST_CASE("prune ties drop the higher index") {
  Matrix m(5, 1);
  m << 1, -2, 2, 0.5, 0;
  const PruneResult r = prune(from_rows(m), Vector::Zero(1), 0.4);
  REQUIRE(r.removed.size() == 2);
  CHECK(r.removed[0] == 2);
  CHECK(r.removed[1] == 1);
}

TEST_CASE("prune is permutation invariant") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> small(-3, 3);
  // Integer coordinates so ties occur.
  Matrix m(30, 2);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = small(rng);
  const Vector x0 = Vector::Zero(2);
  const PruneResult ref = prune(from_rows(m), x0, 0.2);

  auto removed_rows = [](const Matrix& rows, const std::vector<std::size_t>& idx) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i : idx) out.emplace_back(rows(static_cast<Eigen::Index>(i), 0), rows(static_cast<Eigen::Index>(i), 1));
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto ref_removed = removed_rows(m, ref.removed);

  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> perm(30);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix p(30, 2);
    for (Eigen::Index i = 0; i < 30; ++i) p.row(i) = m.row(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]));
    const PruneResult r = prune(from_rows(p), x0, 0.2);
    CHECK(r.removed.size() == ref.removed.size());
    // The removed multiset of points agrees: ties are between equal-distance
    // points, and which of those goes depends on index only.
    std::vector<double> a, b;
    for (std::size_t i : r.removed) a.push_back(p.row(static_cast<Eigen::Index>(i)).norm());
    for (std::size_t i : ref.removed) b.push_back(m.row(static_cast<Eigen::Index>(i)).norm());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
  CHECK(ref_removed.size() == 6);
}

TEST_CASE("center_and_scale examples") {
  Vector x(2);
  x << 3.0, -1.0;
  Matrix m(2, 2);
  m.row(0) = (x + Vector::Unit(2, 0)).transpose();
  m.row(1) = (x - 2.0 * Vector::Unit(2, 0)).transpose();
  const BucketMeans s = center_and_scale(from_rows(m), x);
  REQUIRE(s.scale);
  CHECK(*s.scale == 2.0);
  CHECK(s.means(0, 0) == 0.5);
  CHECK(s.means(1, 0) == -1.0);
  CHECK(s.means.col(1).isZero(0.0));
  REQUIRE(s.center);
  CHECK(*s.center == x);

  Matrix one(1, 2);
  one << 3.0 + 3.0 * 0.6, -1.0 + 3.0 * 0.8;
  const BucketMeans t = center_and_scale(from_rows(one), x);
  CHECK(*t.scale == doctest::Approx(3.0));
  CHECK(t.means.row(0).norm() == doctest::Approx(1.0));

  Matrix same(3, 2);
  same.rowwise() = x.transpose();
  CHECK_THROWS_AS(center_and_scale(from_rows(same), x), DegenerateData);
}

TEST_CASE("scaled rows have norm at most one and margins scale by B") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m(15, 4);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 5.0 * normal(rng);
    Vector x(4);
    for (auto& v : x) v = normal(rng);
    const BucketMeans s = center_and_scale(from_rows(m), x);
    double max_norm = 0.0;
    for (Eigen::Index i = 0; i < 15; ++i) max_norm = std::max(max_norm, s.means.row(i).norm());
    CHECK(max_norm <= 1.0 + kScaledNormSlack);
    CHECK(max_norm == doctest::Approx(1.0));

    Vector w(4);
    for (auto& v : w) v = normal(rng);
    w.normalize();
    for (Eigen::Index i = 0; i < 15; ++i) {
      const double raw = (m.row(i).transpose() - x).dot(w);
      const double scaled = s.means.row(i).dot(w);
      CHECK(raw == doctest::Approx(*s.scale * scaled).epsilon(1e-12));
    }
  }
}
