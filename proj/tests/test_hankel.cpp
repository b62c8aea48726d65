#include <doctest.h>

#include <Eigen/SVD>

#include "spectrace/hankel.hpp"
#include "spectrace/linalg.hpp"
#include "support.hpp"

using namespace spectrace;

namespace {

int svd_rank(const CMatrix& m, double rel) {
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel * s(0);
  return r;
}

ObservedSeries benchmark_series(const IndexSet& omega, int M) {
  const auto ex = testing::example1();
  return difference_transform(observe(simulate_discrete(build_from_jordan(ex.spec, ex.b, ex.c), M), omega));
}

}  // namespace

TEST_CASE("build_hankel: scalar layout") {
  ObservedSeries s;
  s.omega = {1};
  s.samples = CMatrix(4, 1);
  s.samples << 1, 2, 4, 8;
  const auto p = build_hankel(s, 2);
  CMatrix expect(2, 3);
  expect << 1, 2, 4, 2, 4, 8;
  CHECK(p.full == expect);
  CHECK(p.H0() == expect.leftCols(2));
  CHECK(p.H1() == expect.rightCols(2));
  CHECK_THROWS_AS(build_hankel(s, 4), Error);
  CHECK_THROWS_AS(build_hankel(s, 0), Error);
}

TEST_CASE("build_hankel: time-major blocks") {
  ObservedSeries s;
  s.omega = {1, 3};
  s.samples = CMatrix(4, 2);
  s.samples << 1, 10, 2, 20, 3, 30, 4, 40;
  const auto p = build_hankel(s, 1);
  REQUIRE(p.full.rows() == 6);
  CMatrix expect(6, 2);
  expect << 1, 2, 10, 20, 2, 3, 20, 30, 3, 4, 30, 40;
  CHECK(p.full == expect);
}

TEST_CASE("build_hankel: rank of a two-node series") {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = 0.5;
  A(1, 1) = -0.2;
  const auto s = observe(simulate_discrete(AffineSystem::homogeneous(A, CVector::Ones(2)), 6), {1, 2});
  const auto p = build_hankel(s, 2);
  CHECK(svd_rank(p.full, 1e-10) == 2);
  CHECK(numerical_rank(p.full, 1e-10) == 2);
}

TEST_CASE("build_hankel: benchmark rank on four coordinates") {
  const auto p = build_hankel(benchmark_series({1, 2, 4, 7}, 24), 8);
  CHECK(svd_rank(p.full, 1e-8) == 6);
}

TEST_CASE("estimate_rank: geometric series") {
  const auto s = testing::exp_sum({0.5}, {1.0}, 10);
  const auto r = estimate_rank(build_hankel(s, 5));
  CHECK(r.r_abs == 1);
  CHECK(r.r_quot == 1);
  CHECK(r.r_gap == 1);
  CHECK(r.chosen == 1);
}

TEST_CASE("estimate_rank: benchmark system") {
  CHECK(estimate_rank(build_hankel(benchmark_series({1, 2, 4, 7}, 24), 8)).chosen == 6);
  CHECK(estimate_rank(build_hankel(benchmark_series({1}, 24), 8)).chosen == 1);
}

TEST_CASE("estimate_rank_from_singular_values: three criteria") {
  // Quotients 100, 90, 1.5: the largest quotient is the first, the largest
  // drop between sorted quotients sits after the second.
  RVector sigma(4);
  sigma << 13500, 135, 1.5, 1;
  const auto r = estimate_rank_from_singular_values(sigma);
  CHECK(r.r_abs == 4);
  CHECK(r.r_quot == 1);
  CHECK(r.r_gap == 2);
  CHECK(r.chosen == 1);
  CHECK(r.chosen_by == RankCriterion::quotient);
  CHECK(std::abs(r.max_quotient - 100.0) < 1e-12);

  const auto g = estimate_rank_from_singular_values(sigma, {1e-8, RankCriterion::gap, 10.0});
  CHECK(g.chosen == 2);
  const auto a = estimate_rank_from_singular_values(sigma, {1e-8, RankCriterion::absolute, 10.0});
  CHECK(a.chosen == 4);

  RVector cliff(4);
  cliff << 10, 5, 1e-3, 1e-12;
  const auto c = estimate_rank_from_singular_values(cliff);
  CHECK(c.r_abs == 3);
  CHECK(c.r_quot == 3);
  CHECK(c.r_gap == 3);
}

TEST_CASE("estimate_rank_from_singular_values: flat spectrum falls back to absolute") {
  RVector sigma(3);
  sigma << 1.0, 0.9, 0.8;
  const auto r = estimate_rank_from_singular_values(sigma);
  CHECK(r.chosen == 3);
  CHECK(r.chosen_by == RankCriterion::absolute);
}

TEST_CASE("estimate_rank_from_singular_values: ties go to the smallest index") {
  RVector sigma(3);
  sigma << 100.0, 10.0, 1.0;
  const auto r = estimate_rank_from_singular_values(sigma);
  CHECK(r.r_quot == 1);
  CHECK(r.r_gap == 1);
}

TEST_CASE("estimate_rank_from_singular_values: exact zeros") {
  RVector sigma(3);
  sigma << 2.0, 0.0, 0.0;
  const auto r = estimate_rank_from_singular_values(sigma);
  CHECK(r.r_abs == 1);
  CHECK(r.r_quot == 1);
  CHECK(r.chosen == 1);
  RVector zero = RVector::Zero(2);
  CHECK(estimate_rank_from_singular_values(zero).chosen == 0);
}

TEST_CASE("default_window") {
  CHECK(default_window(24) == 12);
  CHECK(default_window(24, 6) == 12);
  CHECK(default_window(10, 7) == 7);
}

TEST_CASE("permute_stacked and restack") {
  ObservedSeries s;
  s.omega = {1, 2};
  s.samples = CMatrix(4, 2);
  s.samples << 1, 5, 2, 6, 3, 7, 4, 8;
  const auto p = build_hankel(s, 1);
  const auto parts = permute_stacked(p);
  REQUIRE(parts.size() == 2);
  CMatrix h1(3, 2), h2(3, 2);
  h1 << 1, 2, 2, 3, 3, 4;
  h2 << 5, 6, 6, 7, 7, 8;
  CHECK(parts[0] == h1);
  CHECK(parts[1] == h2);
  CHECK(restack(parts) == p.full);

  const auto one = build_hankel(testing::exp_sum({0.5}, {1.0}, 6), 2);
  CHECK(permute_stacked(one)[0] == one.full);
}

TEST_CASE("permute_stacked preserves rank") {
  const auto p = build_hankel(benchmark_series({1, 2, 4, 7}, 24), 8);
  const auto parts = permute_stacked(p);
  CMatrix stacked(p.full.rows(), p.full.cols());
  Eigen::Index row = 0;
  for (const auto& m : parts) {
    stacked.middleRows(row, m.rows()) = m;
    row += m.rows();
  }
  CHECK(svd_rank(stacked, 1e-8) == svd_rank(p.full, 1e-8));
}

TEST_CASE("jordan_factorization: single block against binomial expansion") {
  JordanSpec spec{{0.3}, {{2}}, CMatrix::Identity(2, 2)};
  const int M = 8, L = 3;
  const auto s = observe(simulate_discrete(AffineSystem::homogeneous(spec.system_matrix(), CVector::Unit(2, 0)), M), {2});
  const auto p = build_hankel(s, L);
  for (int m = 0; m < M - L; ++m)
    for (int l = 0; l <= L; ++l) {
      const int t = m + l;
      const double expect = t == 0 ? 0.0 : t * std::pow(0.3, t - 1);
      CHECK(std::abs(p.full(m, l) - expect) < 1e-15);
    }
  const auto f = jordan_factorization(spec, CVector::Unit(2, 0), 2, M, L);
  CHECK(f.local_degrees == std::vector<int>{2});
  CHECK((f.reconstruct(0) - p.H0()).norm() < 1e-14);
  CHECK((f.reconstruct(1) - p.H1()).norm() < 1e-14);
}

TEST_CASE("jordan_factorization: diagonal spec reduces to Vandermonde") {
  JordanSpec spec{{0.5, -0.2, 0.7}, {{1}, {1}, {1}}, CMatrix::Identity(3, 3)};
  const auto f = jordan_factorization(spec, CVector::Ones(3), 1, 10, 4);
  CHECK(f.local_degrees == std::vector<int>{1, 0, 0});
  REQUIRE(f.Lambda.rows() == 1);
  CHECK(std::abs(f.Lambda(0, 0) - 1.0) < 1e-15);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(f.V_right(0, k) - std::pow(0.5, k)) < 1e-15);
}

TEST_CASE("jordan_factorization: benchmark reconstruction") {
  const auto ex = testing::example1();
  const int M = 24, L = 8;
  const auto s = observe(simulate_discrete(AffineSystem::homogeneous(ex.spec.system_matrix(), ex.b), M), {1});
  const auto p = build_hankel(s, L);
  const auto f = jordan_factorization(ex.spec, ex.b, 1, M, L);
  CHECK((f.reconstruct(0) - p.H0()).norm() <= 1e-10 * p.H0().norm());
  CHECK((f.reconstruct(1) - p.H1()).norm() <= 1e-10 * p.H1().norm());
}
