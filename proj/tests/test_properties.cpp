#include <doctest.h>

#include "spectrace/estimators.hpp"
#include "spectrace/hankel.hpp"
#include "spectrace/linalg.hpp"
#include "spectrace/metrics.hpp"
#include "spectrace/recoverability.hpp"
#include "support.hpp"

using namespace spectrace;

namespace {

constexpr int kTrials = 40;

ObservedSeries homogeneous_series(const CMatrix& A, const CVector& v, const IndexSet& omega, int M) {
  return observe(simulate_discrete(AffineSystem::homogeneous(A, v), M), omega);
}

}  // namespace

TEST_CASE("property: rank criteria stay within the matrix dimensions") {
  SplitMix64 rng(101);
  for (int trial = 0; trial < kTrials; ++trial) {
    const int M = 6 + static_cast<int>(rng.uniform() * 20);
    const int L = 1 + static_cast<int>(rng.uniform() * (M - 1));
    ObservedSeries s;
    s.omega = {1, 2};
    s.samples = testing::random_matrix(M, 2, rng);
    const auto p = build_hankel(s, L);
    const auto r = estimate_rank(p);
    const int cap = static_cast<int>(std::min(p.full.rows(), p.full.cols()));
    CHECK(r.r_abs <= cap);
    CHECK(r.r_quot <= cap);
    CHECK(r.r_gap <= cap);
    CHECK((r.chosen == r.r_abs || r.chosen == r.r_quot || r.chosen == r.r_gap));
    CHECK(restack(permute_stacked(p)) == p.full);
  }
}

TEST_CASE("property: local degrees add up to the annihilator degree") {
  SplitMix64 rng(202);
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto spec = testing::random_jordan_spec(rng, 8);
    const int d = spec.dim();
    const CVector v = testing::random_vector(d, rng);
    const IndexSet omega = testing::random_omega(d, rng);
    const auto rep = recoverable_set_jordan(spec, v, omega);
    int sum = 0;
    for (const auto& e : rep.eigenvalues) {
      sum += e.local_degree;
      CHECK(e.recoverable == (e.local_degree > 0));
      CHECK(e.local_degree <= e.multiplicity);
    }
    CHECK(sum == rep.total_degree);
    CHECK(annihilator_degree(spec.system_matrix(), v, omega) == rep.total_degree);
  }
}

TEST_CASE("property: Hankel windows factor through the reduced Jordan form") {
  SplitMix64 rng(303);
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto spec = testing::random_jordan_spec(rng, 8);
    const int d = spec.dim();
    const CVector v = testing::random_vector(d, rng);
    const int index = 1 + static_cast<int>(rng.uniform() * d);
    const int M = 2 * d + 4, L = d;
    const auto p = build_hankel(homogeneous_series(spec.system_matrix(), v, {index}, M), L);
    const auto f = jordan_factorization(spec, v, index, M, L);
    CHECK((f.reconstruct(0) - p.H0()).norm() <= 1e-9 * std::max(1.0, p.H0().norm()));
    CHECK((f.reconstruct(1) - p.H1()).norm() <= 1e-9 * std::max(1.0, p.H1().norm()));
  }
}

TEST_CASE("property: the Prony system at L = r has full column rank") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto spec = testing::random_jordan_spec(rng, 8);
    const int d = spec.dim();
    const CVector v = testing::random_vector(d, rng);
    const IndexSet omega = testing::random_omega(d, rng);
    const CMatrix A = spec.system_matrix();
    const int r = annihilator_degree(A, v, omega);
    REQUIRE(r >= 1);
    const auto p = build_hankel(homogeneous_series(A, v, omega, 2 * d + 2), r);
    CHECK(numerical_rank(p.H0(), 1e-10) == r);
    CHECK(numerical_rank(p.full, 1e-10) == r);
  }
}

TEST_CASE("property: Krylov and penthouse universality criteria agree") {
  SplitMix64 rng(505);
  int universal = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto spec = testing::random_jordan_spec(rng, 8);
    const auto cert = is_universal(spec, testing::random_omega(spec.dim(), rng));
    CHECK(cert.krylov_criterion == cert.penthouse_criterion);
    CHECK(cert.warnings.empty());
    universal += cert.universal;
  }
  CHECK(universal > 0);
  CHECK(universal < kTrials);
}

TEST_CASE("property: matrix pencil returns r eigenvalues and finds the nodes") {
  SplitMix64 rng(606);
  for (int trial = 0; trial < kTrials; ++trial) {
    const int r = 1 + static_cast<int>(rng.uniform() * 4);
    std::vector<Complex> nodes, weights;
    for (int k = 0; k < r; ++k) {
      nodes.push_back(-0.9 + 1.8 * (k + 0.5 + 0.3 * (rng.uniform() - 0.5)) / r);
      weights.push_back(1.0 + rng.uniform());
    }
    const int M = 3 * r + 4;
    const auto s = testing::exp_sum(nodes, weights, M);
    for (Variant v : {Variant::LS, Variant::TLS, Variant::SVD}) {
      const auto est = matrix_pencil(s, r, default_window(M, r), v);
      CHECK(static_cast<int>(est.eigenvalues.size()) == r);
      CHECK(hausdorff(nodes, est.eigenvalues) < 1e-8);
    }
    const auto es = esprit(s, r, default_window(M, r));
    CHECK(static_cast<int>(es.eigenvalues.size()) == r);
  }
}

TEST_CASE("property: differencing an affine trajectory equals the homogeneous run from w") {
  SplitMix64 rng(707);
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto spec = testing::random_jordan_spec(rng, 8);
    const int d = spec.dim();
    const CVector b = testing::random_vector(d, rng), c = testing::random_vector(d, rng);
    const AffineSystem sys = build_from_jordan(spec, b, c);
    const IndexSet omega = testing::random_omega(d, rng);
    const auto diff = difference_transform(observe(simulate_discrete(sys, 21), omega));
    const auto homo = homogeneous_series(sys.A, effective_vector(sys, Sampling::discrete()), omega, 20);
    CHECK((diff.samples - homo.samples).norm() <= 1e-10 * std::max(1.0, homo.samples.norm()));
  }
}

TEST_CASE("property: matching pairs every estimate with its nearest exact value") {
  SplitMix64 rng(808);
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<Complex> exact, est;
    for (int k = 0; k < 1 + trial % 5; ++k) exact.emplace_back(rng.normal(), rng.normal());
    for (int k = 0; k < 1 + trial % 7; ++k) est.emplace_back(rng.normal(), rng.normal());
    const auto m = match_spectra(exact, est);
    REQUIRE(m.pairs.size() == est.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k) {
      const double dist = std::abs(m.pairs[k].first - m.pairs[k].second);
      for (Complex e : exact) CHECK(dist <= std::abs(e - est[k]));
      worst = std::max(worst, dist);
    }
    CHECK(ine(m) == worst);
    CHECK(rmse(m) <= ine(m) * (1.0 + 1e-12));
    const auto inj = match_spectra(exact, est, true);
    CHECK(inj.pairs.size() == std::min(exact.size(), est.size()));
  }
}

TEST_CASE("property: pseudo-inverse Penrose identities") {
  SplitMix64 rng(909);
  for (int trial = 0; trial < kTrials; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform() * 6), n = 2 + static_cast<int>(rng.uniform() * 6);
    const int k = 1 + static_cast<int>(rng.uniform() * std::min(m, n));
    const CMatrix a = testing::random_matrix(m, k, rng) * testing::random_matrix(k, n, rng);
    const CMatrix p = pinv_thresholded(a);
    CHECK((a * p * a - a).norm() <= 1e-10 * a.norm());
    CHECK((p * a * p - p).norm() <= 1e-10 * p.norm());
    CHECK(((a * p).adjoint() - a * p).norm() <= 1e-10);
    CHECK(((p * a).adjoint() - p * a).norm() <= 1e-10);
  }
}

TEST_CASE("property: every estimator matches the oracle when given the exact order") {
  SplitMix64 rng(1010);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform() * 7);
    CVector lambda(d);
    for (int k = 0; k < d; ++k) lambda(k) = std::polar(0.5 + 0.4 * rng.uniform(), 2.0 * 3.14159 * (k + 0.3 * rng.uniform()) / d);
    const CMatrix V = CMatrix::Identity(d, d) + 0.2 * testing::random_matrix(d, d, rng);
    const CMatrix A = V * lambda.asDiagonal() * V.inverse();
    const CVector v = testing::random_vector(d, rng);
    const IndexSet omega = testing::random_omega(d, rng);
    const auto rep = recoverable_set_numeric(A, v, omega);
    const auto series = homogeneous_series(A, v, omega, 4 * d + 8);
    EstimatorConfig cfg;
    cfg.r = rep.total_degree;
    for (Method m : all_methods()) {
      const auto est = estimate(series, m, cfg);
      CHECK(hausdorff(rep.recoverable_roots(), est.eigenvalues) < 1e-6);
    }
  }
}
