#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "spectrace/json_io.hpp"
#include "spectrace/rng.hpp"
#include "spectrace/systems.hpp"

namespace testing {

using spectrace::CMatrix;
using spectrace::Complex;
using spectrace::CVector;

inline std::string source_path(const std::string& rel) {
  return std::string(SPECTRACE_SOURCE_DIR) + "/" + rel;
}

/// The eight-dimensional affine benchmark system shipped in configs/.
inline spectrace::SystemFile example1() {
  return spectrace::load_system_file(source_path("configs/example1.json"));
}

/// Samples x_t = sum_k w_k z_k^t of a scalar exponential sum, t = 0..M-1.
inline spectrace::ObservedSeries exp_sum(const std::vector<Complex>& nodes,
                                         const std::vector<Complex>& weights, int M) {
  spectrace::ObservedSeries s;
  s.omega = {1};
  s.samples = CMatrix::Zero(M, 1);
  for (int t = 0; t < M; ++t) {
    for (std::size_t k = 0; k < nodes.size(); ++k) s.samples(t, 0) += weights[k] * std::pow(nodes[k], t);
  }
  return s;
}

/// Sorts by real part, then imaginary part.
inline std::vector<Complex> sorted(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

/// Largest distance from any member of `want` to the nearest member of `got`.
inline double covers(const std::vector<Complex>& want, const std::vector<Complex>& got) {
  double worst = 0.0;
  for (Complex w : want) {
    double best = INFINITY;
    for (Complex g : got) best = std::min(best, std::abs(w - g));
    worst = std::max(worst, best);
  }
  return worst;
}

inline CVector random_vector(int d, spectrace::SplitMix64& rng) {
  CVector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.normal();
  return v;
}

inline CMatrix random_matrix(int r, int c, spectrace::SplitMix64& rng) {
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

/// Random Jordan spec of dimension <= max_dim with well separated eigenvalues
/// inside the unit disc and a well conditioned random similarity.
inline spectrace::JordanSpec random_jordan_spec(spectrace::SplitMix64& rng, int max_dim) {
  spectrace::JordanSpec spec;
  const int d = 1 + static_cast<int>(rng.uniform() * max_dim);
  int left = d;
  while (left > 0) {
    Complex lambda;
    bool ok = false;
    while (!ok) {
      lambda = Complex(1.8 * rng.uniform() - 0.9, 0.0);
      ok = true;
      for (Complex e : spec.eigenvalues) ok = ok && std::abs(e - lambda) > 0.1;
    }
    std::vector<int> blocks;
    int h = std::min(left, 1 + static_cast<int>(rng.uniform() * 3));
    left -= h;
    while (h > 0) {
      const int size = 1 + static_cast<int>(rng.uniform() * h);
      blocks.push_back(size);
      h -= size;
    }
    std::sort(blocks.rbegin(), blocks.rend());
    spec.eigenvalues.push_back(lambda);
    spec.blocks.push_back(blocks);
  }
  spec.U = CMatrix::Identity(d, d) + 0.3 * random_matrix(d, d, rng);
  return spec;
}

/// Random nonempty index subset of {1..d}.
inline spectrace::IndexSet random_omega(int d, spectrace::SplitMix64& rng) {
  spectrace::IndexSet omega;
  for (int i = 1; i <= d; ++i) {
    if (rng.uniform() < 0.4) omega.push_back(i);
  }
  if (omega.empty()) omega.push_back(1 + static_cast<int>(rng.uniform() * d));
  return omega;
}

}  // namespace testing
