#include "spectrace/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace spectrace {

CMatrix pinv_thresholded(const CMatrix& m, double rel) {
  if (m.size() == 0) return CMatrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double cutoff = s.size() ? rel * s(0) : 0.0;
  RVector inv = RVector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.cast<Complex>().asDiagonal() *
         svd.matrixU().adjoint();
}

CMatrix lstsq_thresholded(const CMatrix& m, const CMatrix& rhs, double rel) {
  if (m.rows() != rhs.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "least-squares right-hand side has wrong row count");
  }
  if (m.size() == 0) return CMatrix::Zero(m.cols(), rhs.cols());
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  const double cutoff = s.size() ? rel * s(0) : 0.0;
  CMatrix coeffs = svd.matrixU().adjoint() * rhs;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) {
      coeffs.row(i) /= s(i);
    } else {
      coeffs.row(i).setZero();
    }
  }
  return svd.matrixV() * coeffs;
}

RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

int numerical_rank(const CMatrix& m, double rel) {
  const RVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel * s(0)) ++r;
  }
  return r;
}

namespace {

// Parlett-Reinsch balancing restricted to powers of two, so the similarity
// transform is exact.
void balance(CMatrix& m) {
  const Eigen::Index n = m.rows();
  constexpr double gamma = 0.95;
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row += std::abs(m(i, j));
        col += std::abs(m(j, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double f = std::ldexp(1.0, exponent);
      if (col * f + row / f < gamma * (col + row)) {
        m.row(i) /= f;
        m.col(i) *= f;
        changed = true;
      }
    }
  }
}

}  // namespace

std::vector<Complex> companion_roots(std::span<const Complex> monic_coeffs) {
  const auto n = static_cast<Eigen::Index>(monic_coeffs.size());
  if (n == 0) {
    throw Error(ErrorCode::invalid_argument,
                "companion_roots: polynomial degree must be >= 1");
  }
  // Ones on the subdiagonal, negated coefficients in the last column.
  CMatrix c = CMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) c(i, n - 1) = -monic_coeffs[i];
  balance(c);
  Eigen::ComplexEigenSolver<CMatrix> es(c, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical_failure,
                "companion_roots: eigenvalue iteration did not converge");
  }
  const CVector& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<Complex> poly_from_roots(std::span<const Complex> roots) {
  // coeffs holds the full polynomial, lowest degree first, leading 1 at back.
  std::vector<Complex> coeffs{1.0};
  for (const Complex& root : roots) {
    std::vector<Complex> next(coeffs.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k + 1] += coeffs[k];
      next[k] -= root * coeffs[k];
    }
    coeffs = std::move(next);
  }
  coeffs.pop_back();
  return coeffs;
}

std::vector<RootCluster> cluster_values(std::span<const Complex> values,
                                        double radius, std::vector<int>* labels) {
  const std::size_t n = values.size();
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  auto find = [&](std::size_t i) {
    while (label[i] != i) i = label[i] = label[label[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= radius) {
        const auto a = find(i), b = find(j);
        if (a != b) label[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<RootCluster> out;
  std::vector<std::size_t> roots;
  if (labels) labels->clear();
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    auto it = std::find(roots.begin(), roots.end(), root);
    if (labels) labels->push_back(static_cast<int>(it - roots.begin()));
    if (it == roots.end()) {
      roots.push_back(root);
      out.push_back({values[i], 1});
    } else {
      auto& c = out[static_cast<std::size_t>(it - roots.begin())];
      c.center += values[i];
      ++c.multiplicity;
    }
  }
  for (auto& c : out) c.center /= static_cast<double>(c.multiplicity);
  return out;
}

CMatrix expm(const CMatrix& a) {
  CMatrix e = a.exp();
  if (!e.allFinite()) {
    throw Error(ErrorCode::numerical_failure,
                "matrix exponential produced non-finite entries");
  }
  return e;
}

CMatrix krylov_basis(const CMatrix& a, const CMatrix& starts, double rel_tol) {
  const Eigen::Index d = a.rows();
  CMatrix q(d, 0);
  // Candidates are processed breadth-first: every accepted direction spawns
  // a * direction as a new candidate.
  std::vector<CVector> pending;
  for (Eigen::Index j = 0; j < starts.cols(); ++j) pending.push_back(starts.col(j));
  std::size_t head = 0;
  while (head < pending.size() && q.cols() < d) {
    CVector v = pending[head++];
    const double before = v.norm();
    if (before == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      if (q.cols() > 0) v -= q * (q.adjoint() * v);
    }
    const double after = v.norm();
    if (after <= rel_tol * before) continue;
    v /= after;
    q.conservativeResize(d, q.cols() + 1);
    q.col(q.cols() - 1) = v;
    pending.push_back(a * v);
  }
  return q;
}

Complex pow_int(Complex z, int n) {
  if (n < 0) return 0.0;
  Complex out = 1.0;
  Complex base = z;
  while (n > 0) {
    if (n & 1) out *= base;
    base *= base;
    n >>= 1;
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return std::round(out);
}

double max_abs(std::span<const Complex> values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace spectrace
