#pragma once

#include <span>
#include <vector>

#include "spectrace/types.hpp"

namespace spectrace {

/// SVD-based pseudo-inverse. Singular values at or below rel * sigma_1 are
/// treated as zero.
CMatrix pinv_thresholded(const CMatrix& m, double rel = 1e-12);

/// m^+ rhs with the same cutoff as pinv_thresholded, applied factor by factor
/// (U^* rhs first) rather than through an explicit pseudo-inverse, which loses
/// accuracy when m is ill-conditioned.
CMatrix lstsq_thresholded(const CMatrix& m, const CMatrix& rhs, double rel = 1e-12);

/// Descending singular values.
RVector singular_values(const CMatrix& m);

/// Number of singular values strictly above rel * sigma_1.
int numerical_rank(const CMatrix& m, double rel);

/// Roots of z^n + c[n-1] z^{n-1} + ... + c[0], computed as eigenvalues of the
/// balanced companion matrix.
std::vector<Complex> companion_roots(std::span<const Complex> monic_coeffs);

/// Coefficients c[0..n-1] of prod (z - root), leading 1 implicit.
std::vector<Complex> poly_from_roots(std::span<const Complex> roots);

struct RootCluster {
  Complex center;
  int multiplicity = 0;
};

/// Single-linkage clustering of complex values within `radius`. Clusters are
/// returned in order of first appearance; the center is the member mean.
/// `labels`, when given, receives the cluster index of every value.
std::vector<RootCluster> cluster_values(std::span<const Complex> values,
                                        double radius,
                                        std::vector<int>* labels = nullptr);

/// Matrix exponential. Throws numerical_failure on non-finite output.
CMatrix expm(const CMatrix& a);

/// Orthonormal basis of sum_j K_inf(a, starts.col(j)) by block Arnoldi with
/// reorthogonalization. A candidate direction is dropped when its residual
/// after projection falls to rel_tol times its norm before projection.
CMatrix krylov_basis(const CMatrix& a, const CMatrix& starts, double rel_tol);

/// z^n with the convention 0^0 = 1; returns 0 for negative n.
Complex pow_int(Complex z, int n);

double binomial(int n, int k);

/// Largest modulus across the list; 0 for an empty list.
double max_abs(std::span<const Complex> values);

}  // namespace spectrace
