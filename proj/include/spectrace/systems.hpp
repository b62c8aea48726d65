#pragma once

#include <vector>

#include "spectrace/types.hpp"

namespace spectrace {

/// x_{t+1} = A x_t + c with x_0 = b.
struct AffineSystem {
  CMatrix A;
  CVector b;
  CVector c;

  /// Validates shapes; throws dimension_mismatch.
  static AffineSystem make(CMatrix a, CVector b, CVector c);
  /// Homogeneous system (c = 0).
  static AffineSystem homogeneous(CMatrix a, CVector b);

  int dim() const { return static_cast<int>(A.rows()); }
};

/// Jordan data for A = U J U^{-1}.
///
/// `blocks[s]` lists the nilpotent block sizes of eigenvalue s in
/// non-increasing order. Within each block the nilpotent part carries ones on
/// the subdiagonal, and the blocks of eigenvalue s occupy a contiguous range
/// of coordinates starting at offset(s).
struct JordanSpec {
  std::vector<Complex> eigenvalues;
  std::vector<std::vector<int>> blocks;
  CMatrix U;

  /// Throws invalid_argument / dimension_mismatch / singular_matrix.
  void validate() const;

  int dim() const;
  /// h_s, the algebraic multiplicity of eigenvalue s.
  int multiplicity(std::size_t s) const;
  /// First coordinate (0-based) of eigenvalue s's invariant subspace.
  int offset(std::size_t s) const;
  /// Block diagonal J with J_s = lambda_s I + N_s.
  CMatrix jordan_matrix() const;
  /// N_s as an h_s x h_s matrix.
  CMatrix nilpotent(std::size_t s) const;
  /// U J U^{-1}.
  CMatrix system_matrix() const;
  bool diagonalizable() const;
};

enum class StepKind { discrete, continuous };

struct Sampling {
  StepKind kind = StepKind::discrete;
  double dt = 1.0;

  static Sampling discrete() { return {}; }
  static Sampling continuous(double dt) { return {StepKind::continuous, dt}; }
};

struct Trajectory {
  std::vector<CVector> states;
  Sampling sampling;

  int length() const { return static_cast<int>(states.size()); }
};

/// Partial samples S_Omega x_t. Row t of `samples` holds x_t at the indices of
/// `omega` (1-based, ascending).
struct ObservedSeries {
  IndexSet omega;
  CMatrix samples;
  Sampling sampling;

  int length() const { return static_cast<int>(samples.rows()); }
  int width() const { return static_cast<int>(samples.cols()); }
};

AffineSystem build_from_jordan(const JordanSpec& spec, const CVector& b,
                               const CVector& c);

Trajectory simulate_discrete(const AffineSystem& sys, int steps);

/// Samples x(l * dt), l = 0..steps-1, of x' = A x + c, x(0) = b.
Trajectory simulate_continuous(const AffineSystem& sys, double dt, int steps);

/// g(t; A) = sum_k t^{k+1}/(k+1)! A^k, so that x(t) = e^{tA} b + g(t; A) c.
CMatrix g_function(double t, const CMatrix& a);

ObservedSeries observe(const Trajectory& traj, const IndexSet& omega);

/// Row t of the result is row t+1 minus row t.
ObservedSeries difference_transform(const ObservedSeries& series);

}  // namespace spectrace
