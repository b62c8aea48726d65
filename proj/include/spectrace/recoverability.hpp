#pragma once

#include <string>
#include <vector>

#include "spectrace/systems.hpp"
#include "spectrace/types.hpp"

namespace spectrace {

struct OracleTolerances {
  /// Inner products below this fraction of the operand norms count as zero.
  double orth_rel = 1e-10;
  /// Eigenvalues closer than this are merged before building projectors.
  double cluster = 1e-9;
  /// Eigenvector condition number above which the numeric path gives up.
  double max_condition = 1e8;
};

/// Degree of the minimal polynomial of b with respect to A: the numerical rank
/// of [b, Ab, ..., A^d b] with unit-normalized columns.
int min_poly_degree(const CMatrix& a, const CVector& b, double rel = 1e-10);

/// Degree of the minimal (S_Omega, A, b)-annihilator from an observed series:
/// the numerical rank of the Hankel matrix with window L = d. Needs M >= 2d.
int annihilator_degree(const ObservedSeries& series, int d, double rel = 1e-10);

/// Same degree computed from the system: the observable dimension of the pair
/// (S_Omega Q, Q^* A Q) where Q spans the Krylov space of (A, b).
int annihilator_degree(const CMatrix& a, const CVector& b, const IndexSet& omega,
                       double rel = 1e-10);

enum class OraclePath { jordan_exact, numeric_diagonalizable, data_fallback };

const char* to_string(OraclePath p);

struct EigenRecord {
  Complex value;
  int multiplicity = 1;  ///< algebraic multiplicity
  bool recoverable = false;
  int local_degree = 0;  ///< r_s; meaningless on the fallback path
};

struct RecoverabilityReport {
  std::vector<EigenRecord> eigenvalues;
  int total_degree = 0;
  CVector effective_vector;
  IndexSet omega;
  OraclePath path = OraclePath::jordan_exact;
  std::vector<std::string> warnings;

  /// Recoverable eigenvalues, each repeated local_degree times.
  std::vector<Complex> recoverable_roots() const;
};

/// Per-eigenvalue minimal polynomial degrees of the components of U^{-1} v.
std::vector<int> local_min_poly_degrees(const JordanSpec& spec, const CVector& v,
                                        double rel = 1e-10);

RecoverabilityReport recoverable_set_jordan(const JordanSpec& spec, const CVector& v,
                                            const IndexSet& omega,
                                            const OracleTolerances& tol = {});

/// Diagonalizable path via spectral projectors. Falls back to the rank-only
/// annihilator degree when the eigenvectors are too ill-conditioned.
RecoverabilityReport recoverable_set_numeric(const CMatrix& a, const CVector& v,
                                             const IndexSet& omega,
                                             const OracleTolerances& tol = {});

/// Discrete: (A - I) b + c. Continuous: (e^{dt A} - I) b + g(dt; A) c.
CVector effective_vector(const AffineSystem& sys, const Sampling& sampling);

struct PenthouseFamily {
  /// 1-based coordinates of the cyclic vectors, per eigenvalue.
  std::vector<std::vector<int>> cyclic_indices;
  /// Orthogonal projections onto the span of those coordinates.
  std::vector<CMatrix> projections;
};

PenthouseFamily penthouse(const JordanSpec& spec);

struct UniversalityCertificate {
  bool universal = false;
  bool krylov_criterion = false;
  bool penthouse_criterion = false;
  /// Rank of the stacked Krylov space of A^* on {e_i}.
  int krylov_rank = 0;
  /// Rank of {P_s U^* e_i} against the number of blocks, per eigenvalue.
  std::vector<int> penthouse_ranks;
  std::vector<int> block_counts;
  std::vector<std::string> warnings;
};

UniversalityCertificate is_universal(const JordanSpec& spec, const IndexSet& omega,
                                     double rel = 1e-10);

}  // namespace spectrace
