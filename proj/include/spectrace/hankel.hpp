#pragma once

#include <vector>

#include "spectrace/systems.hpp"
#include "spectrace/types.hpp"

namespace spectrace {

/// Stacked Hankel-like matrix of an observed series and its two shifted
/// windows.
///
/// Rows are grouped in time-major blocks of |Omega| rows: block m of column l
/// holds the samples at time m + l in ascending Omega order. `full` has
/// (M - L) |Omega| rows and L + 1 columns.
struct HankelPair {
  CMatrix full;
  int M = 0;
  int L = 0;
  IndexSet omega;

  int block_height() const { return static_cast<int>(omega.size()); }
  int block_rows() const { return M - L; }
  /// Columns 1..L of `full` (the unshifted window).
  auto H0() const { return full.leftCols(L); }
  /// Columns 2..L+1 of `full` (shifted by one sample).
  auto H1() const { return full.rightCols(L); }
};

HankelPair build_hankel(const ObservedSeries& series, int L);

enum class RankCriterion { absolute, quotient, gap };

const char* to_string(RankCriterion c);

struct RankEstimate {
  RVector singular_values;
  int r_abs = 0;
  int r_quot = 0;
  int r_gap = 0;
  int chosen = 0;
  /// Criterion that produced `chosen` (after the flat-spectrum fallback).
  RankCriterion chosen_by = RankCriterion::quotient;
  /// Largest finite singular value quotient sigma_r / sigma_{r+1}.
  double max_quotient = 0.0;
};

struct RankOptions {
  double eps_rel = 1e-8;
  RankCriterion policy = RankCriterion::quotient;
  /// With the quotient or gap policy, a largest quotient below this value
  /// means no clear gap; the absolute count is used instead.
  double flat_quotient = 10.0;
};

/// Three numerical-rank criteria on the singular values of `pair.full`.
RankEstimate estimate_rank(const HankelPair& pair, const RankOptions& opts = {});
RankEstimate estimate_rank_from_singular_values(const RVector& sigma,
                                                const RankOptions& opts = {});

/// Default window length: floor(M/2), clipped to [r, M - r] when r > 0.
int default_window(int M, int r = 0);

/// Per-index Hankel matrices H_{{i},M-L,L+1}, in Omega order.
std::vector<CMatrix> permute_stacked(const HankelPair& pair);
/// Inverse of permute_stacked: interleaves the per-index matrices back into
/// the time-major layout.
CMatrix restack(const std::vector<CMatrix>& per_index);

/// Factors of H(t) = V_{M-L}^T Lambda Jhat^t V_L for a single observed index.
struct JordanFactorization {
  CMatrix V_left;   ///< r x (M - L)
  CMatrix V_right;  ///< r x L
  CMatrix Lambda;   ///< r x r, block diagonal of triangular Hankel blocks
  CMatrix J_hat;    ///< r x r, reduced Jordan matrix
  std::vector<int> local_degrees;  ///< r_s per spec eigenvalue (0 = dropped)

  CMatrix reconstruct(int t) const;
};

/// Factorization of the Hankel windows of the homogeneous series
/// e_i^T A^t b with A = U J U^{-1}. `index` is 1-based.
JordanFactorization jordan_factorization(const JordanSpec& spec,
                                         const CVector& b, int index, int M,
                                         int L, double rel_tol = 1e-10);

}  // namespace spectrace
