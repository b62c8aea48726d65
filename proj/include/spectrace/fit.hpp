#pragma once

#include <vector>

#include "spectrace/types.hpp"

namespace spectrace {

struct LinearFit {
  RMatrix A;
  /// ||A X_past - X_future|| / ||X_future||.
  double residual = 0.0;
  /// Numerical rank of X_past (threshold 1e-10 relative).
  int snapshot_rank = 0;
  /// X_past has rank below the state dimension; A is a minimum-norm fit.
  bool degenerate = false;
};

/// Least-squares one-step model from an M x d snapshot matrix (one state per
/// row): A = X_future X_past^+ with X_past = [x_0 ... x_{M-2}].
LinearFit fit_linear_system(const RMatrix& snapshots, double pinv_rel = 1e-12);

struct NormalizedSnapshots {
  RMatrix data;
  RVector mean;
  RVector stddev;
  /// 0-based columns with zero variance (std clamped to 1).
  std::vector<int> constant_channels;
};

/// Per-column mean 0 and sample standard deviation 1.
NormalizedSnapshots normalize_columns(const RMatrix& snapshots);

}  // namespace spectrace
