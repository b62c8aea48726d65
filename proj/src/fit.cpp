#include "spectrace/fit.hpp"

#include <cmath>

#include "spectrace/linalg.hpp"

namespace spectrace {

LinearFit fit_linear_system(const RMatrix& snapshots, double pinv_rel) {
  const Eigen::Index m = snapshots.rows();
  const Eigen::Index d = snapshots.cols();
  if (m < 2 || d < 1) {
    throw Error(ErrorCode::insufficient_samples, "fitting needs at least 2 snapshots");
  }
  const RMatrix past = snapshots.topRows(m - 1).transpose();
  const RMatrix future = snapshots.bottomRows(m - 1).transpose();

  LinearFit fit;
  const CMatrix cpast = past.cast<Complex>();
  fit.snapshot_rank = past.norm() > 0.0 ? numerical_rank(cpast, 1e-10) : 0;
  fit.degenerate = fit.snapshot_rank < d;
  fit.A = lstsq_thresholded(cpast.transpose(), future.transpose().cast<Complex>(), pinv_rel)
              .real()
              .transpose();
  const double fn = future.norm();
  const double rn = (fit.A * past - future).norm();
  fit.residual = fn > 0.0 ? rn / fn : rn;
  return fit;
}

NormalizedSnapshots normalize_columns(const RMatrix& snapshots) {
  const Eigen::Index m = snapshots.rows();
  if (m < 2) throw Error(ErrorCode::insufficient_samples, "normalization needs at least 2 rows");
  NormalizedSnapshots out;
  out.mean = snapshots.colwise().mean().transpose();
  out.data = snapshots.rowwise() - out.mean.transpose();
  out.stddev = (out.data.colwise().squaredNorm() / static_cast<double>(m - 1)).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < snapshots.cols(); ++j) {
    if (out.stddev(j) == 0.0) {
      out.stddev(j) = 1.0;
      out.constant_channels.push_back(static_cast<int>(j));
    }
    out.data.col(j) /= out.stddev(j);
  }
  return out;
}

}  // namespace spectrace
