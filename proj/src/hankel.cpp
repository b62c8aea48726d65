#include "spectrace/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spectrace/linalg.hpp"

namespace spectrace {

HankelPair build_hankel(const ObservedSeries& series, int L) {
  const int M = series.length();
  if (L < 1 || L > M - 1) {
    throw Error(ErrorCode::out_of_range,
                "window length L=" + std::to_string(L) + " outside [1, " +
                    std::to_string(M - 1) + "]");
  }
  const int w = series.width();
  HankelPair pair;
  pair.M = M;
  pair.L = L;
  pair.omega = series.omega;
  pair.full.resize(static_cast<Eigen::Index>(M - L) * w, L + 1);
  for (int l = 0; l <= L; ++l) {
    for (int m = 0; m < M - L; ++m) {
      pair.full.block(static_cast<Eigen::Index>(m) * w, l, w, 1) =
          series.samples.row(m + l).transpose();
    }
  }
  return pair;
}

const char* to_string(RankCriterion c) {
  switch (c) {
    case RankCriterion::absolute: return "absolute";
    case RankCriterion::quotient: return "quotient";
    case RankCriterion::gap: return "gap";
  }
  return "unknown";
}

RankEstimate estimate_rank_from_singular_values(const RVector& sigma,
                                                const RankOptions& opts) {
  if (sigma.size() == 0) {
    throw Error(ErrorCode::invalid_argument, "rank estimate of an empty matrix");
  }
  RankEstimate est;
  est.singular_values = sigma;
  const Eigen::Index n = sigma.size();
  if (sigma(0) == 0.0) {
    est.chosen_by = RankCriterion::absolute;
    return est;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (sigma(i) > opts.eps_rel * sigma(0)) ++est.r_abs;
  }

  if (n == 1) {
    est.r_quot = est.r_gap = 1;
  } else {
    constexpr double big = std::numeric_limits<double>::max();
    // q[r-1] = sigma_r / sigma_{r+1}; a vanishing denominator counts as +inf
    // unless the numerator vanishes too.
    std::vector<double> q(static_cast<std::size_t>(n - 1));
    for (Eigen::Index r = 0; r + 1 < n; ++r) {
      if (sigma(r + 1) > 0.0) {
        q[r] = sigma(r) / sigma(r + 1);
      } else {
        q[r] = sigma(r) > 0.0 ? big : 0.0;
      }
    }
    const auto best = std::max_element(q.begin(), q.end());
    est.r_quot = static_cast<int>(best - q.begin()) + 1;
    for (double v : q) {
      if (v < big) est.max_quotient = std::max(est.max_quotient, v);
    }
    if (*best == big) est.max_quotient = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order(q.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });
    if (order.size() == 1) {
      est.r_gap = est.r_quot;
    } else {
      std::size_t best_pos = 0;
      double best_gap = -1.0;
      for (std::size_t j = 0; j + 1 < order.size(); ++j) {
        const double gap = q[order[j]] - q[order[j + 1]];
        if (gap > best_gap) {
          best_gap = gap;
          best_pos = j;
        }
      }
      est.r_gap = static_cast<int>(order[best_pos]) + 1;
    }
  }

  switch (opts.policy) {
    case RankCriterion::absolute:
      est.chosen = est.r_abs;
      est.chosen_by = RankCriterion::absolute;
      break;
    case RankCriterion::quotient:
    case RankCriterion::gap:
      if (n > 1 && est.max_quotient < opts.flat_quotient) {
        est.chosen = est.r_abs;
        est.chosen_by = RankCriterion::absolute;
      } else if (opts.policy == RankCriterion::quotient) {
        est.chosen = est.r_quot;
        est.chosen_by = RankCriterion::quotient;
      } else {
        est.chosen = est.r_gap;
        est.chosen_by = RankCriterion::gap;
      }
      break;
  }
  return est;
}

RankEstimate estimate_rank(const HankelPair& pair, const RankOptions& opts) {
  if (pair.full.size() == 0) {
    throw Error(ErrorCode::invalid_argument, "rank estimate of an empty matrix");
  }
  return estimate_rank_from_singular_values(singular_values(pair.full), opts);
}

int default_window(int M, int r) {
  int L = M / 2;
  if (r > 0) L = std::clamp(L, r, std::max(r, M - r));
  return std::max(L, 1);
}

std::vector<CMatrix> permute_stacked(const HankelPair& pair) {
  const int w = pair.block_height();
  const int rows = pair.block_rows();
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(w));
  for (int k = 0; k < w; ++k) {
    CMatrix h(rows, pair.full.cols());
    for (int m = 0; m < rows; ++m) h.row(m) = pair.full.row(static_cast<Eigen::Index>(m) * w + k);
    out.push_back(std::move(h));
  }
  return out;
}

CMatrix restack(const std::vector<CMatrix>& per_index) {
  if (per_index.empty()) return CMatrix();
  const auto w = static_cast<Eigen::Index>(per_index.size());
  const Eigen::Index rows = per_index.front().rows();
  CMatrix full(rows * w, per_index.front().cols());
  for (Eigen::Index k = 0; k < w; ++k) {
    for (Eigen::Index m = 0; m < rows; ++m) full.row(m * w + k) = per_index[k].row(m);
  }
  return full;
}

CMatrix JordanFactorization::reconstruct(int t) const {
  CMatrix jt = CMatrix::Identity(J_hat.rows(), J_hat.cols());
  for (int k = 0; k < t; ++k) jt = jt * J_hat;
  return V_left.transpose() * Lambda * jt * V_right;
}

JordanFactorization jordan_factorization(const JordanSpec& spec,
                                         const CVector& b, int index, int M,
                                         int L, double rel_tol) {
  spec.validate();
  const int d = spec.dim();
  if (b.size() != d) {
    throw Error(ErrorCode::dimension_mismatch, "initial state has wrong length");
  }
  if (index < 1 || index > d) {
    throw Error(ErrorCode::out_of_range, "observed index outside [1, d]");
  }
  if (L < 1 || L > M - 1) {
    throw Error(ErrorCode::out_of_range, "window length outside [1, M-1]");
  }
  const CVector z = spec.U.partialPivLu().solve(b);
  // e_i^T U J^n z = <J^n z, U^* e_i>, so the observation functional in Jordan
  // coordinates is the i-th row of U (no conjugation).
  const CVector u = spec.U.row(index - 1).transpose();
  const double scale = z.norm() * u.norm();

  JordanFactorization f;
  std::vector<std::vector<Complex>> moments;
  int r = 0;
  for (std::size_t s = 0; s < spec.eigenvalues.size(); ++s) {
    const int h = spec.multiplicity(s);
    const int off = spec.offset(s);
    const CMatrix n = spec.nilpotent(s);
    CVector v = z.segment(off, h);
    std::vector<Complex> a;
    int degree = 0;
    for (int k = 0; k < h; ++k) {
      const Complex ak = (u.segment(off, h).array() * v.array()).sum();
      a.push_back(ak);
      if (std::abs(ak) > rel_tol * scale) degree = k + 1;
      v = n * v;
    }
    a.resize(static_cast<std::size_t>(degree));
    f.local_degrees.push_back(degree);
    moments.push_back(std::move(a));
    r += degree;
  }

  f.V_left = CMatrix::Zero(r, M - L);
  f.V_right = CMatrix::Zero(r, L);
  f.Lambda = CMatrix::Zero(r, r);
  f.J_hat = CMatrix::Zero(r, r);
  int row = 0;
  for (std::size_t s = 0; s < spec.eigenvalues.size(); ++s) {
    const int rs = f.local_degrees[s];
    const Complex lambda = spec.eigenvalues[s];
    for (int k = 0; k < rs; ++k) {
      for (int l = 0; l < L; ++l) {
        f.V_right(row + k, l) = binomial(l, k) * pow_int(lambda, l - k);
      }
      for (int m = 0; m < M - L; ++m) {
        f.V_left(row + k, m) = binomial(m, k) * pow_int(lambda, m - k);
      }
      for (int j = 0; j + k < rs; ++j) f.Lambda(row + k, row + j) = moments[s][k + j];
      f.J_hat(row + k, row + k) = lambda;
      if (k > 0) f.J_hat(row + k, row + k - 1) = 1.0;
    }
    row += rs;
  }
  return f;
}

}  // namespace spectrace
