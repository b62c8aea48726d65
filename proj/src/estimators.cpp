#include "spectrace/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spectrace {

namespace {

std::vector<Complex> eigenvalues_of(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical_failure, "eigenvalue iteration did not converge");
  }
  const CVector& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

void require_rank(int r) {
  if (r < 1) throw Error(ErrorCode::invalid_argument, "r must be >= 1");
}

void require_window(const ObservedSeries& series, int r, int L) {
  const int M = series.length();
  if (L < r || L > M - r) {
    throw Error(ErrorCode::out_of_range,
                "window length L=" + std::to_string(L) + " must satisfy r <= L <= M - r (r=" +
                    std::to_string(r) + ", M=" + std::to_string(M) + ")");
  }
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::prony_ls: return "prony_ls";
    case Method::prony_tls: return "prony_tls";
    case Method::mp_ls: return "mp_ls";
    case Method::mp_tls: return "mp_tls";
    case Method::mp_svd: return "mp_svd";
    case Method::esprit: return "esprit";
  }
  return "unknown";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::prony_ls, Method::prony_tls, Method::mp_ls,
                                           Method::mp_tls,   Method::mp_svd,    Method::esprit};
  return methods;
}

Method parse_method(const std::string& name) {
  for (Method m : all_methods()) {
    if (name == to_string(m)) return m;
  }
  if (name == "prony") return Method::prony_ls;
  throw Error(ErrorCode::invalid_argument, "unknown method '" + name + "'");
}

void EstimatorConfig::validate() const {
  for (double v : {eps_rel, eta_rel, pinv_rel}) {
    if (!(v > 0.0 && v < 1.0)) {
      throw Error(ErrorCode::invalid_argument, "thresholds must lie in (0, 1)");
    }
  }
  if (L && *L < 1) throw Error(ErrorCode::invalid_argument, "L must be >= 1");
  if (r && *r < 1) throw Error(ErrorCode::invalid_argument, "r must be >= 1");
  if (rank_window && *rank_window < 1) {
    throw Error(ErrorCode::invalid_argument, "rank window must be >= 1");
  }
}

SpectrumEstimate prony(const ObservedSeries& series, int r, Variant variant, double pinv_rel) {
  require_rank(r);
  const int M = series.length();
  if (M < r + 1 || (M - r) * series.width() < r) {
    throw Error(ErrorCode::insufficient_samples,
                "Prony with r=" + std::to_string(r) + " needs more samples than M=" +
                    std::to_string(M));
  }
  const HankelPair pair = build_hankel(series, r);
  const CMatrix h0 = pair.H0();
  const CVector h = pair.full.col(r);

  SpectrumEstimate est;
  est.r_used = r;
  est.method = variant == Variant::TLS ? Method::prony_tls : Method::prony_ls;

  CVector q;
  bool use_ls = variant != Variant::TLS;
  if (variant == Variant::TLS) {
    Eigen::JacobiSVD<CMatrix> svd(pair.full, Eigen::ComputeFullV);
    const CVector v = svd.matrixV().col(r);
    if (std::abs(v(r)) < 1e-12 * v.norm()) {
      est.diagnostics.warnings.push_back(
          "TLS normalization entry vanishes; fell back to least squares");
      use_ls = true;
    } else {
      q = v.head(r) / v(r);
    }
  }
  if (use_ls) {
    if (numerical_rank(h0, pinv_rel) < r) {
      est.diagnostics.warnings.push_back("H0 is rank deficient; Prony system is ill-posed");
    }
    q = -lstsq_thresholded(h0, h, pinv_rel);
  }
  est.diagnostics.residual = relative((h0 * q + h).norm(), h.norm());
  est.eigenvalues = companion_roots(std::span<const Complex>(q.data(), q.size()));
  est.diagnostics.raw_eigenvalues = est.eigenvalues;
  return est;
}

SpectrumEstimate matrix_pencil(const ObservedSeries& series, int r, int L, Variant variant,
                               double eta_rel, double pinv_rel) {
  require_rank(r);
  require_window(series, r, L);
  const HankelPair pair = build_hankel(series, L);

  SpectrumEstimate est;
  est.r_used = r;
  CMatrix c;
  switch (variant) {
    case Variant::LS: {
      est.method = Method::mp_ls;
      c = lstsq_thresholded(pair.H0(), pair.H1(), pinv_rel);
      est.diagnostics.residual =
          relative((pair.H0() * c - pair.H1()).norm(), pair.H1().norm());
      break;
    }
    case Variant::SVD: {
      est.method = Method::mp_svd;
      Eigen::JacobiSVD<CMatrix> svd(pair.full, Eigen::ComputeThinV);
      if (svd.matrixV().cols() < r) {
        throw Error(ErrorCode::insufficient_samples, "Hankel matrix has fewer than r singular vectors");
      }
      const CMatrix w = svd.matrixV().leftCols(r).adjoint();  // r x (L+1)
      c = lstsq_thresholded(w.leftCols(L), w.rightCols(L), pinv_rel);
      est.diagnostics.residual =
          relative((w.leftCols(L) * c - w.rightCols(L)).norm(), w.rightCols(L).norm());
      break;
    }
    case Variant::TLS: {
      est.method = Method::mp_tls;
      CMatrix stacked(pair.full.rows(), 2 * L);
      stacked << pair.H0(), pair.H1();
      Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeThinV);
      if (svd.matrixV().cols() < r) {
        throw Error(ErrorCode::insufficient_samples, "Hankel matrix has fewer than r singular vectors");
      }
      const CMatrix w = svd.matrixV().leftCols(r).adjoint();  // r x 2L
      c = lstsq_thresholded(w.leftCols(L), w.rightCols(L), pinv_rel);
      est.diagnostics.residual =
          relative((w.leftCols(L) * c - w.rightCols(L)).norm(), w.rightCols(L).norm());
      break;
    }
  }

  std::vector<Complex> raw = eigenvalues_of(c);
  est.diagnostics.raw_eigenvalues = raw;
  std::stable_sort(raw.begin(), raw.end(),
                   [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  const double threshold = eta_rel * max_abs(raw);
  for (Complex z : raw) {
    if (std::abs(z) <= threshold) ++est.diagnostics.below_threshold;
  }
  // Zero padding accounts for L - r eigenvalues; any further near-zero values
  // are genuine roots and stay.
  const int zeros = std::min(est.diagnostics.below_threshold, L - r);
  const int kept = L - zeros;
  est.diagnostics.pruned = zeros;
  est.eigenvalues.assign(raw.begin(), raw.begin() + kept);
  if (kept > r) {
    est.diagnostics.warnings.push_back(std::to_string(kept - r) +
                                       " eigenvalue(s) above the pruning threshold beyond r discarded");
    est.eigenvalues.resize(static_cast<std::size_t>(r));
  }
  if (est.diagnostics.below_threshold > L - r) {
    est.diagnostics.warnings.push_back("near-zero eigenvalue retained as a root");
  }
  return est;
}

SpectrumEstimate esprit(const ObservedSeries& series, int r, int L, double pinv_rel) {
  require_rank(r);
  require_window(series, r, L);
  const int w = series.width();
  const int M = series.length();
  if ((M - L - 1) * w < r) {
    throw Error(ErrorCode::insufficient_samples,
                "ESPRIT needs (M - L - 1) |Omega| >= r shifted rows");
  }
  const HankelPair pair = build_hankel(series, L);
  Eigen::JacobiSVD<CMatrix> svd(pair.full, Eigen::ComputeThinU);
  if (svd.matrixU().cols() < r) {
    throw Error(ErrorCode::insufficient_samples, "Hankel matrix has fewer than r singular vectors");
  }
  const CMatrix u = svd.matrixU().leftCols(r);
  const Eigen::Index n = u.rows() - w;
  const CMatrix upper = u.topRows(n);
  const CMatrix lower = u.bottomRows(n);
  const CMatrix j = lstsq_thresholded(upper, lower, pinv_rel);

  SpectrumEstimate est;
  est.method = Method::esprit;
  est.r_used = r;
  est.diagnostics.residual = relative((upper * j - lower).norm(), lower.norm());
  if (numerical_rank(upper, 1e-8) < r) {
    est.diagnostics.warnings.push_back("shifted signal basis is ill-conditioned");
  }
  est.eigenvalues = eigenvalues_of(j);
  est.diagnostics.raw_eigenvalues = est.eigenvalues;
  return est;
}

SpectrumEstimate estimate(const ObservedSeries& series, Method method, const EstimatorConfig& cfg) {
  cfg.validate();
  const int M = series.length();
  std::optional<RankEstimate> rank;
  int r = 0;
  if (cfg.r) {
    r = *cfg.r;
  } else {
    const int window = std::clamp(cfg.rank_window.value_or(default_window(M)), 1, std::max(1, M - 1));
    rank = estimate_rank(build_hankel(series, window), RankOptions{cfg.eps_rel, cfg.rank_policy, 10.0});
    r = rank->chosen;
  }

  SpectrumEstimate est;
  if (r == 0) {
    est.method = method;
    est.diagnostics.warnings.push_back("series is identically zero; no eigenvalue recoverable");
    est.diagnostics.rank = rank;
    return est;
  }
  const int L = cfg.L.value_or(default_window(M, r));
  switch (method) {
    case Method::prony_ls: est = prony(series, r, Variant::LS, cfg.pinv_rel); break;
    case Method::prony_tls: est = prony(series, r, Variant::TLS, cfg.pinv_rel); break;
    case Method::mp_ls: est = matrix_pencil(series, r, L, Variant::LS, cfg.eta_rel, cfg.pinv_rel); break;
    case Method::mp_tls: est = matrix_pencil(series, r, L, Variant::TLS, cfg.eta_rel, cfg.pinv_rel); break;
    case Method::mp_svd: est = matrix_pencil(series, r, L, Variant::SVD, cfg.eta_rel, cfg.pinv_rel); break;
    case Method::esprit: est = esprit(series, r, L, cfg.pinv_rel); break;
  }
  est.diagnostics.rank = rank;
  return est;
}

SpectrumEstimate continuous_log_map(const SpectrumEstimate& est, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
  SpectrumEstimate out = est;
  out.eigenvalues.clear();
  out.diagnostics.ambiguous.clear();
  constexpr double cut = std::numbers::pi * (1.0 - 1e-9);
  for (Complex mu : est.eigenvalues) {
    if (mu == Complex(0.0, 0.0)) {
      ++out.diagnostics.dropped_zero;
      continue;
    }
    const Complex l = std::log(mu);
    if (std::abs(l.imag()) >= cut) {
      out.diagnostics.ambiguous.push_back(static_cast<int>(out.eigenvalues.size()));
      out.eigenvalues.push_back(mu);
    } else {
      out.eigenvalues.push_back(l / dt);
    }
  }
  if (out.diagnostics.dropped_zero > 0) {
    out.diagnostics.warnings.push_back("zero eigenvalue has no logarithm; dropped");
  }
  if (!out.diagnostics.ambiguous.empty()) {
    out.diagnostics.warnings.push_back("eigenvalue on the logarithm branch cut passed through");
  }
  return out;
}

std::vector<RootCluster> cluster_spectrum(const SpectrumEstimate& est, double radius) {
  return cluster_values(est.eigenvalues, radius);
}

}  // namespace spectrace
