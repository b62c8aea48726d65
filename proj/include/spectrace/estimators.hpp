#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectrace/hankel.hpp"
#include "spectrace/linalg.hpp"
#include "spectrace/systems.hpp"
#include "spectrace/types.hpp"

namespace spectrace {

enum class Method { prony_ls, prony_tls, mp_ls, mp_tls, mp_svd, esprit };

const char* to_string(Method m);
/// Throws invalid_argument on an unknown name.
Method parse_method(const std::string& name);
const std::vector<Method>& all_methods();

enum class Variant { LS, TLS, SVD };

struct EstimateDiagnostics {
  /// Relative residual of the linear system the method solved.
  double residual = 0.0;
  /// Eigenvalues discarded as zero padding (matrix pencil only).
  int pruned = 0;
  /// Eigenvalues at or below the pruning threshold before pruning.
  int below_threshold = 0;
  std::vector<Complex> raw_eigenvalues;
  /// Indices (into the output list) that sit on the logarithm's branch cut.
  std::vector<int> ambiguous;
  /// Zero eigenvalues removed by continuous_log_map.
  int dropped_zero = 0;
  /// Rank estimate when r was not supplied.
  std::optional<RankEstimate> rank;
  std::vector<std::string> warnings;
};

struct SpectrumEstimate {
  std::vector<Complex> eigenvalues;
  Method method = Method::prony_ls;
  int r_used = 0;
  EstimateDiagnostics diagnostics;
};

struct EstimatorConfig {
  std::optional<int> L;
  std::optional<int> r;
  /// Window used for rank estimation when r is absent; floor(M/2) otherwise.
  std::optional<int> rank_window;
  double eps_rel = 1e-8;
  /// Pencil eigenvalues with |lambda| <= eta_rel * max|lambda| count as zeros.
  double eta_rel = 1e-8;
  double pinv_rel = 1e-12;
  RankCriterion rank_policy = RankCriterion::quotient;

  /// Throws invalid_argument unless every threshold lies in (0, 1).
  void validate() const;
};

SpectrumEstimate prony(const ObservedSeries& series, int r, Variant variant,
                       double pinv_rel = 1e-12);

SpectrumEstimate matrix_pencil(const ObservedSeries& series, int r, int L,
                               Variant variant, double eta_rel = 1e-8,
                               double pinv_rel = 1e-12);

SpectrumEstimate esprit(const ObservedSeries& series, int r, int L,
                        double pinv_rel = 1e-12);

/// Runs `method`, estimating r from the data and choosing L by default when
/// the config leaves them open.
SpectrumEstimate estimate(const ObservedSeries& series, Method method,
                          const EstimatorConfig& cfg = {});

/// Maps discrete estimates mu = e^{dt lambda} back to lambda with the principal
/// logarithm.
SpectrumEstimate continuous_log_map(const SpectrumEstimate& est, double dt);

/// Groups nearby estimates to expose multiple roots.
std::vector<RootCluster> cluster_spectrum(const SpectrumEstimate& est,
                                          double radius = 1e-3);

}  // namespace spectrace
