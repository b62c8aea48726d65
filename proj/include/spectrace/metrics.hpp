#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spectrace/types.hpp"

namespace spectrace {

struct MatchResult {
  /// (exact, estimate) pairs in estimate order.
  std::vector<std::pair<Complex, Complex>> pairs;
  /// Index into the exact list for every pair.
  std::vector<int> exact_index;
  std::vector<Complex> unmatched_exact;
  std::vector<Complex> unmatched_est;
};

/// Pairs every estimate with its nearest exact value. Exact values may be
/// reused; ties go to the smallest exact index. With `injective` set, a
/// minimum-cost one-to-one assignment (squared distances) is used instead and
/// surplus values on either side stay unmatched.
MatchResult match_spectra(std::span<const Complex> exact, std::span<const Complex> est,
                          bool injective = false);

/// sqrt(mean |lambda - lambda_hat|^2) over the matched pairs.
double rmse(const MatchResult& m);
/// max |lambda - lambda_hat| over the matched pairs.
double ine(const MatchResult& m);

/// Symmetric Hausdorff distance between two finite sets.
double hausdorff(std::span<const Complex> a, std::span<const Complex> b);

struct MetricsRow {
  int config_index = 0;
  IndexSet omega;
  int M = 0;
  /// Degree predicted by the oracle (or -1 when unknown).
  int r = -1;
  int r_hat = 0;
  std::string method;
  double rmse = 0.0;
  double ine = 0.0;
  /// Empty on success; otherwise the error that aborted this row.
  std::string error;

  bool operator==(const MetricsRow&) const = default;
};

/// Header: index,omega,M,r,r_hat,method,rmse,ine,error. Omega is written as
/// a space-separated list so it survives CSV splitting.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

}  // namespace spectrace
