#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spectrace/estimators.hpp"
#include "spectrace/graphs.hpp"
#include "spectrace/json_io.hpp"
#include "spectrace/metrics.hpp"

namespace spectrace {

struct JordanSource {
  SystemFile system;
};

struct GraphSource {
  std::string family = "ring";  ///< ring | random | knn
  int d = 0;
  int k = 0;       ///< neighbours (ring, knn)
  int edges = 0;   ///< edge count (random)
  OperatorKind op = OperatorKind::transition;
  /// Explicit initial state; when empty a seeded one is drawn.
  RVector x0;
  /// Seeded draw: standard normal entries, or a uniform random probability
  /// vector when set.
  bool distribution = false;
};

struct CsvSource {
  std::string path;
  bool normalize = false;
};

using Source = std::variant<JordanSource, GraphSource, CsvSource>;

enum class DifferenceMode { automatic, always, never };

struct ExperimentConfig {
  std::string name = "experiment";
  Source source;
  Sampling sampling;
  std::vector<IndexSet> omegas;
  std::vector<int> Ms;
  std::vector<Method> methods;
  /// Estimator window; floor(M'/2) clipped to [r, M' - r] when absent.
  std::optional<int> L;
  /// Rank window: the state dimension when unset and known, else floor(M'/2).
  std::optional<int> rank_window;
  bool rank_window_half = false;
  EstimatorConfig thresholds;
  DifferenceMode difference = DifferenceMode::automatic;
  bool injective = false;
  std::uint64_t seed = 0;
  std::string output;
  int threads = 0;

  /// Relative file paths are resolved against `base_dir`.
  static ExperimentConfig from_json(const Json& j, const std::string& base_dir = ".");
  static ExperimentConfig load(const std::string& path);
};

/// The config seed unless SPECTRACE_SEED holds an unsigned integer.
std::uint64_t effective_seed(const ExperimentConfig& cfg);

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  Json report;
};

/// Runs every (omega, M) cell, in parallel up to `max_threads` workers
/// (0 = config value, then hardware concurrency). Rows are ordered by cell
/// and method regardless of scheduling.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int max_threads = 0);

}  // namespace spectrace
