// spectrace: command-line front end for simulation, rank estimation,
// eigenvalue recovery, recoverability oracles, experiments and fitting.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <Eigen/Eigenvalues>

#include "CLI11.hpp"
#include "spectrace/estimators.hpp"
#include "spectrace/experiment.hpp"
#include "spectrace/fit.hpp"
#include "spectrace/graphs.hpp"
#include "spectrace/io.hpp"
#include "spectrace/json_io.hpp"
#include "spectrace/metrics.hpp"
#include "spectrace/recoverability.hpp"
#include "spectrace/rng.hpp"

namespace {

using namespace spectrace;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  return out;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

struct SimulateArgs {
  std::string spec, graph, op = "transition", omega, output;
  int d = 0, k = 0, edges = 0, steps = 0;
  std::uint64_t seed = 0;
  bool distribution = false;
  std::optional<double> dt;
};

void run_simulate(const SimulateArgs& a) {
  AffineSystem sys;
  if (!a.spec.empty()) {
    const SystemFile f = load_system_file(a.spec);
    sys = build_from_jordan(f.spec, f.b, f.c);
  } else if (!a.graph.empty()) {
    GraphSource g;
    g.family = a.graph;
    g.d = a.d;
    g.k = a.k;
    g.edges = a.edges;
    if (a.op == "diffusion") {
      g.op = OperatorKind::diffusion;
    } else if (a.op == "laplacian") {
      g.op = OperatorKind::laplacian;
    } else if (a.op != "transition") {
      throw Error(ErrorCode::invalid_argument, "unknown operator '" + a.op + "'");
    }
    SplitMix64 rng(a.seed);
    WeightedDigraph w;
    if (g.family == "ring") {
      w = ring_graph(g.d, g.k);
    } else if (g.family == "random") {
      w = random_digraph(g.d, g.edges, rng());
    } else if (g.family == "knn") {
      w = knn_sphere_graph(g.d, g.k, rng());
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown graph family '" + g.family + "'");
    }
    sys = graph_system(w, g.op, draw_initial_state(g.d, a.distribution, rng));
  } else {
    throw Error(ErrorCode::invalid_argument, "simulate needs --spec or --graph");
  }
  const Trajectory traj = a.dt ? simulate_continuous(sys, *a.dt, a.steps) : simulate_discrete(sys, a.steps);
  IndexSet omega;
  if (a.omega.empty()) {
    for (int i = 1; i <= sys.dim(); ++i) omega.push_back(i);
  } else {
    omega = parse_omega(a.omega);
  }
  const ObservedSeries series = observe(traj, omega);
  auto out = open_output(a.output);
  write_series_csv(out, series);
  emit(Json{{"output", a.output}, {"M", series.length()}, {"omega", series.omega}, {"dimension", sys.dim()}});
}

struct RankArgs {
  std::string input, policy = "quotient";
  std::optional<int> L;
  double eps = 1e-8;
  bool difference = false;
};

RankCriterion parse_policy(const std::string& p) {
  if (p == "quotient") return RankCriterion::quotient;
  if (p == "absolute") return RankCriterion::absolute;
  if (p == "gap") return RankCriterion::gap;
  throw Error(ErrorCode::invalid_argument, "unknown rank policy '" + p + "'");
}

ObservedSeries load_input(const std::string& path, bool difference) {
  ObservedSeries s = load_series(path);
  return difference ? difference_transform(s) : s;
}

void run_rank(const RankArgs& a) {
  const ObservedSeries s = load_input(a.input, a.difference);
  const int L = a.L.value_or(default_window(s.length()));
  const RankEstimate est = estimate_rank(build_hankel(s, L), RankOptions{a.eps, parse_policy(a.policy), 10.0});
  Json j = rank_to_json(est);
  j["L"] = L;
  emit(j);
}

struct EstimateArgs {
  std::string input, method = "prony_ls", r = "auto", exact, policy = "quotient";
  std::optional<int> L, rank_window;
  std::optional<double> dt;
  double eps = 1e-8, eta = 1e-8, pinv = 1e-12;
  bool difference = false;
};

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  for (const auto& f : split_csv_line(text)) {
    if (!f.empty()) out.push_back(parse_complex(f));
  }
  return out;
}

void run_estimate(const EstimateArgs& a) {
  const ObservedSeries s = load_input(a.input, a.difference);
  EstimatorConfig cfg;
  cfg.L = a.L;
  cfg.rank_window = a.rank_window;
  cfg.eps_rel = a.eps;
  cfg.eta_rel = a.eta;
  cfg.pinv_rel = a.pinv;
  cfg.rank_policy = parse_policy(a.policy);
  if (a.r != "auto") {
    try {
      cfg.r = std::stoi(a.r);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "--r must be an integer or 'auto'");
    }
  }
  SpectrumEstimate est = estimate(s, parse_method(a.method), cfg);
  if (a.dt) est = continuous_log_map(est, *a.dt);
  std::optional<double> e_rmse, e_ine;
  const auto exact = parse_complex_list(a.exact);
  if (!exact.empty() && !est.eigenvalues.empty()) {
    const MatchResult m = match_spectra(exact, est.eigenvalues);
    e_rmse = rmse(m);
    e_ine = ine(m);
  }
  emit(estimate_to_json(est, e_rmse, e_ine));
}

struct OracleArgs {
  std::string spec, omega;
  std::optional<double> dt;
};

void run_oracle(const OracleArgs& a) {
  const SystemFile f = load_system_file(a.spec);
  const AffineSystem sys = build_from_jordan(f.spec, f.b, f.c);
  const Sampling sampling = a.dt ? Sampling::continuous(*a.dt) : Sampling::discrete();
  const bool affine = f.c.norm() > 0.0;
  const CVector v = affine ? effective_vector(sys, sampling) : f.b;
  const IndexSet omega = parse_omega(a.omega);
  Json j = report_to_json(recoverable_set_jordan(f.spec, v, omega));
  j["effective_vector_kind"] = affine ? (a.dt ? "continuous" : "discrete") : "initial_state";
  j["universality"] = certificate_to_json(is_universal(f.spec, omega));
  emit(j);
}

struct ExperimentArgs {
  std::string config, output;
  int threads = 0;
};

void run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = ExperimentConfig::load(a.config);
  if (!a.output.empty()) cfg.output = a.output;
  const ExperimentResult res = run_experiment(cfg, a.threads);
  if (!cfg.output.empty()) {
    auto out = open_output(cfg.output);
    write_metrics_csv(out, res.rows);
  }
  Json j = res.report;
  Json rows = Json::array();
  for (const auto& r : res.rows) {
    rows.push_back(Json{{"omega", r.omega}, {"M", r.M}, {"r", r.r}, {"r_hat", r.r_hat}, {"method", r.method},
                        {"rmse", r.rmse}, {"ine", r.ine}, {"error", r.error}});
  }
  j["rows"] = rows;
  if (!cfg.output.empty()) j["output"] = cfg.output;
  emit(j);
}

struct FitArgs {
  std::string input, output;
  bool normalize = false;
};

void run_fit(const FitArgs& a) {
  RMatrix snaps = load_matrix(a.input);
  Json j;
  if (a.normalize) {
    const NormalizedSnapshots n = normalize_columns(snaps);
    snaps = n.data;
    j["constant_channels"] = n.constant_channels;
  }
  const LinearFit fit = fit_linear_system(snaps);
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < fit.A.rows(); ++r) {
    std::vector<double> row(fit.A.cols());
    for (Eigen::Index c = 0; c < fit.A.cols(); ++c) row[static_cast<std::size_t>(c)] = fit.A(r, c);
    rows.push_back(row);
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(fit.A.cast<Complex>(), false);
  const CVector& ev = solver.eigenvalues();
  j["A"] = rows;
  j["residual"] = fit.residual;
  j["snapshot_rank"] = fit.snapshot_rank;
  j["degenerate"] = fit.degenerate;
  j["eigenvalues"] = spectrum_to_json(std::vector<Complex>(ev.data(), ev.data() + ev.size()));
  if (!a.output.empty()) {
    auto out = open_output(a.output);
    write_matrix_csv(out, fit.A.cast<Complex>());
    j["output"] = a.output;
  }
  emit(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue recovery from partially observed linear dynamics"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate a system and write observed samples as CSV");
  c_sim->add_option("--spec", sim.spec, "Spec JSON file");
  c_sim->add_option("--graph", sim.graph, "Graph family: ring | random | knn");
  c_sim->add_option("--d", sim.d, "Vertex count");
  c_sim->add_option("--k", sim.k, "Neighbour count (ring, knn)");
  c_sim->add_option("--edges", sim.edges, "Edge count (random)");
  c_sim->add_option("--operator", sim.op, "transition | diffusion | laplacian");
  c_sim->add_option("--seed", sim.seed, "Seed for graph and initial state");
  c_sim->add_flag("--distribution", sim.distribution, "Draw the initial state as a probability vector");
  c_sim->add_option("--steps,-M", sim.steps, "Number of samples")->required();
  c_sim->add_option("--omega", sim.omega, "Observed indices, e.g. 1,2,4,7 or 1-5");
  c_sim->add_option("--dt", sim.dt, "Continuous-time sampling step");
  c_sim->add_option("--output,-o", sim.output, "Series CSV path")->required();

  RankArgs rk;
  auto* c_rank = app.add_subcommand("rank", "Estimate the Hankel rank of a series");
  c_rank->add_option("--input,-i", rk.input, "Series CSV")->required();
  c_rank->add_option("--L", rk.L, "Window length");
  c_rank->add_option("--eps", rk.eps, "Relative singular value threshold");
  c_rank->add_option("--policy", rk.policy, "quotient | absolute | gap");
  c_rank->add_flag("--difference", rk.difference, "Difference the series first");

  EstimateArgs es;
  auto* c_est = app.add_subcommand("estimate", "Recover eigenvalues from a series");
  c_est->add_option("--input,-i", es.input, "Series CSV")->required();
  c_est->add_option("--method", es.method, "prony_ls | prony_tls | mp_ls | mp_tls | mp_svd | esprit");
  c_est->add_option("--r", es.r, "Model order or 'auto'");
  c_est->add_option("--L", es.L, "Pencil / ESPRIT window length");
  c_est->add_option("--rank-window", es.rank_window, "Window for rank estimation");
  c_est->add_option("--eps", es.eps, "Rank threshold");
  c_est->add_option("--eta", es.eta, "Relative zero-pruning threshold");
  c_est->add_option("--pinv", es.pinv, "Pseudo-inverse cutoff");
  c_est->add_option("--policy", es.policy, "Rank policy");
  c_est->add_option("--dt", es.dt, "Map estimates back through log(mu)/dt");
  c_est->add_option("--exact", es.exact, "Reference eigenvalues, comma separated");
  c_est->add_flag("--difference", es.difference, "Difference the series first");

  OracleArgs orc;
  auto* c_orc = app.add_subcommand("oracle", "Recoverability report for a spec and index set");
  c_orc->add_option("--spec", orc.spec, "Spec JSON file")->required();
  c_orc->add_option("--omega", orc.omega, "Observed indices")->required();
  c_orc->add_option("--dt", orc.dt, "Continuous-time step for the effective vector");

  ExperimentArgs ex;
  auto* c_exp = app.add_subcommand("experiment", "Run an experiment grid from a config");
  c_exp->add_option("--config,-c", ex.config, "Experiment JSON")->required();
  c_exp->add_option("--output,-o", ex.output, "Metrics CSV path");
  c_exp->add_option("--threads", ex.threads, "Maximum worker threads");

  FitArgs ft;
  auto* c_fit = app.add_subcommand("fit", "Least-squares linear model from snapshots");
  c_fit->add_option("--input,-i", ft.input, "Snapshot CSV (one state per row)")->required();
  c_fit->add_flag("--normalize", ft.normalize, "Normalize columns first");
  c_fit->add_option("--output,-o", ft.output, "Write A as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit(error_to_json(ErrorCode::invalid_argument, e.what()));
    return 2;
  }

  try {
    if (*c_sim) run_simulate(sim);
    if (*c_rank) run_rank(rk);
    if (*c_est) run_estimate(es);
    if (*c_orc) run_oracle(orc);
    if (*c_exp) run_experiment_cmd(ex);
    if (*c_fit) run_fit(ft);
  } catch (const Error& e) {
    emit(error_to_json(e.code(), e.what()));
    return 1;
  } catch (const std::exception& e) {
    emit(error_to_json(ErrorCode::numerical_failure, e.what()));
    return 1;
  }
  return 0;
}
