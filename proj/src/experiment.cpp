#include "spectrace/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include <Eigen/Eigenvalues>

#include "spectrace/fit.hpp"
#include "spectrace/hankel.hpp"
#include "spectrace/io.hpp"
#include "spectrace/recoverability.hpp"
#include "spectrace/rng.hpp"

namespace spectrace {

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).string();
}

IndexSet omega_from_json(const Json& j) {
  if (j.is_string()) return parse_omega(j.get<std::string>());
  if (j.is_number_integer()) return {j.get<int>()};
  return j.get<IndexSet>();
}

OperatorKind operator_from_string(const std::string& s) {
  if (s == "transition") return OperatorKind::transition;
  if (s == "diffusion") return OperatorKind::diffusion;
  if (s == "laplacian") return OperatorKind::laplacian;
  throw Error(ErrorCode::schema_error, "unknown graph operator '" + s + "'");
}

RankCriterion policy_from_string(const std::string& s) {
  if (s == "quotient") return RankCriterion::quotient;
  if (s == "absolute") return RankCriterion::absolute;
  if (s == "gap") return RankCriterion::gap;
  throw Error(ErrorCode::schema_error, "unknown rank policy '" + s + "'");
}

Source source_from_json(const Json& j, const std::string& base_dir) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "jordan") {
    if (j.contains("spec")) return JordanSource{load_system_file(resolve(j.at("spec").get<std::string>(), base_dir))};
    return JordanSource{system_from_json(j.at("system"))};
  }
  if (type == "graph") {
    GraphSource g;
    g.family = j.value("family", std::string("ring"));
    g.d = j.at("d").get<int>();
    g.k = j.value("k", 0);
    g.edges = j.value("edges", 0);
    g.op = operator_from_string(j.value("operator", std::string("transition")));
    const std::string initial = j.value("initial", std::string("normal"));
    if (initial != "normal" && initial != "distribution") {
      throw Error(ErrorCode::schema_error, "initial must be \"normal\" or \"distribution\"");
    }
    g.distribution = initial == "distribution";
    if (j.contains("x0")) {
      const auto x = j.at("x0").get<std::vector<double>>();
      g.x0 = Eigen::Map<const RVector>(x.data(), static_cast<Eigen::Index>(x.size()));
    }
    return g;
  }
  if (type == "csv") {
    return CsvSource{resolve(j.at("path").get<std::string>(), base_dir), j.value("normalize", false)};
  }
  throw Error(ErrorCode::schema_error, "unknown source type '" + type + "'");
}

struct Prepared {
  int d = 0;
  AffineSystem sys;
  const JordanSpec* spec = nullptr;
  bool from_csv = false;
  RMatrix snapshots;
  RMatrix fitted;
  std::vector<Complex> fitted_eigenvalues;
};

Prepared prepare(const ExperimentConfig& cfg, std::uint64_t seed) {
  Prepared p;
  if (const auto* js = std::get_if<JordanSource>(&cfg.source)) {
    p.sys = build_from_jordan(js->system.spec, js->system.b, js->system.c);
    p.spec = &js->system.spec;
    p.d = p.sys.dim();
  } else if (const auto* gs = std::get_if<GraphSource>(&cfg.source)) {
    SplitMix64 rng(seed);
    WeightedDigraph g;
    if (gs->family == "ring") {
      g = ring_graph(gs->d, gs->k);
    } else if (gs->family == "random") {
      g = random_digraph(gs->d, gs->edges, rng());
    } else if (gs->family == "knn") {
      g = knn_sphere_graph(gs->d, gs->k, rng());
    } else {
      throw Error(ErrorCode::schema_error, "unknown graph family '" + gs->family + "'");
    }
    p.sys = graph_system(g, gs->op, gs->x0.size() ? gs->x0 : draw_initial_state(gs->d, gs->distribution, rng));
    p.d = p.sys.dim();
  } else {
    const auto& cs = std::get<CsvSource>(cfg.source);
    p.from_csv = true;
    p.snapshots = load_matrix(cs.path);
    if (cs.normalize) p.snapshots = normalize_columns(p.snapshots).data;
    p.d = static_cast<int>(p.snapshots.cols());
    p.fitted = fit_linear_system(p.snapshots, cfg.thresholds.pinv_rel).A;
    Eigen::ComplexEigenSolver<CMatrix> solver(p.fitted.cast<Complex>(), false);
    const CVector& ev = solver.eigenvalues();
    p.fitted_eigenvalues.assign(ev.data(), ev.data() + ev.size());
  }
  return p;
}

struct CellOutput {
  std::vector<MetricsRow> rows;
  Json json;
};

CellOutput run_cell(const ExperimentConfig& cfg, const Prepared& p, int index, const IndexSet& omega_in,
                    int M) {
  CellOutput out;
  out.json = Json{{"omega", omega_in}, {"M", M}};
  auto fail_all = [&](const std::string& msg) {
    for (Method m : cfg.methods) {
      MetricsRow row;
      row.config_index = index;
      row.omega = omega_in;
      row.M = M;
      row.method = to_string(m);
      row.error = msg;
      out.rows.push_back(row);
    }
    out.json["error"] = msg;
  };

  ObservedSeries series;
  std::vector<Complex> reference;
  int r_oracle = -1;
  try {
    const IndexSet omega = normalize_omega(omega_in, p.d);
    if (p.from_csv) {
      if (M > p.snapshots.rows()) {
        throw Error(ErrorCode::insufficient_samples, "CSV source has fewer than M rows");
      }
      series.omega = omega;
      series.samples.resize(M, static_cast<Eigen::Index>(omega.size()));
      for (std::size_t k = 0; k < omega.size(); ++k) {
        series.samples.col(static_cast<Eigen::Index>(k)) =
            p.snapshots.col(omega[k] - 1).head(M).cast<Complex>();
      }
      reference = p.fitted_eigenvalues;
      r_oracle = annihilator_degree(p.fitted.cast<Complex>(), p.snapshots.row(0).transpose().cast<Complex>(),
                                    omega, 1e-10);
    } else {
      const bool affine = p.sys.c.norm() > 0.0;
      const bool diff = cfg.difference == DifferenceMode::always ||
                        (cfg.difference == DifferenceMode::automatic && affine);
      const Trajectory traj = cfg.sampling.kind == StepKind::discrete
                                  ? simulate_discrete(p.sys, M)
                                  : simulate_continuous(p.sys, cfg.sampling.dt, M);
      series = observe(traj, omega);
      if (diff) series = difference_transform(series);
      const CVector v = diff ? effective_vector(p.sys, cfg.sampling) : p.sys.b;
      const RecoverabilityReport rep = p.spec ? recoverable_set_jordan(*p.spec, v, omega)
                                              : recoverable_set_numeric(p.sys.A, v, omega);
      r_oracle = rep.total_degree;
      if (rep.path == OraclePath::data_fallback) {
        Eigen::ComplexEigenSolver<CMatrix> solver(p.sys.A, false);
        const CVector& ev = solver.eigenvalues();
        reference.assign(ev.data(), ev.data() + ev.size());
      } else {
        reference = rep.recoverable_roots();
      }
      if (cfg.sampling.kind == StepKind::continuous) {
        for (Complex& z : reference) z = std::exp(cfg.sampling.dt * z);
      }
      out.json["oracle"] = report_to_json(rep);
    }
  } catch (const std::exception& e) {
    fail_all(e.what());
    return out;
  }

  const int Mp = series.length();
  int window = Mp / 2;
  if (cfg.rank_window) {
    window = *cfg.rank_window;
  } else if (!cfg.rank_window_half && p.d > 0 && p.d <= Mp - 1) {
    window = p.d;
  }
  RankEstimate rank;
  try {
    rank = estimate_rank(build_hankel(series, std::clamp(window, 1, std::max(1, Mp - 1))),
                         RankOptions{cfg.thresholds.eps_rel, cfg.thresholds.rank_policy, 10.0});
  } catch (const std::exception& e) {
    fail_all(e.what());
    return out;
  }
  out.json["rank"] = rank_to_json(rank);

  Json results = Json::array();
  for (Method m : cfg.methods) {
    MetricsRow row;
    row.config_index = index;
    row.omega = omega_in;
    row.M = M;
    row.r = r_oracle;
    row.r_hat = rank.chosen;
    row.method = to_string(m);
    try {
      if (rank.chosen < 1) throw Error(ErrorCode::numerical_failure, "estimated rank is zero");
      EstimatorConfig ec = cfg.thresholds;
      ec.r = rank.chosen;
      ec.L = cfg.L;
      const SpectrumEstimate est = estimate(series, m, ec);
      if (est.eigenvalues.empty()) throw Error(ErrorCode::numerical_failure, "estimator returned no eigenvalues");
      std::optional<double> e_rmse, e_ine;
      if (!reference.empty()) {
        const MatchResult match = match_spectra(reference, est.eigenvalues, cfg.injective);
        row.rmse = rmse(match);
        row.ine = ine(match);
        e_rmse = row.rmse;
        e_ine = row.ine;
      }
      results.push_back(estimate_to_json(est, e_rmse, e_ine));
    } catch (const std::exception& e) {
      row.error = e.what();
      results.push_back(Json{{"method", row.method}, {"error", row.error}});
    }
    out.rows.push_back(row);
  }
  out.json["reference"] = spectrum_to_json(reference);
  out.json["r"] = r_oracle;
  out.json["results"] = results;
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& j, const std::string& base_dir) {
  try {
    ExperimentConfig cfg;
    cfg.name = j.value("name", std::string("experiment"));
    cfg.source = source_from_json(j.at("source"), base_dir);
    if (j.contains("sampling")) {
      const Json& s = j.at("sampling");
      const std::string kind = s.value("kind", std::string("discrete"));
      if (kind == "continuous") {
        cfg.sampling = Sampling::continuous(s.value("dt", 1.0));
        if (!(cfg.sampling.dt > 0.0)) throw Error(ErrorCode::schema_error, "dt must be positive");
      } else if (kind != "discrete") {
        throw Error(ErrorCode::schema_error, "unknown sampling kind '" + kind + "'");
      }
    }
    for (const auto& o : j.at("omegas")) cfg.omegas.push_back(omega_from_json(o));
    const Json& ms = j.at("M");
    cfg.Ms = ms.is_array() ? ms.get<std::vector<int>>() : std::vector<int>{ms.get<int>()};
    if (j.contains("methods")) {
      for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    } else {
      cfg.methods = all_methods();
    }
    if (j.contains("L") && j.at("L").is_number_integer()) cfg.L = j.at("L").get<int>();
    if (j.contains("rank_window")) {
      const Json& w = j.at("rank_window");
      if (w.is_number_integer()) {
        cfg.rank_window = w.get<int>();
      } else if (w.get<std::string>() == "half") {
        cfg.rank_window_half = true;
      } else if (w.get<std::string>() != "dimension") {
        throw Error(ErrorCode::schema_error, "rank_window must be an integer, \"dimension\" or \"half\"");
      }
    }
    if (j.contains("thresholds")) {
      const Json& t = j.at("thresholds");
      cfg.thresholds.eps_rel = t.value("eps_rel", cfg.thresholds.eps_rel);
      cfg.thresholds.eta_rel = t.value("eta_rel", cfg.thresholds.eta_rel);
      cfg.thresholds.pinv_rel = t.value("pinv_rel", cfg.thresholds.pinv_rel);
    }
    if (j.contains("rank_policy")) cfg.thresholds.rank_policy = policy_from_string(j.at("rank_policy").get<std::string>());
    cfg.thresholds.validate();
    if (j.contains("difference")) {
      const Json& d = j.at("difference");
      if (d.is_boolean()) {
        cfg.difference = d.get<bool>() ? DifferenceMode::always : DifferenceMode::never;
      } else if (d.get<std::string>() != "auto") {
        throw Error(ErrorCode::schema_error, "difference must be true, false or \"auto\"");
      }
    }
    cfg.injective = j.value("injective", false);
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("output")) cfg.output = resolve(j.at("output").get<std::string>(), base_dir);
    cfg.threads = j.value("threads", 0);
    if (cfg.omegas.empty() || cfg.Ms.empty() || cfg.methods.empty()) {
      throw Error(ErrorCode::schema_error, "omegas, M and methods must be non-empty");
    }
    for (int m : cfg.Ms) {
      if (m < 2) throw Error(ErrorCode::schema_error, "every M must be >= 2");
    }
    return cfg;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::schema_error, std::string("experiment config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  const std::string base = std::filesystem::path(path).parent_path().string();
  return from_json(load_json_file(path), base.empty() ? "." : base);
}

std::uint64_t effective_seed(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("SPECTRACE_SEED")) {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec == std::errc{} && ptr == end && ptr != env) return v;
  }
  return cfg.seed;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int max_threads) {
  const std::uint64_t seed = effective_seed(cfg);
  const Prepared prepared = prepare(cfg, seed);

  struct Cell {
    IndexSet omega;
    int M;
  };
  std::vector<Cell> cells;
  for (const auto& omega : cfg.omegas) {
    for (int M : cfg.Ms) cells.push_back({omega, M});
  }
  std::vector<CellOutput> outputs(cells.size());

  int workers = max_threads > 0 ? max_threads : cfg.threads;
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(cells.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < cells.size();) {
      outputs[k] = run_cell(cfg, prepared, static_cast<int>(k), cells[k].omega, cells[k].M);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  ExperimentResult res;
  Json cell_json = Json::array();
  for (auto& out : outputs) {
    res.rows.insert(res.rows.end(), out.rows.begin(), out.rows.end());
    cell_json.push_back(std::move(out.json));
  }
  res.report = Json{{"name", cfg.name}, {"seed", seed}, {"cells", std::move(cell_json)}};
  return res;
}

}  // namespace spectrace
