#include "spectrace/json_io.hpp"

#include <fstream>

#include "spectrace/io.hpp"

namespace spectrace {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::schema_error, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

CVector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::schema_error, std::string(what) + " must be an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  return v;
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

Json optional_number(std::optional<double> x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_object()) {
    const double re = j.contains("re") ? j.at("re").get<double>() : 0.0;
    const double im = j.contains("im") ? j.at("im").get<double>() : 0.0;
    return {re, im};
  }
  throw Error(ErrorCode::schema_error, "expected a number or {\"re\", \"im\"}");
}

Json complex_to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json spectrum_to_json(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (Complex z : values) out.push_back(complex_to_json(z));
  return out;
}

SystemFile system_from_json(const Json& j) {
  try {
    SystemFile sys;
    for (const auto& e : field(j, "eigenvalues")) sys.spec.eigenvalues.push_back(complex_from_json(e));
    for (const auto& b : field(j, "blocks")) {
      if (b.is_number_integer()) {
        sys.spec.blocks.push_back({b.get<int>()});
      } else {
        sys.spec.blocks.push_back(b.get<std::vector<int>>());
      }
    }
    const Json& u = field(j, "U");
    if (!u.is_array() || u.empty()) throw Error(ErrorCode::schema_error, "U must be a non-empty array of rows");
    sys.spec.U.resize(static_cast<Eigen::Index>(u.size()), static_cast<Eigen::Index>(u[0].size()));
    for (std::size_t r = 0; r < u.size(); ++r) {
      if (u[r].size() != u[0].size()) throw Error(ErrorCode::schema_error, "U rows differ in length");
      for (std::size_t c = 0; c < u[r].size(); ++c) {
        sys.spec.U(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(u[r][c]);
      }
    }
    sys.spec.validate();
    sys.b = vector_from_json(field(j, "b"), "b");
    sys.c = j.contains("c") ? vector_from_json(j.at("c"), "c") : CVector::Zero(sys.spec.dim());
    if (sys.b.size() != sys.spec.dim() || sys.c.size() != sys.spec.dim()) {
      throw Error(ErrorCode::dimension_mismatch, "b and c must have the spec dimension");
    }
    return sys;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::schema_error, std::string("spec JSON: ") + e.what());
  }
}

Json system_to_json(const SystemFile& sys) {
  Json u = Json::array();
  for (Eigen::Index r = 0; r < sys.spec.U.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < sys.spec.U.cols(); ++c) row.push_back(complex_to_json(sys.spec.U(r, c)));
    u.push_back(row);
  }
  return Json{{"eigenvalues", spectrum_to_json(sys.spec.eigenvalues)},
              {"blocks", sys.spec.blocks},
              {"U", u},
              {"b", vector_to_json(sys.b)},
              {"c", vector_to_json(sys.c)}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::schema_error, "'" + path + "': " + e.what());
  }
}

SystemFile load_system_file(const std::string& path) { return system_from_json(load_json_file(path)); }

Json rank_to_json(const RankEstimate& rank) {
  std::vector<double> sigma(rank.singular_values.data(),
                            rank.singular_values.data() + rank.singular_values.size());
  return Json{{"r_hat", rank.chosen},
              {"criterion", to_string(rank.chosen_by)},
              {"r_abs", rank.r_abs},
              {"r_quot", rank.r_quot},
              {"r_gap", rank.r_gap},
              {"max_quotient", std::isfinite(rank.max_quotient) ? Json(rank.max_quotient) : Json("inf")},
              {"singular_values", sigma}};
}

Json estimate_to_json(const SpectrumEstimate& est, std::optional<double> rmse, std::optional<double> ine) {
  const auto& d = est.diagnostics;
  Json diag{{"residual", d.residual},
            {"pruned", d.pruned},
            {"below_threshold", d.below_threshold},
            {"raw_eigenvalues", spectrum_to_json(d.raw_eigenvalues)},
            {"warnings", d.warnings}};
  if (!d.ambiguous.empty()) diag["ambiguous"] = d.ambiguous;
  if (d.dropped_zero > 0) diag["dropped_zero"] = d.dropped_zero;
  if (d.rank) diag["rank"] = rank_to_json(*d.rank);
  return Json{{"method", to_string(est.method)},
              {"r_hat", est.r_used},
              {"eigenvalues", spectrum_to_json(est.eigenvalues)},
              {"rmse", optional_number(rmse)},
              {"ine", optional_number(ine)},
              {"diagnostics", diag}};
}

Json report_to_json(const RecoverabilityReport& rep) {
  Json eig = Json::array();
  for (const auto& rec : rep.eigenvalues) {
    eig.push_back(Json{{"value", complex_to_json(rec.value)},
                       {"multiplicity", rec.multiplicity},
                       {"recoverable", rec.recoverable},
                       {"local_degree", rec.local_degree}});
  }
  return Json{{"omega", rep.omega},
              {"path", to_string(rep.path)},
              {"total_degree", rep.total_degree},
              {"eigenvalues", eig},
              {"effective_vector", vector_to_json(rep.effective_vector)},
              {"warnings", rep.warnings}};
}

Json certificate_to_json(const UniversalityCertificate& cert) {
  return Json{{"universal", cert.universal},
              {"krylov_criterion", cert.krylov_criterion},
              {"penthouse_criterion", cert.penthouse_criterion},
              {"krylov_rank", cert.krylov_rank},
              {"penthouse_ranks", cert.penthouse_ranks},
              {"block_counts", cert.block_counts},
              {"warnings", cert.warnings}};
}

Json error_to_json(ErrorCode code, const std::string& message) {
  return Json{{"error", Json{{"code", to_string(code)}, {"message", message}}}};
}

}  // namespace spectrace
