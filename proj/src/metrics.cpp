#include "spectrace/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "spectrace/io.hpp"

namespace spectrace {

namespace {

// Minimum-cost assignment of every row to a distinct column (rows <= cols),
// Hungarian method with potentials.
std::vector<int> assign_rows(const RMatrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

}  // namespace

MatchResult match_spectra(std::span<const Complex> exact, std::span<const Complex> est,
                          bool injective) {
  if (exact.empty() || est.empty()) {
    throw Error(ErrorCode::invalid_argument, "matching needs non-empty spectra");
  }
  MatchResult res;
  if (!injective) {
    std::vector<char> hit(exact.size(), 0);
    for (Complex e : est) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < exact.size(); ++k) {
        if (std::abs(exact[k] - e) < std::abs(exact[best] - e)) best = k;
      }
      hit[best] = 1;
      res.pairs.emplace_back(exact[best], e);
      res.exact_index.push_back(static_cast<int>(best));
    }
    for (std::size_t k = 0; k < exact.size(); ++k) {
      if (!hit[k]) res.unmatched_exact.push_back(exact[k]);
    }
    return res;
  }

  const bool est_rows = est.size() <= exact.size();
  const auto rows = est_rows ? est : exact;
  const auto cols = est_rows ? exact : est;
  RMatrix cost(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) cost(i, j) = std::norm(rows[i] - cols[j]);
  }
  const std::vector<int> assign = assign_rows(cost);
  std::vector<int> exact_of_est(est.size(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (est_rows) {
      exact_of_est[i] = assign[i];
    } else {
      exact_of_est[static_cast<std::size_t>(assign[i])] = static_cast<int>(i);
    }
  }
  std::vector<char> hit(exact.size(), 0);
  for (std::size_t k = 0; k < est.size(); ++k) {
    const int j = exact_of_est[k];
    if (j < 0) {
      res.unmatched_est.push_back(est[k]);
      continue;
    }
    hit[static_cast<std::size_t>(j)] = 1;
    res.pairs.emplace_back(exact[static_cast<std::size_t>(j)], est[k]);
    res.exact_index.push_back(j);
  }
  for (std::size_t k = 0; k < exact.size(); ++k) {
    if (!hit[k]) res.unmatched_exact.push_back(exact[k]);
  }
  return res;
}

double rmse(const MatchResult& m) {
  if (m.pairs.empty()) throw Error(ErrorCode::invalid_argument, "RMSE of an empty matching");
  double sum = 0.0;
  for (const auto& [a, b] : m.pairs) sum += std::norm(a - b);
  return std::sqrt(sum / static_cast<double>(m.pairs.size()));
}

double ine(const MatchResult& m) {
  if (m.pairs.empty()) throw Error(ErrorCode::invalid_argument, "INE of an empty matching");
  double worst = 0.0;
  for (const auto& [a, b] : m.pairs) worst = std::max(worst, std::abs(a - b));
  return worst;
}

double hausdorff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](std::span<const Complex> x, std::span<const Complex> y) {
    double worst = 0.0;
    for (Complex p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (Complex q : y) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "index,omega,M,r,r_hat,method,rmse,ine,error\n";
  for (const auto& row : rows) {
    std::string omega;
    for (std::size_t k = 0; k < row.omega.size(); ++k) {
      if (k) omega += ' ';
      omega += std::to_string(row.omega[k]);
    }
    out << row.config_index << ',' << omega << ',' << row.M << ',' << row.r << ',' << row.r_hat
        << ',' << row.method << ',' << format_real(row.rmse) << ',' << format_real(row.ine) << ','
        << sanitize(row.error) << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).front() != "index") {
    throw Error(ErrorCode::schema_error, "metrics CSV: missing header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9) throw Error(ErrorCode::schema_error, "metrics CSV: expected 9 fields");
    MetricsRow row;
    row.config_index = static_cast<int>(parse_real(f[0]));
    std::istringstream omega(f[1]);
    for (int k; omega >> k;) row.omega.push_back(k);
    row.M = static_cast<int>(parse_real(f[2]));
    row.r = static_cast<int>(parse_real(f[3]));
    row.r_hat = static_cast<int>(parse_real(f[4]));
    row.method = f[5];
    row.rmse = parse_real(f[6]);
    row.ine = parse_real(f[7]);
    row.error = f[8];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace spectrace
