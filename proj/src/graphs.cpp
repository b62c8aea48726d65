#include "spectrace/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "spectrace/io.hpp"
#include "spectrace/rng.hpp"

namespace spectrace {

double SplitMix64::normal() {
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

int WeightedDigraph::edge_count() const {
  return static_cast<int>((W.array() != 0.0).count());
}

bool WeightedDigraph::is_connected() const {
  const int d = size();
  if (d == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(d), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < d; ++u) {
      if (!seen[u] && (W(v, u) != 0.0 || W(u, v) != 0.0)) {
        seen[u] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == d;
}

WeightedDigraph random_digraph(int d, int m_edges, std::uint64_t seed) {
  if (d < 1 || m_edges < 0) {
    throw Error(ErrorCode::invalid_argument, "random_digraph: bad size");
  }
  const long slots = static_cast<long>(d) * (d - 1);
  if (m_edges > slots) {
    throw Error(ErrorCode::invalid_argument,
                "random_digraph: more edges than off-diagonal slots");
  }
  // Partial Fisher-Yates over the off-diagonal slots.
  std::vector<long> pool(static_cast<std::size_t>(slots));
  std::iota(pool.begin(), pool.end(), 0L);
  SplitMix64 rng(seed);
  WeightedDigraph g{RMatrix::Zero(d, d)};
  for (long k = 0; k < m_edges; ++k) {
    const long remaining = slots - k;
    const long pick = k + static_cast<long>(rng.uniform() * static_cast<double>(remaining));
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
    const long slot = pool[static_cast<std::size_t>(k)];
    const long row = slot / (d - 1);
    long col = slot % (d - 1);
    if (col >= row) ++col;
    g.W(row, col) = 1.0;
  }
  return g;
}

WeightedDigraph ring_graph(int d, int k_neighbors) {
  if (k_neighbors < 2 || k_neighbors % 2 != 0) {
    throw Error(ErrorCode::invalid_argument,
                "ring_graph: neighbour count must be even and positive");
  }
  if (k_neighbors >= d) {
    throw Error(ErrorCode::invalid_argument,
                "ring_graph: neighbour count must be below vertex count");
  }
  WeightedDigraph g{RMatrix::Zero(d, d)};
  for (int i = 0; i < d; ++i) {
    for (int j = 1; j <= k_neighbors / 2; ++j) {
      g.W(i, (i + j) % d) = 1.0;
      g.W(i, (i - j + d) % d) = 1.0;
    }
  }
  return g;
}

WeightedDigraph knn_sphere_graph(int d, int k, std::uint64_t seed) {
  if (k < 1 || k >= d) {
    throw Error(ErrorCode::invalid_argument, "knn_sphere_graph: need 1 <= k < d");
  }
  SplitMix64 rng(seed);
  RMatrix pts(d, 3);
  for (int i = 0; i < d; ++i) {
    Eigen::Vector3d p;
    do {
      p = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
    } while (p.norm() < 1e-12);
    pts.row(i) = p.normalized().transpose();
  }
  WeightedDigraph g{RMatrix::Zero(d, d)};
  std::vector<int> order(static_cast<std::size_t>(d));
  std::vector<double> dist(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) dist[j] = (pts.row(i) - pts.row(j)).squaredNorm();
    dist[i] = -1.0;  // self sorts first and is skipped
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dist[a] < dist[b]; });
    for (int n = 1; n <= k; ++n) {
      const int j = order[n];
      g.W(i, j) = 1.0;
      g.W(j, i) = 1.0;
    }
  }
  return g;
}

GraphOperator transition_matrix(const WeightedDigraph& g) {
  const int d = g.size();
  RMatrix p = RMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double deg = g.W.row(i).sum();
    if (deg > 0.0) {
      p.row(i) = g.W.row(i) / deg;
    } else {
      p(i, i) = 1.0;
    }
  }
  return {OperatorKind::transition, std::move(p)};
}

GraphOperator diffusion_operator(const WeightedDigraph& g) {
  const int d = g.size();
  RVector scale(d);
  for (int i = 0; i < d; ++i) {
    const double deg = g.W.row(i).sum();
    scale(i) = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
  }
  RMatrix a = scale.asDiagonal() * g.W * scale.asDiagonal();
  return {OperatorKind::diffusion, std::move(a)};
}

GraphOperator laplacian(const WeightedDigraph& g) {
  GraphOperator a = diffusion_operator(g);
  const int d = g.size();
  return {OperatorKind::laplacian, RMatrix::Identity(d, d) - a.matrix};
}

AffineSystem random_walk_system(const WeightedDigraph& g, const RVector& x0) {
  if (x0.size() != g.size()) {
    throw Error(ErrorCode::dimension_mismatch,
                "initial distribution length differs from vertex count");
  }
  if ((x0.array() < 0.0).any() || std::abs(x0.sum() - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_argument,
                "initial distribution must be nonnegative and sum to 1");
  }
  const RMatrix p = transition_matrix(g).matrix;
  return AffineSystem::homogeneous(p.transpose().cast<Complex>(),
                                   x0.cast<Complex>());
}

AffineSystem graph_system(const WeightedDigraph& g, OperatorKind kind, const RVector& x0) {
  if (x0.size() != g.size()) {
    throw Error(ErrorCode::dimension_mismatch, "initial state length differs from vertex count");
  }
  RMatrix a;
  switch (kind) {
    case OperatorKind::transition: a = transition_matrix(g).matrix.transpose(); break;
    case OperatorKind::diffusion: a = diffusion_operator(g).matrix; break;
    case OperatorKind::laplacian: a = laplacian(g).matrix; break;
  }
  return AffineSystem::homogeneous(a.cast<Complex>(), x0.cast<Complex>());
}

RVector draw_initial_state(int d, bool distribution, SplitMix64& rng) {
  if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
  RVector x(d);
  for (Eigen::Index i = 0; i < d; ++i) x(i) = distribution ? rng.uniform() : rng.normal();
  if (distribution) x /= x.sum();
  return x;
}

void write_edge_list(std::ostream& out, const WeightedDigraph& g) {
  out << "src,dst,weight\n";
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      if (g.W(i, j) != 0.0) {
        out << (i + 1) << ',' << (j + 1) << ',' << format_real(g.W(i, j)) << '\n';
      }
    }
  }
}

WeightedDigraph read_edge_list(std::istream& in, int d) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::io_error, "edge list: missing header");
  }
  auto header = split_csv_line(line);
  if (header.size() != 3 || header[0] != "src" || header[1] != "dst" ||
      header[2] != "weight") {
    throw Error(ErrorCode::schema_error,
                "edge list: header must be src,dst,weight");
  }
  struct Edge { int src, dst; double w; };
  std::vector<Edge> edges;
  int max_index = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      throw Error(ErrorCode::schema_error,
                  "edge list line " + std::to_string(line_no) + ": need 3 fields");
    }
    Edge e{static_cast<int>(parse_real(fields[0])),
           static_cast<int>(parse_real(fields[1])), parse_real(fields[2])};
    if (e.src < 1 || e.dst < 1 || e.w < 0.0) {
      throw Error(ErrorCode::schema_error,
                  "edge list line " + std::to_string(line_no) + ": bad entry");
    }
    max_index = std::max({max_index, e.src, e.dst});
    edges.push_back(e);
  }
  if (d == 0) d = max_index;
  if (max_index > d) {
    throw Error(ErrorCode::out_of_range, "edge list: vertex index exceeds size");
  }
  WeightedDigraph g{RMatrix::Zero(d, d)};
  for (const auto& e : edges) g.W(e.src - 1, e.dst - 1) = e.w;
  return g;
}

}  // namespace spectrace
