#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "spectrace/rng.hpp"
#include "spectrace/systems.hpp"
#include "spectrace/types.hpp"

namespace spectrace {

/// Dense weighted adjacency: W(i, j) > 0 iff the directed edge (v_i, v_j)
/// exists.
struct WeightedDigraph {
  RMatrix W;

  int size() const { return static_cast<int>(W.rows()); }
  int edge_count() const;
  bool is_symmetric() const { return W == W.transpose(); }
  /// Weak connectivity (edge direction ignored).
  bool is_connected() const;
};

enum class OperatorKind { diffusion, laplacian, transition };

struct GraphOperator {
  OperatorKind kind;
  RMatrix matrix;
};

/// `m_edges` distinct off-diagonal directed edges drawn uniformly without
/// replacement, unit weights.
WeightedDigraph random_digraph(int d, int m_edges, std::uint64_t seed);

/// Circulant ring: vertex i linked to the k/2 nearest vertices on each side.
WeightedDigraph ring_graph(int d, int k_neighbors);

/// d uniform points on the unit 2-sphere, symmetrized k-nearest-neighbour
/// graph with unit weights.
WeightedDigraph knn_sphere_graph(int d, int k, std::uint64_t seed);

/// P = D^+ W, with rows of zero-degree vertices replaced by e_i.
GraphOperator transition_matrix(const WeightedDigraph& g);

/// D^{+1/2} W D^{+1/2} (zero degrees map to zero).
GraphOperator diffusion_operator(const WeightedDigraph& g);

/// I - diffusion_operator(g).
GraphOperator laplacian(const WeightedDigraph& g);

/// A = P^T, b = x0, c = 0. x0 must be a probability vector.
AffineSystem random_walk_system(const WeightedDigraph& g, const RVector& x0);

/// Homogeneous system x_{t+1} = A x_t with A = P^T for the transition
/// operator and A = the (symmetric) operator matrix otherwise.
AffineSystem graph_system(const WeightedDigraph& g, OperatorKind kind, const RVector& x0);

/// Seeded initial state: standard normal entries, or uniform entries
/// normalized to a probability vector.
RVector draw_initial_state(int d, bool distribution, SplitMix64& rng);

/// Edge list CSV with header "src,dst,weight" and 1-based vertex indices.
void write_edge_list(std::ostream& out, const WeightedDigraph& g);
/// `d` fixes the vertex count; when 0 it is inferred from the largest index.
WeightedDigraph read_edge_list(std::istream& in, int d = 0);

}  // namespace spectrace
