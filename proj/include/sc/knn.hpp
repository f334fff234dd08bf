#ifndef SC_KNN_HPP_
#define SC_KNN_HPP_

#include <sc/graph.hpp>
#include <sc/points.hpp>

namespace sc {

enum class KnnMethod { brute, tree };

/// Directed k-nearest-neighbor graph under Euclidean distance: every vertex
/// gets exactly k out-edges to its k nearest other points, nearest first.
/// Ties are broken by smaller VertexId, so `brute` and `tree` produce
/// identical graphs. The query point itself is excluded (duplicates allowed).
DirectedGraph build_knn_graph(const PointSet& points, int k, KnnMethod method, int threads = 1);

} // namespace sc

#endif
