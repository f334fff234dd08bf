#ifndef SC_SUMMARIZE_HPP_
#define SC_SUMMARIZE_HPP_

#include <cstdint>
#include <vector>

#include <sc/graph.hpp>
#include <sc/points.hpp>

namespace sc {

enum class SamplingMeasure { random, indegree, mutual };

struct SamplingConfig {
    double rate = 0.2;
    SamplingMeasure measure = SamplingMeasure::indegree;
    std::uint64_t seed = 0; // used by the random measure only
};

/// Set R of vertices selected for removal by one sampling pass, as sorted
/// original ids of the graph it was computed from.
struct RemovalSet {
    std::vector<VertexId> ids;

    bool empty() const { return ids.empty(); }
    std::size_t size() const { return ids.size(); }

    /// Per-local-vertex flag vector for g; throws if R is not a subset of g.
    std::vector<char> local_mask(const DirectedGraph& g) const;
};

/// Per-vertex scores, indexed by local vertex:
///   random   - reproducible seeded draws in [0,1)
///   indegree - s_i(v) = |{u : v in N_u}|
///   mutual   - s_m(v) = |{u : v in N_u and u in N_v}|
std::vector<double> score_vertices(const DirectedGraph& g, SamplingMeasure measure,
                                   std::uint64_t seed = 0);

/// Threshold sampling: with n = floor(rate*|V|), R is empty when n = 0,
/// otherwise R = {v : score(v) <= n-th smallest score}. R can exceed n when
/// scores tie at the threshold; R = V when all scores tie.
RemovalSet sample(const DirectedGraph& g, const std::vector<double>& scores, double rate);

enum class CondenseMeasure { visit_order, jaccard, euclidean };

struct CondenseConfig {
    int t = 16;                                            // target out-degree
    int depth = 2;                                         // BFS depth guard d
    CondenseMeasure measure = CondenseMeasure::visit_order;
    const PointSet* points = nullptr;                      // required by euclidean
};

/// Rewires the surviving vertices of g after removing R: per vertex, a BFS
/// over the surviving subgraph collects candidates until at least t are found
/// and the search depth exceeds cfg.depth, then the min(|C|, t) lowest-scored
/// candidates become the new out-neighbors, in selection order.
///
/// Scores: visit_order = BFS visit index; jaccard = 1 - |N_a+ ∩ N_b+| /
/// |N_a+ ∪ N_b+| over pre-condense neighborhoods restricted to survivors;
/// euclidean = squared point distance. Ties break toward earlier visits.
DirectedGraph condense(const DirectedGraph& g, const RemovalSet& removed,
                       const CondenseConfig& cfg, int threads = 1);

} // namespace sc

#endif
