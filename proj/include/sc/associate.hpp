#ifndef SC_ASSOCIATE_HPP_
#define SC_ASSOCIATE_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include <sc/graph.hpp>
#include <sc/summarize.hpp>

namespace sc {

/// One sampling pass worth of bindings: removed vertex -> surviving
/// representative (original ids, sorted by removed vertex).
struct AssociationMap {
    std::vector<std::pair<VertexId, VertexId>> pairs;

    std::size_t size() const { return pairs.size(); }
    VertexId rep_of(VertexId v) const;

    bool operator==(const AssociationMap& other) const { return pairs == other.pairs; }
};

/// Append-only record of every sampling pass, in creation order. A vertex
/// that survives pass i only ever appears as a key in a later pass, so
/// following links always terminates at a never-removed vertex.
struct AssociationForest {
    std::vector<AssociationMap> passes;
};

// Both association routines traverse edges as undirected (out plus in
// neighbors) and bind every removed vertex to the surviving vertex at
// minimal hop distance, smallest id among equidistant ones. They return
// identical maps; the multi-source form visits each edge at most once.
// `edge_visits`, when given, receives the number of distinct edges touched.

AssociationMap associate_simple(const DirectedGraph& g, const RemovalSet& removed,
                                std::size_t* edge_visits = nullptr);

AssociationMap associate_multisource(const DirectedGraph& g, const RemovalSet& removed,
                                     std::size_t* edge_visits = nullptr);

/// Follows rep-links through the passes: every vertex that appears anywhere
/// (removed at some pass, or listed in `survivors`) maps to its terminal
/// surviving representative; survivors map to themselves. Result sorted by
/// vertex id.
std::vector<std::pair<VertexId, VertexId>> resolve(const AssociationForest& forest,
                                                   const std::vector<VertexId>& survivors);

} // namespace sc

#endif
