#ifndef SC_CLUSTER_HPP_
#define SC_CLUSTER_HPP_

#include <optional>
#include <vector>

#include <sc/associate.hpp>
#include <sc/dendrogram.hpp>
#include <sc/graph.hpp>
#include <sc/summarize.hpp>

namespace sc {

struct ClusterConfig {
    SamplingConfig sampling;
    CondenseConfig condensing;
    ComponentMode components = ComponentMode::strong;
    std::optional<CondenseConfig> precondense; // one pass on the input graph
    int threads = 1;
};

struct ClusterResult {
    Dendrogram dendrogram;
    AssociationForest forest;   // one pass per sampling iteration, creation order
    std::size_t passes = 0;
    std::size_t max_depth = 0;  // deepest recursive call reached
};

/// The main recursion: sample, then either terminate into a leaf or
/// associate / condense / partition and recurse per component. A disconnected
/// input is partitioned first without sampling. Leaves carry full membership
/// (survivors plus everything resolved to them through the forest).
/// Deterministic for a fixed config, including the seed and thread count.
ClusterResult cluster(const DirectedGraph& g, const ClusterConfig& cfg);

/// Leaf index (depth-first order) per vertex id; vector is sized to the
/// largest id in the tree, ids outside the tree get -1.
std::vector<int> flatten(const Dendrogram& d);

} // namespace sc

#endif
