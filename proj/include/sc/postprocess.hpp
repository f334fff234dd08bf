#ifndef SC_POSTPROCESS_HPP_
#define SC_POSTPROCESS_HPP_

#include <vector>

#include <sc/dendrogram.hpp>
#include <sc/graph.hpp>

namespace sc {

struct PruneConfig {
    int n = 10;         // desired cluster count
    double alpha = 0.8; // coverage fraction, hard mode only
};

enum class PruneMode { hard, soft };

/// Repeatedly merges the smallest end branch (a branch whose children are all
/// leaves) into one leaf. Stops when the n largest leaves hold at least
/// alpha*|V| objects, or when the next merge would leave fewer than n leaves.
/// Tree structure is otherwise preserved.
Dendrogram hard_prune(const Dendrogram& d, const PruneConfig& cfg);

/// Merges the smallest leaf with its smallest brother when that brother is a
/// leaf, otherwise moves it down into the brother branch; single-child
/// parents collapse. Reaches exactly n leaves when the input has >= n.
Dendrogram soft_prune(const Dendrogram& d, int n);

/// Majority-vote relabeling: each pass, every vertex synchronously takes the
/// most frequent label among its out-neighbors; ties (and empty
/// neighborhoods) keep the current label. Runs `passes` passes or stops
/// early at a fixed point. Labels are indexed by original vertex id.
/// `changes_per_pass`, when given, receives the relabel count of every pass
/// that ran.
std::vector<int> smooth(const std::vector<int>& labels, const DirectedGraph& g, int passes,
                        std::vector<int>* changes_per_pass = nullptr);

/// Re-derives leaf membership from a labeling produced by flatten()+smooth():
/// leaf i (depth-first order) keeps the vertices currently labeled i. Empty
/// leaves are deleted and single-child branches collapse.
Dendrogram rebuild_leaves(const Dendrogram& d, const std::vector<int>& labels);

/// Remaps labels onto a contiguous 0-based range (first-appearance order);
/// negative labels are preserved as-is.
std::vector<int> compact_labels(const std::vector<int>& labels);

/// The full dendrogram-to-partition chain: flatten, smooth, rebuild leaves,
/// prune, flatten, smooth again.
std::vector<int> postprocess_pipeline(const Dendrogram& d, const DirectedGraph& knn,
                                      PruneMode mode, const PruneConfig& cfg,
                                      int smooth_passes);

} // namespace sc

#endif
