#ifndef SC_METRICS_HPP_
#define SC_METRICS_HPP_

#include <vector>

#include <sc/graph.hpp>
#include <sc/summarize.hpp>

namespace sc {

/// Co-occurrence counts between two labelings plus marginals; the substrate
/// for NMI/AMI.
struct ContingencyTable {
    std::vector<std::vector<long long>> counts; // rows: labels of a, cols: labels of b
    std::vector<long long> row_sums;
    std::vector<long long> col_sums;
    long long n = 0;

    static ContingencyTable from_labels(const std::vector<int>& a, const std::vector<int>& b);
};

/// Fraction of vertices whose every out-neighbor shares their true label
/// (vertices with no out-neighbors count as positive). Labels are indexed by
/// original vertex id.
double vertex_positivity(const DirectedGraph& g, const std::vector<int>& truth);

/// Positivity flags are computed on g before removal; returns the positive
/// fraction among the vertices that survive.
double positivity_after_removal(const DirectedGraph& g, const std::vector<int>& truth,
                                const RemovalSet& removed);

/// Fraction of edges whose endpoints share the true label.
double edge_positivity(const DirectedGraph& g, const std::vector<int>& truth);

/// Mean unit-capacity max-flow over ordered vertex pairs:
/// sum_{u != v} maxflow(u->v) / (|V| * (|V|-1)). Intended for small graphs.
double graph_connectivity(const DirectedGraph& g);

enum class NmiNorm { max, sqrt };

/// Normalized mutual information with natural-log entropies; 1.0 when both
/// labelings are constant.
double nmi(const std::vector<int>& a, const std::vector<int>& b, NmiNorm norm = NmiNorm::max);

/// Adjusted mutual information, max normalizer:
/// (I - E[I]) / (max(H(a), H(b)) - E[I]) with E[I] under the permutation
/// model; 0.0 on a degenerate denominator, 1.0 for equal labelings.
double ami(const std::vector<int>& a, const std::vector<int>& b);

} // namespace sc

#endif
