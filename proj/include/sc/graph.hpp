#ifndef SC_GRAPH_HPP_
#define SC_GRAPH_HPP_

#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include <sc/points.hpp>

namespace sc {

/// Unweighted directed graph over a subset of the original vertex ids.
///
/// Adjacency is stored in *local* index space (0..size()-1); ids() maps a
/// local index back to the original VertexId. ids() is always sorted
/// ascending, so ascending local order is ascending id order. Out-neighbor
/// lists keep their construction order — for k-NN graphs that is
/// nearest-first, for condensed graphs the selection order — and every
/// traversal in the library expands neighbors in that order. No self-loops,
/// no duplicate out-edges.
class DirectedGraph {
public:
    DirectedGraph() = default;

    /// Graph on n vertices with ids 0..n-1 and no edges.
    explicit DirectedGraph(std::size_t n);

    /// Graph over the given (sorted, unique) original ids with out-lists in
    /// local index space.
    DirectedGraph(std::vector<VertexId> ids, std::vector<std::vector<int>> out);

    DirectedGraph(const DirectedGraph& other);
    DirectedGraph& operator=(const DirectedGraph& other);
    DirectedGraph(DirectedGraph&&) noexcept = default;
    DirectedGraph& operator=(DirectedGraph&&) noexcept = default;

    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    std::size_t edge_count() const;

    VertexId id(int v) const { return ids_[static_cast<std::size_t>(v)]; }
    const std::vector<VertexId>& ids() const { return ids_; }

    /// Local index of an original id, or -1 if the vertex is not present.
    int local(VertexId id) const;

    const std::vector<int>& out(int v) const { return out_[static_cast<std::size_t>(v)]; }
    const std::vector<std::vector<int>>& out_lists() const { return out_; }

    /// In-neighbor index: exact transpose of the out-lists, built on first
    /// use and cached (out-lists are the source of truth).
    const std::vector<std::vector<int>>& in_lists() const;
    const std::vector<int>& in(int v) const { return in_lists()[static_cast<std::size_t>(v)]; }

    bool operator==(const DirectedGraph& other) const {
        return ids_ == other.ids_ && out_ == other.out_;
    }

private:
    void validate() const;

    std::vector<VertexId> ids_;             // local -> original, sorted
    std::vector<std::vector<int>> out_;     // local indices, construction order

    mutable std::vector<std::vector<int>> in_;
    mutable bool in_built_ = false;
    mutable std::unique_ptr<std::mutex> in_mutex_ = std::make_unique<std::mutex>();
};

enum class ComponentMode { strong, weak };

/// Connected components of g, each a sorted list of original ids, ordered by
/// smallest contained id. Covers every vertex of g.
std::vector<std::vector<VertexId>> connected_components(const DirectedGraph& g, ComponentMode mode);

/// Subgraph induced by `keep` (original ids): exactly those vertices and the
/// edges of g between them, original ids preserved, neighbor order preserved.
DirectedGraph induced_subgraph(const DirectedGraph& g, const std::vector<VertexId>& keep);

} // namespace sc

#endif
