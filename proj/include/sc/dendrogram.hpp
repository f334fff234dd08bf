#ifndef SC_DENDROGRAM_HPP_
#define SC_DENDROGRAM_HPP_

#include <cstddef>
#include <vector>

#include <sc/points.hpp>

namespace sc {

/// Non-binary clustering tree. A node is either a branch (children non-empty)
/// or a leaf holding a sorted set of original vertex ids. Across the whole
/// tree the leaf sets are disjoint and cover the clustered vertex set.
struct Dendrogram {
    std::vector<Dendrogram> children;
    std::vector<VertexId> items;

    bool is_leaf() const { return children.empty(); }

    std::size_t leaf_count() const {
        if (is_leaf())
            return 1;
        std::size_t n = 0;
        for (const auto& c : children)
            n += c.leaf_count();
        return n;
    }

    /// Total number of objects in all descendant leaves ("size" of the node).
    std::size_t total_items() const {
        if (is_leaf())
            return items.size();
        std::size_t n = 0;
        for (const auto& c : children)
            n += c.total_items();
        return n;
    }

    bool operator==(const Dendrogram& other) const {
        return items == other.items && children == other.children;
    }
};

/// Leaves in depth-first order.
std::vector<const Dendrogram*> collect_leaves(const Dendrogram& d);

/// Throws InvalidInput unless the leaf sets are disjoint, sorted and
/// non-overlapping across the tree and every branch has at least one child.
void validate_dendrogram(const Dendrogram& d);

} // namespace sc

#endif
