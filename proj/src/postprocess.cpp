#include <sc/postprocess.hpp>

#include <algorithm>
#include <unordered_map>

#include <sc/cluster.hpp>
#include <sc/error.hpp>

namespace sc {

namespace {

// Smallest end branch in depth-first order (ties keep the first one found).
Dendrogram* find_smallest_end_branch(Dendrogram& node, Dendrogram* best, std::size_t& best_size) {
    if (node.is_leaf())
        return best;
    bool all_leaves = true;
    for (auto& c : node.children) {
        if (!c.is_leaf()) {
            all_leaves = false;
            best = find_smallest_end_branch(c, best, best_size);
        }
    }
    if (all_leaves) {
        const std::size_t size = node.total_items();
        if (best == nullptr || size < best_size) {
            best = &node;
            best_size = size;
        }
    }
    return best;
}

std::vector<std::size_t> leaf_sizes(const Dendrogram& d) {
    std::vector<std::size_t> sizes;
    for (const Dendrogram* leaf : collect_leaves(d))
        sizes.push_back(leaf->items.size());
    return sizes;
}

} // namespace

Dendrogram hard_prune(const Dendrogram& d, const PruneConfig& cfg) {
    if (cfg.n < 1)
        throw InvalidParameter("hard_prune: n must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw InvalidParameter("hard_prune: alpha must be in (0, 1]");

    Dendrogram tree = d;
    const double want = cfg.alpha * static_cast<double>(tree.total_items());

    while (true) {
        std::vector<std::size_t> sizes = leaf_sizes(tree);
        std::sort(sizes.rbegin(), sizes.rend());
        std::size_t covered = 0;
        for (std::size_t i = 0; i < sizes.size() && i < static_cast<std::size_t>(cfg.n); ++i)
            covered += sizes[i];
        if (static_cast<double>(covered) >= want)
            break;

        std::size_t branch_size = 0;
        Dendrogram* branch = find_smallest_end_branch(tree, nullptr, branch_size);
        if (branch == nullptr)
            break; // single leaf, nothing to merge
        const std::size_t leaves_now = sizes.size();
        const std::size_t leaves_gone = branch->children.size();
        if (leaves_now - leaves_gone + 1 < static_cast<std::size_t>(cfg.n))
            break;

        std::vector<VertexId> merged;
        merged.reserve(branch_size);
        for (const auto& c : branch->children)
            merged.insert(merged.end(), c.items.begin(), c.items.end());
        std::sort(merged.begin(), merged.end());
        branch->children.clear();
        branch->items = std::move(merged);
    }
    return tree;
}

namespace {

struct LeafRef {
    Dendrogram* leaf = nullptr;
    Dendrogram* parent = nullptr;
};

void find_smallest_leaf(Dendrogram& node, Dendrogram* parent, LeafRef& best) {
    if (node.is_leaf()) {
        if (best.leaf == nullptr || node.items.size() < best.leaf->items.size()) {
            best.leaf = &node;
            best.parent = parent;
        }
        return;
    }
    for (auto& c : node.children)
        find_smallest_leaf(c, &node, best);
}

} // namespace

Dendrogram soft_prune(const Dendrogram& d, int n) {
    if (n < 1)
        throw InvalidParameter("soft_prune: n must be >= 1");

    Dendrogram tree = d;
    while (tree.leaf_count() > static_cast<std::size_t>(n)) {
        LeafRef ref;
        find_smallest_leaf(tree, nullptr, ref);
        if (ref.parent == nullptr)
            break; // root itself is a leaf

        Dendrogram* parent = ref.parent;
        if (parent->children.size() > 1) {
            // smallest brother of the leaf; ties keep the earliest child
            Dendrogram* brother = nullptr;
            std::size_t brother_size = 0;
            for (auto& c : parent->children) {
                if (&c == ref.leaf)
                    continue;
                const std::size_t size = c.total_items();
                if (brother == nullptr || size < brother_size) {
                    brother = &c;
                    brother_size = size;
                }
            }
            if (brother->is_leaf()) {
                brother->items.insert(brother->items.end(), ref.leaf->items.begin(),
                                      ref.leaf->items.end());
                std::sort(brother->items.begin(), brother->items.end());
                // drop the merged-away leaf
                for (std::size_t i = 0; i < parent->children.size(); ++i) {
                    if (&parent->children[i] == ref.leaf) {
                        parent->children.erase(parent->children.begin() +
                                               static_cast<std::ptrdiff_t>(i));
                        break;
                    }
                }
            } else {
                Dendrogram moved = std::move(*ref.leaf);
                for (std::size_t i = 0; i < parent->children.size(); ++i) {
                    if (&parent->children[i] == ref.leaf) {
                        // brother pointer survives the erase iff it sits before
                        // the removed slot, so re-find it by value afterwards
                        const bool brother_after =
                            brother > &parent->children[i];
                        parent->children.erase(parent->children.begin() +
                                               static_cast<std::ptrdiff_t>(i));
                        if (brother_after)
                            --brother;
                        break;
                    }
                }
                brother->children.push_back(std::move(moved));
            }
        }
        if (parent->children.size() == 1) {
            Dendrogram only = std::move(parent->children.front());
            *parent = std::move(only);
        }
    }
    return tree;
}

std::vector<int> smooth(const std::vector<int>& labels, const DirectedGraph& g, int passes,
                        std::vector<int>* changes_per_pass) {
    if (passes < 0)
        throw InvalidParameter("smooth: passes must be >= 0");
    const int n = static_cast<int>(g.size());
    for (int v = 0; v < n; ++v) {
        const std::size_t id = static_cast<std::size_t>(g.id(v));
        if (id >= labels.size() || labels[id] < 0)
            throw InvalidInput("smooth: labels do not cover the graph");
    }

    // dense relabeling so each vote is an array bump
    std::unordered_map<int, int> to_dense;
    std::vector<int> dense_to_label;
    std::vector<int> cur(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const int lab = labels[static_cast<std::size_t>(g.id(v))];
        auto [it, inserted] = to_dense.emplace(lab, static_cast<int>(dense_to_label.size()));
        if (inserted)
            dense_to_label.push_back(lab);
        cur[static_cast<std::size_t>(v)] = it->second;
    }

    std::vector<int> next(cur.size());
    std::vector<int> counts(dense_to_label.size(), 0);
    std::vector<int> touched;
    for (int pass = 0; pass < passes; ++pass) {
        int changed = 0;
        for (int v = 0; v < n; ++v) {
            const auto& nbrs = g.out(v);
            const int self = cur[static_cast<std::size_t>(v)];
            if (nbrs.empty()) {
                next[static_cast<std::size_t>(v)] = self;
                continue;
            }
            touched.clear();
            for (int u : nbrs) {
                const int lab = cur[static_cast<std::size_t>(u)];
                if (counts[static_cast<std::size_t>(lab)]++ == 0)
                    touched.push_back(lab);
            }
            int best = -1, best_count = 0;
            bool tie = false;
            for (int lab : touched) {
                const int c = counts[static_cast<std::size_t>(lab)];
                if (c > best_count) {
                    best = lab;
                    best_count = c;
                    tie = false;
                } else if (c == best_count) {
                    tie = true;
                }
            }
            for (int lab : touched)
                counts[static_cast<std::size_t>(lab)] = 0;
            const int winner = (!tie && best != self) ? best : self;
            if (winner != self)
                ++changed;
            next[static_cast<std::size_t>(v)] = winner;
        }
        cur.swap(next);
        if (changes_per_pass)
            changes_per_pass->push_back(changed);
        if (changed == 0)
            break;
    }

    std::vector<int> out(labels);
    for (int v = 0; v < n; ++v)
        out[static_cast<std::size_t>(g.id(v))] =
            dense_to_label[static_cast<std::size_t>(cur[static_cast<std::size_t>(v)])];
    return out;
}

namespace {

Dendrogram* rebuild_walk(const Dendrogram& node, std::size_t& leaf_idx,
                         const std::vector<std::vector<VertexId>>& buckets, Dendrogram& out) {
    if (node.is_leaf()) {
        const std::size_t i = leaf_idx++;
        if (i >= buckets.size() || buckets[i].empty())
            return nullptr;
        out.items = buckets[i];
        return &out;
    }
    std::vector<Dendrogram> kept;
    for (const auto& c : node.children) {
        Dendrogram child;
        if (rebuild_walk(c, leaf_idx, buckets, child) != nullptr)
            kept.push_back(std::move(child));
    }
    if (kept.empty())
        return nullptr;
    if (kept.size() == 1) {
        out = std::move(kept.front());
        return &out;
    }
    out.children = std::move(kept);
    return &out;
}

} // namespace

Dendrogram rebuild_leaves(const Dendrogram& d, const std::vector<int>& labels) {
    const std::size_t n_leaves = d.leaf_count();
    std::vector<std::vector<VertexId>> buckets(n_leaves);
    for (std::size_t v = 0; v < labels.size(); ++v) {
        const int lab = labels[v];
        if (lab < 0)
            continue;
        if (static_cast<std::size_t>(lab) >= n_leaves)
            throw InvalidParameter("rebuild_leaves: label out of range");
        buckets[static_cast<std::size_t>(lab)].push_back(static_cast<VertexId>(v));
    }
    Dendrogram out;
    std::size_t leaf_idx = 0;
    if (rebuild_walk(d, leaf_idx, buckets, out) == nullptr)
        throw InvalidInput("rebuild_leaves: all leaves became empty");
    return out;
}

std::vector<int> compact_labels(const std::vector<int>& labels) {
    std::unordered_map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) {
            out[i] = labels[i];
            continue;
        }
        auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    return out;
}

std::vector<int> postprocess_pipeline(const Dendrogram& d, const DirectedGraph& knn,
                                      PruneMode mode, const PruneConfig& cfg,
                                      int smooth_passes) {
    std::vector<int> labels = smooth(flatten(d), knn, smooth_passes);
    const Dendrogram rebuilt = rebuild_leaves(d, labels);
    const Dendrogram pruned =
        mode == PruneMode::hard ? hard_prune(rebuilt, cfg) : soft_prune(rebuilt, cfg.n);
    return compact_labels(smooth(flatten(pruned), knn, smooth_passes));
}

} // namespace sc
