#include <sc/cluster.hpp>

#include <algorithm>
#include <atomic>
#include <future>
#include <mutex>
#include <unordered_map>

#include <sc/error.hpp>

namespace sc {

std::vector<const Dendrogram*> collect_leaves(const Dendrogram& d) {
    std::vector<const Dendrogram*> leaves;
    std::vector<const Dendrogram*> stack{&d};
    while (!stack.empty()) {
        const Dendrogram* node = stack.back();
        stack.pop_back();
        if (node->is_leaf()) {
            leaves.push_back(node);
        } else {
            for (auto it = node->children.rbegin(); it != node->children.rend(); ++it)
                stack.push_back(&*it);
        }
    }
    return leaves;
}

void validate_dendrogram(const Dendrogram& d) {
    const auto leaves = collect_leaves(d);
    std::vector<VertexId> all;
    for (const Dendrogram* leaf : leaves) {
        if (!leaf->children.empty() && !leaf->items.empty())
            throw InvalidInput("dendrogram node is both branch and leaf");
        all.insert(all.end(), leaf->items.begin(), leaf->items.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw InvalidInput("dendrogram leaves overlap");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic per-call seed: independent of execution order, so sibling
// subtrees can run concurrently without changing any output.
std::uint64_t child_seed(std::uint64_t parent, std::size_t child_index) {
    return splitmix64(parent ^ splitmix64(static_cast<std::uint64_t>(child_index) + 1));
}

struct Recursion {
    const ClusterConfig& cfg;
    const std::size_t total_vertices;
    AssociationForest forest;
    std::mutex forest_mutex;
    std::atomic<int> spare_threads;
    std::atomic<std::size_t> max_depth{0};
    std::atomic<std::size_t> passes{0};

    Recursion(const ClusterConfig& c, std::size_t n)
        : cfg(c), total_vertices(n), spare_threads(std::max(0, c.threads - 1)) {}

    Dendrogram run(DirectedGraph g, std::uint64_t seed, std::size_t depth) {
        // one pass per level, each removing at least one vertex
        if (depth > total_vertices + 1)
            throw Error("cluster: recursion depth exceeded vertex count");
        std::size_t seen = max_depth.load();
        while (depth > seen && !max_depth.compare_exchange_weak(seen, depth)) {
        }

        const std::vector<double> scores =
            score_vertices(g, cfg.sampling.measure, seed);
        const RemovalSet removed = sample(g, scores, cfg.sampling.rate);

        if (removed.empty() || removed.size() == g.size()) {
            Dendrogram leaf;
            leaf.items = g.ids(); // survivors; full membership filled in later
            return leaf;
        }

        AssociationMap pass = associate_multisource(g, removed);
        {
            std::lock_guard<std::mutex> lock(forest_mutex);
            forest.passes.push_back(std::move(pass));
        }
        passes.fetch_add(1);

        const DirectedGraph condensed = condense(g, removed, cfg.condensing, cfg.threads);
        g = DirectedGraph(); // the input is dead weight below this point

        const auto comps = connected_components(condensed, cfg.components);
        return descend(condensed, comps, seed, depth);
    }

    Dendrogram descend(const DirectedGraph& g,
                       const std::vector<std::vector<VertexId>>& comps,
                       std::uint64_t seed, std::size_t depth) {
        if (comps.size() == 1)
            return run(induced_subgraph(g, comps[0]), child_seed(seed, 0), depth + 1);

        std::vector<Dendrogram> children(comps.size());
        std::vector<std::future<void>> tasks;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            auto work = [this, &g, &comps, &children, seed, depth, i] {
                children[i] =
                    run(induced_subgraph(g, comps[i]), child_seed(seed, i), depth + 1);
            };
            int spare = spare_threads.load();
            while (spare > 0 && !spare_threads.compare_exchange_weak(spare, spare - 1)) {
            }
            if (spare > 0) {
                tasks.push_back(std::async(std::launch::async, [this, work] {
                    work();
                    spare_threads.fetch_add(1);
                }));
            } else {
                work();
            }
        }
        for (auto& t : tasks)
            t.get();

        Dendrogram branch;
        branch.children = std::move(children);
        return branch;
    }
};

} // namespace

ClusterResult cluster(const DirectedGraph& g, const ClusterConfig& cfg) {
    if (g.empty())
        throw InvalidInput("cluster: empty graph");
    if (!(cfg.sampling.rate > 0.0 && cfg.sampling.rate < 1.0))
        throw InvalidParameter("cluster: sampling rate must be in (0, 1)");

    Recursion rec(cfg, g.size());

    DirectedGraph start =
        cfg.precondense ? condense(g, RemovalSet{}, *cfg.precondense, cfg.threads) : g;

    // A disconnected input is split without sampling; that split is the root.
    const auto comps = connected_components(start, cfg.components);
    Dendrogram root = comps.size() == 1
                          ? rec.run(std::move(start), cfg.sampling.seed, 1)
                          : rec.descend(start, comps, cfg.sampling.seed, 1);

    // Resolve every removed vertex to its terminal survivor and expand the
    // leaves from survivor sets to full membership.
    std::vector<VertexId> survivors;
    std::vector<Dendrogram*> leaf_ptrs;
    {
        std::vector<Dendrogram*> stack{&root};
        while (!stack.empty()) {
            Dendrogram* node = stack.back();
            stack.pop_back();
            if (node->is_leaf()) {
                leaf_ptrs.push_back(node);
                survivors.insert(survivors.end(), node->items.begin(), node->items.end());
            } else {
                for (auto it = node->children.rbegin(); it != node->children.rend(); ++it)
                    stack.push_back(&*it);
            }
        }
    }

    std::unordered_map<VertexId, std::size_t> leaf_of;
    leaf_of.reserve(survivors.size());
    for (std::size_t li = 0; li < leaf_ptrs.size(); ++li)
        for (VertexId s : leaf_ptrs[li]->items)
            leaf_of.emplace(s, li);

    const auto resolved = resolve(rec.forest, survivors);
    for (const auto& [v, s] : resolved)
        if (v != s)
            leaf_ptrs[leaf_of.at(s)]->items.push_back(v);
    for (Dendrogram* leaf : leaf_ptrs)
        std::sort(leaf->items.begin(), leaf->items.end());

    ClusterResult result;
    result.dendrogram = std::move(root);
    result.forest = std::move(rec.forest);
    result.passes = rec.passes.load();
    result.max_depth = rec.max_depth.load();
    return result;
}

std::vector<int> flatten(const Dendrogram& d) {
    const auto leaves = collect_leaves(d);
    VertexId max_id = -1;
    for (const Dendrogram* leaf : leaves)
        for (VertexId v : leaf->items)
            max_id = std::max(max_id, v);
    std::vector<int> labels(static_cast<std::size_t>(max_id + 1), -1);
    for (std::size_t li = 0; li < leaves.size(); ++li)
        for (VertexId v : leaves[li]->items)
            labels[static_cast<std::size_t>(v)] = static_cast<int>(li);
    return labels;
}

} // namespace sc
