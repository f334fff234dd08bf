#include <sc/associate.hpp>

#include <algorithm>
#include <unordered_map>

#include <sc/error.hpp>

namespace sc {

VertexId AssociationMap::rep_of(VertexId v) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), v,
                               [](const auto& p, VertexId key) { return p.first < key; });
    if (it == pairs.end() || it->first != v)
        throw InvalidParameter("vertex is not in the association map");
    return it->second;
}

namespace {

// out(v) followed by the in-neighbors that are not already out-neighbors.
std::vector<std::vector<int>> undirected_adjacency(const DirectedGraph& g) {
    const int n = static_cast<int>(g.size());
    const auto& in = g.in_lists();
    std::vector<std::vector<int>> und(static_cast<std::size_t>(n));
    std::vector<char> mark(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        auto& lst = und[static_cast<std::size_t>(v)];
        lst = g.out(v);
        for (int u : lst)
            mark[static_cast<std::size_t>(u)] = 1;
        for (int u : in[static_cast<std::size_t>(v)])
            if (!mark[static_cast<std::size_t>(u)])
                lst.push_back(u);
        for (int u : g.out(v))
            mark[static_cast<std::size_t>(u)] = 0;
    }
    return und;
}

} // namespace

AssociationMap associate_simple(const DirectedGraph& g, const RemovalSet& removed,
                                std::size_t* edge_visits) {
    const std::vector<char> mask = removed.local_mask(g);
    const auto und = undirected_adjacency(g);
    const int n = static_cast<int>(g.size());
    std::size_t visits = 0;

    AssociationMap result;
    result.pairs.reserve(removed.size());

    std::vector<std::uint64_t> stamp(static_cast<std::size_t>(n), 0);
    std::vector<int> depth(static_cast<std::size_t>(n), 0);
    std::vector<int> queue;
    std::uint64_t epoch = 0;

    for (int v = 0; v < n; ++v) {
        if (!mask[static_cast<std::size_t>(v)])
            continue;
        const std::uint64_t e = ++epoch;
        stamp[static_cast<std::size_t>(v)] = e;
        depth[static_cast<std::size_t>(v)] = 0;
        queue.clear();
        queue.push_back(v);
        int best = -1;
        int best_depth = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int u = queue[head];
            // survivors at best_depth are all discovered from vertices one
            // level up; once we reach that level the answer is final
            if (best >= 0 && depth[static_cast<std::size_t>(u)] >= best_depth)
                break;
            for (int w : und[static_cast<std::size_t>(u)]) {
                if (stamp[static_cast<std::size_t>(w)] != e)
                    ++visits; // first touch of edge {u, w} in this run
                if (mask[static_cast<std::size_t>(w)]) {
                    if (stamp[static_cast<std::size_t>(w)] != e) {
                        stamp[static_cast<std::size_t>(w)] = e;
                        depth[static_cast<std::size_t>(w)] = depth[static_cast<std::size_t>(u)] + 1;
                        queue.push_back(w);
                    }
                } else {
                    const int cand_depth = depth[static_cast<std::size_t>(u)] + 1;
                    if (best < 0 || cand_depth < best_depth ||
                        (cand_depth == best_depth && g.id(w) < g.id(best))) {
                        best = w;
                        best_depth = cand_depth;
                    }
                    stamp[static_cast<std::size_t>(w)] = e;
                }
            }
        }
        if (best < 0)
            throw Error("associate: removed vertex cannot reach any remaining vertex");
        result.pairs.emplace_back(g.id(v), g.id(best));
    }
    if (edge_visits)
        *edge_visits = visits;
    return result;
}

AssociationMap associate_multisource(const DirectedGraph& g, const RemovalSet& removed,
                                     std::size_t* edge_visits) {
    const std::vector<char> mask = removed.local_mask(g);
    const auto und = undirected_adjacency(g);
    const int n = static_cast<int>(g.size());
    std::size_t visits = 0;

    std::vector<int> label(static_cast<std::size_t>(n), -1);
    std::vector<char> popped(static_cast<std::size_t>(n), 0);
    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(n));

    // Sources enter in ascending id order; BFS level blocks then stay
    // ordered by source id, which is what makes the smallest equidistant
    // source win, exactly as the per-vertex search does.
    for (int v = 0; v < n; ++v) {
        if (!mask[static_cast<std::size_t>(v)]) {
            label[static_cast<std::size_t>(v)] = v;
            queue.push_back(v);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        popped[static_cast<std::size_t>(u)] = 1;
        for (int w : und[static_cast<std::size_t>(u)]) {
            if (!popped[static_cast<std::size_t>(w)])
                ++visits; // counts each undirected edge once
            if (label[static_cast<std::size_t>(w)] < 0) {
                label[static_cast<std::size_t>(w)] = label[static_cast<std::size_t>(u)];
                queue.push_back(w);
            }
        }
    }

    AssociationMap result;
    result.pairs.reserve(removed.size());
    for (int v = 0; v < n; ++v) {
        if (!mask[static_cast<std::size_t>(v)])
            continue;
        if (label[static_cast<std::size_t>(v)] < 0)
            throw Error("associate: removed vertex cannot reach any remaining vertex");
        result.pairs.emplace_back(g.id(v), g.id(label[static_cast<std::size_t>(v)]));
    }
    if (edge_visits)
        *edge_visits = visits;
    return result;
}

std::vector<std::pair<VertexId, VertexId>> resolve(const AssociationForest& forest,
                                                   const std::vector<VertexId>& survivors) {
    std::unordered_map<VertexId, VertexId> final_rep;
    std::size_t total = survivors.size();
    for (const auto& pass : forest.passes)
        total += pass.size();
    final_rep.reserve(total);

    for (VertexId s : survivors)
        final_rep.emplace(s, s);
    // Reverse creation order: a pass's representatives are only ever removed
    // by passes created later, so they are already resolved when needed.
    for (auto pass = forest.passes.rbegin(); pass != forest.passes.rend(); ++pass) {
        for (const auto& [v, u] : pass->pairs) {
            auto it = final_rep.find(u);
            if (it == final_rep.end())
                throw Error("resolve: dangling association chain");
            const VertexId terminal = it->second;
            final_rep[v] = terminal;
        }
    }

    std::vector<std::pair<VertexId, VertexId>> out(final_rep.begin(), final_rep.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace sc
