#include <sc/graph.hpp>

#include <algorithm>
#include <numeric>

#include <sc/error.hpp>

namespace sc {

DirectedGraph::DirectedGraph(std::size_t n) : ids_(n), out_(n) {
    std::iota(ids_.begin(), ids_.end(), VertexId{0});
}

DirectedGraph::DirectedGraph(std::vector<VertexId> ids, std::vector<std::vector<int>> out)
    : ids_(std::move(ids)), out_(std::move(out)) {
    validate();
}

DirectedGraph::DirectedGraph(const DirectedGraph& other)
    : ids_(other.ids_), out_(other.out_) {}

DirectedGraph& DirectedGraph::operator=(const DirectedGraph& other) {
    if (this != &other) {
        ids_ = other.ids_;
        out_ = other.out_;
        in_.clear();
        in_built_ = false;
    }
    return *this;
}

void DirectedGraph::validate() const {
    if (ids_.size() != out_.size())
        throw InvalidParameter("vertex id list and adjacency list sizes differ");
    if (!std::is_sorted(ids_.begin(), ids_.end()) ||
        std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
        throw InvalidParameter("vertex ids must be sorted and unique");
    const int n = static_cast<int>(ids_.size());
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        for (int u : out_[static_cast<std::size_t>(v)]) {
            if (u < 0 || u >= n)
                throw InvalidParameter("out-neighbor index out of range");
            if (u == v)
                throw InvalidParameter("self-loop");
            if (seen[static_cast<std::size_t>(u)])
                throw InvalidParameter("duplicate out-edge");
            seen[static_cast<std::size_t>(u)] = 1;
        }
        for (int u : out_[static_cast<std::size_t>(v)])
            seen[static_cast<std::size_t>(u)] = 0;
    }
}

std::size_t DirectedGraph::edge_count() const {
    std::size_t m = 0;
    for (const auto& lst : out_)
        m += lst.size();
    return m;
}

int DirectedGraph::local(VertexId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id)
        return -1;
    return static_cast<int>(it - ids_.begin());
}

const std::vector<std::vector<int>>& DirectedGraph::in_lists() const {
    std::lock_guard<std::mutex> lock(*in_mutex_);
    if (!in_built_) {
        in_.assign(out_.size(), {});
        std::vector<std::size_t> indeg(out_.size(), 0);
        for (const auto& lst : out_)
            for (int u : lst)
                ++indeg[static_cast<std::size_t>(u)];
        for (std::size_t v = 0; v < out_.size(); ++v)
            in_[v].reserve(indeg[v]);
        for (std::size_t v = 0; v < out_.size(); ++v)
            for (int u : out_[v])
                in_[static_cast<std::size_t>(u)].push_back(static_cast<int>(v));
        in_built_ = true;
    }
    return in_;
}

namespace {

// Iterative Tarjan; recursion would overflow the stack on long chains.
std::vector<int> strong_component_labels(const DirectedGraph& g) {
    const int n = static_cast<int>(g.size());
    constexpr int kUnvisited = -1;
    std::vector<int> index(static_cast<std::size_t>(n), kUnvisited);
    std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    stack.reserve(static_cast<std::size_t>(n));

    struct Frame {
        int v;
        std::size_t next_edge;
    };
    std::vector<Frame> call;
    int next_index = 0;
    int next_comp = 0;

    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != kUnvisited)
            continue;
        call.push_back({root, 0});
        index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] = next_index++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& nbrs = g.out(f.v);
            if (f.next_edge < nbrs.size()) {
                const int u = nbrs[f.next_edge++];
                if (index[static_cast<std::size_t>(u)] == kUnvisited) {
                    index[static_cast<std::size_t>(u)] = lowlink[static_cast<std::size_t>(u)] = next_index++;
                    stack.push_back(u);
                    on_stack[static_cast<std::size_t>(u)] = 1;
                    call.push_back({u, 0});
                } else if (on_stack[static_cast<std::size_t>(u)]) {
                    lowlink[static_cast<std::size_t>(f.v)] =
                        std::min(lowlink[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(u)]);
                }
            } else {
                const int v = f.v;
                call.pop_back();
                if (!call.empty()) {
                    const int parent = call.back().v;
                    lowlink[static_cast<std::size_t>(parent)] =
                        std::min(lowlink[static_cast<std::size_t>(parent)], lowlink[static_cast<std::size_t>(v)]);
                }
                if (lowlink[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        comp[static_cast<std::size_t>(w)] = next_comp;
                        if (w == v)
                            break;
                    }
                    ++next_comp;
                }
            }
        }
    }
    return comp;
}

std::vector<int> weak_component_labels(const DirectedGraph& g) {
    const int n = static_cast<int>(g.size());
    const auto& in = g.in_lists();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<int> queue;
    int next_comp = 0;
    for (int root = 0; root < n; ++root) {
        if (comp[static_cast<std::size_t>(root)] != -1)
            continue;
        comp[static_cast<std::size_t>(root)] = next_comp;
        queue.clear();
        queue.push_back(root);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int v = queue[head];
            for (int u : g.out(v)) {
                if (comp[static_cast<std::size_t>(u)] == -1) {
                    comp[static_cast<std::size_t>(u)] = next_comp;
                    queue.push_back(u);
                }
            }
            for (int u : in[static_cast<std::size_t>(v)]) {
                if (comp[static_cast<std::size_t>(u)] == -1) {
                    comp[static_cast<std::size_t>(u)] = next_comp;
                    queue.push_back(u);
                }
            }
        }
        ++next_comp;
    }
    return comp;
}

} // namespace

std::vector<std::vector<VertexId>> connected_components(const DirectedGraph& g, ComponentMode mode) {
    const std::vector<int> comp =
        mode == ComponentMode::strong ? strong_component_labels(g) : weak_component_labels(g);
    int ncomp = 0;
    for (int c : comp)
        ncomp = std::max(ncomp, c + 1);
    std::vector<std::vector<VertexId>> groups(static_cast<std::size_t>(ncomp));
    // ascending local order => each group comes out sorted by original id
    for (int v = 0; v < static_cast<int>(g.size()); ++v)
        groups[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(g.id(v));
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return groups;
}

DirectedGraph induced_subgraph(const DirectedGraph& g, const std::vector<VertexId>& keep) {
    std::vector<VertexId> ids(keep);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    // both id lists are sorted: one linear merge yields old-local -> new-local
    const int n_old = static_cast<int>(g.size());
    std::vector<int> remap(static_cast<std::size_t>(n_old), -1);
    std::vector<int> old_local(ids.size());
    {
        std::size_t i = 0;
        for (int v = 0; v < n_old && i < ids.size(); ++v) {
            if (g.id(v) == ids[i]) {
                remap[static_cast<std::size_t>(v)] = static_cast<int>(i);
                old_local[i] = v;
                ++i;
            }
        }
        if (i != ids.size())
            throw InvalidParameter("induced_subgraph: vertex not in graph");
    }

    std::vector<std::vector<int>> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& nbrs = g.out(old_local[i]);
        out[i].reserve(nbrs.size());
        for (int u : nbrs) {
            const int nu = remap[static_cast<std::size_t>(u)];
            if (nu >= 0)
                out[i].push_back(nu);
        }
    }
    return DirectedGraph(std::move(ids), std::move(out));
}

} // namespace sc
