#include <sc/knn.hpp>

#include <algorithm>
#include <queue>
#include <utility>
#include <vector>

#include <sc/error.hpp>
#include <sc/parallel.hpp>

namespace sc {

namespace {

// Bounded worst-first heap over (dist2, id); lexicographic order doubles as
// the tie-break rule, which is what keeps brute and tree bit-identical.
using Candidate = std::pair<double, VertexId>;
using WorstHeap = std::priority_queue<Candidate>;

void offer(WorstHeap& heap, std::size_t k, double d2, VertexId id) {
    const Candidate c{d2, id};
    if (heap.size() < k) {
        heap.push(c);
    } else if (c < heap.top()) {
        heap.pop();
        heap.push(c);
    }
}

std::vector<VertexId> heap_to_sorted(WorstHeap heap) {
    std::vector<Candidate> items;
    items.reserve(heap.size());
    while (!heap.empty()) {
        items.push_back(heap.top());
        heap.pop();
    }
    std::sort(items.begin(), items.end());
    std::vector<VertexId> ids;
    ids.reserve(items.size());
    for (const auto& [d2, id] : items)
        ids.push_back(id);
    return ids;
}

class KdTree {
public:
    KdTree(const PointSet& pts, int leaf_size = 24) : pts_(pts), leaf_size_(leaf_size) {
        order_.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            order_[i] = static_cast<VertexId>(i);
        root_ = build(0, static_cast<int>(pts.size()));
    }

    // k nearest points to `query`, excluding the query point itself.
    std::vector<VertexId> query_knn(VertexId query, std::size_t k) const {
        WorstHeap heap;
        search(root_, query, k, heap);
        return heap_to_sorted(std::move(heap));
    }

private:
    struct Node {
        int left = -1;
        int right = -1;
        int lo = 0;
        int hi = 0;
        int dim = 0;
        double split = 0.0;
    };

    int build(int lo, int hi) {
        Node node;
        node.lo = lo;
        node.hi = hi;
        const int idx = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        if (hi - lo <= leaf_size_) {
            return idx;
        }
        // split the dimension with the widest spread
        const std::size_t dims = pts_.dim();
        int best_dim = 0;
        double best_spread = -1.0;
        for (std::size_t d = 0; d < dims; ++d) {
            double mn = pts_.at(static_cast<std::size_t>(order_[static_cast<std::size_t>(lo)]), d);
            double mx = mn;
            for (int i = lo + 1; i < hi; ++i) {
                const double x = pts_.at(static_cast<std::size_t>(order_[static_cast<std::size_t>(i)]), d);
                mn = std::min(mn, x);
                mx = std::max(mx, x);
            }
            if (mx - mn > best_spread) {
                best_spread = mx - mn;
                best_dim = static_cast<int>(d);
            }
        }
        if (best_spread <= 0.0) {
            return idx; // all points identical: keep as leaf
        }
        const int mid = lo + (hi - lo) / 2;
        const std::size_t dim = static_cast<std::size_t>(best_dim);
        std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                         [&](VertexId a, VertexId b) {
                             const double xa = pts_.at(static_cast<std::size_t>(a), dim);
                             const double xb = pts_.at(static_cast<std::size_t>(b), dim);
                             return xa < xb || (xa == xb && a < b);
                         });
        nodes_[static_cast<std::size_t>(idx)].dim = best_dim;
        nodes_[static_cast<std::size_t>(idx)].split =
            pts_.at(static_cast<std::size_t>(order_[static_cast<std::size_t>(mid)]), dim);
        const int left = build(lo, mid);
        const int right = build(mid, hi);
        nodes_[static_cast<std::size_t>(idx)].left = left;
        nodes_[static_cast<std::size_t>(idx)].right = right;
        return idx;
    }

    void scan_leaf(const Node& node, VertexId query, std::size_t k, WorstHeap& heap) const {
        for (int i = node.lo; i < node.hi; ++i) {
            const VertexId p = order_[static_cast<std::size_t>(i)];
            if (p == query)
                continue;
            offer(heap, k, pts_.dist2(static_cast<std::size_t>(query), static_cast<std::size_t>(p)), p);
        }
    }

    void search(int idx, VertexId query, std::size_t k, WorstHeap& heap) const {
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        if (node.left < 0) {
            scan_leaf(node, query, k, heap);
            return;
        }
        const double qx = pts_.at(static_cast<std::size_t>(query), static_cast<std::size_t>(node.dim));
        const double gap = qx - node.split;
        const int near = gap < 0.0 ? node.left : node.right;
        const int far = gap < 0.0 ? node.right : node.left;
        search(near, query, k, heap);
        // A point at exactly gap^2 on the far side can still win its id
        // tie-break, so only prune on a strictly larger gap.
        if (heap.size() < k || gap * gap <= heap.top().first)
            search(far, query, k, heap);
    }

    const PointSet& pts_;
    int leaf_size_;
    int root_ = -1;
    std::vector<VertexId> order_;
    std::vector<Node> nodes_;
};

} // namespace

DirectedGraph build_knn_graph(const PointSet& points, int k, KnnMethod method, int threads) {
    if (points.empty())
        throw InvalidInput("build_knn_graph: empty point set");
    if (points.dim() < 1)
        throw InvalidInput("build_knn_graph: zero-dimensional points");
    if (k < 1 || static_cast<std::size_t>(k) >= points.size())
        throw InvalidParameter("build_knn_graph: k must satisfy 1 <= k < |V|");

    const std::size_t n = points.size();
    std::vector<std::vector<int>> out(n);

    if (method == KnnMethod::brute) {
        parallel_for(n, threads, [&](std::size_t v) {
            WorstHeap heap;
            for (std::size_t u = 0; u < n; ++u) {
                if (u == v)
                    continue;
                offer(heap, static_cast<std::size_t>(k), points.dist2(v, u), static_cast<VertexId>(u));
            }
            const auto ids = heap_to_sorted(std::move(heap));
            out[v].assign(ids.begin(), ids.end());
        });
    } else {
        KdTree tree(points);
        parallel_for(n, threads, [&](std::size_t v) {
            const auto ids = tree.query_knn(static_cast<VertexId>(v), static_cast<std::size_t>(k));
            out[v].assign(ids.begin(), ids.end());
        });
    }

    std::vector<VertexId> ids(n);
    for (std::size_t i = 0; i < n; ++i)
        ids[i] = static_cast<VertexId>(i);
    return DirectedGraph(std::move(ids), std::move(out));
}

} // namespace sc
