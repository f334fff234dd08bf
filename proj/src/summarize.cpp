#include <sc/summarize.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include <sc/error.hpp>
#include <sc/parallel.hpp>

namespace sc {

std::vector<char> RemovalSet::local_mask(const DirectedGraph& g) const {
    std::vector<char> mask(g.size(), 0);
    for (VertexId id : ids) {
        const int v = g.local(id);
        if (v < 0)
            throw InvalidParameter("removal set contains a vertex not in the graph");
        mask[static_cast<std::size_t>(v)] = 1;
    }
    return mask;
}

std::vector<double> score_vertices(const DirectedGraph& g, SamplingMeasure measure,
                                   std::uint64_t seed) {
    const int n = static_cast<int>(g.size());
    std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
    switch (measure) {
    case SamplingMeasure::random: {
        std::mt19937_64 rng(seed);
        for (int v = 0; v < n; ++v) {
            // explicit 53-bit mapping: identical streams on every platform
            scores[static_cast<std::size_t>(v)] =
                static_cast<double>(rng() >> 11) * 0x1.0p-53;
        }
        break;
    }
    case SamplingMeasure::indegree: {
        for (int v = 0; v < n; ++v)
            for (int u : g.out(v))
                scores[static_cast<std::size_t>(u)] += 1.0;
        break;
    }
    case SamplingMeasure::mutual: {
        for (int v = 0; v < n; ++v) {
            int mutual = 0;
            for (int u : g.out(v)) {
                const auto& back = g.out(u);
                if (std::find(back.begin(), back.end(), v) != back.end())
                    ++mutual;
            }
            scores[static_cast<std::size_t>(v)] = static_cast<double>(mutual);
        }
        break;
    }
    }
    return scores;
}

RemovalSet sample(const DirectedGraph& g, const std::vector<double>& scores, double rate) {
    if (scores.size() != g.size())
        throw InvalidParameter("sample: scores do not cover the graph");
    if (!(rate > 0.0 && rate < 1.0))
        throw InvalidParameter("sample: rate must be in (0, 1)");
    const std::size_t n = g.size();
    const std::size_t n_rm =
        static_cast<std::size_t>(std::floor(rate * static_cast<double>(n)));
    RemovalSet r;
    if (n_rm == 0)
        return r;
    std::vector<double> sorted(scores);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n_rm - 1),
                     sorted.end());
    const double threshold = sorted[n_rm - 1];
    for (std::size_t v = 0; v < n; ++v)
        if (scores[v] <= threshold)
            r.ids.push_back(g.id(static_cast<int>(v)));
    return r;
}

namespace {

struct BfsScratch {
    std::vector<std::uint32_t> stamp;   // last query that visited each rank
    std::vector<std::pair<int, int>> queue; // (rank, depth)
    std::uint32_t epoch = 0;

    void begin_query(std::size_t n) {
        if (stamp.size() < n) {
            stamp.assign(n, 0);
            epoch = 0;
        }
        if (++epoch == 0) { // wrapped: stale stamps could collide
            std::fill(stamp.begin(), stamp.end(), 0);
            epoch = 1;
        }
        queue.clear();
    }
};

// Survivor subgraph relabeled by breadth-first sweep rank, adjacency in one
// flat arena. The per-vertex candidate search is memory-bound; sweep-rank
// labels put each search's working set on contiguous, recently-touched
// lines, and pre-filtering removed vertices takes the mask test out of the
// hot loop entirely.
struct SweepGraph {
    std::vector<int> order;             // rank -> old local
    std::vector<std::size_t> offset;    // per rank
    std::vector<int> neighbor;          // surviving neighbors as ranks, list order kept

    SweepGraph(const DirectedGraph& g, const std::vector<char>& mask,
               const std::vector<int>& survivors) {
        const int n = static_cast<int>(g.size());
        order.reserve(survivors.size());
        std::vector<int> rank_of(static_cast<std::size_t>(n), -1);
        for (int root : survivors) {
            if (rank_of[static_cast<std::size_t>(root)] >= 0)
                continue;
            rank_of[static_cast<std::size_t>(root)] = static_cast<int>(order.size());
            order.push_back(root);
            for (std::size_t head = order.size() - 1; head < order.size(); ++head) {
                for (int w : g.out(order[head])) {
                    if (!mask[static_cast<std::size_t>(w)] &&
                        rank_of[static_cast<std::size_t>(w)] < 0) {
                        rank_of[static_cast<std::size_t>(w)] = static_cast<int>(order.size());
                        order.push_back(w);
                    }
                }
            }
        }
        offset.resize(order.size() + 1, 0);
        for (std::size_t r = 0; r < order.size(); ++r) {
            std::size_t deg = 0;
            for (int w : g.out(order[r]))
                deg += mask[static_cast<std::size_t>(w)] ? 0u : 1u;
            offset[r + 1] = offset[r] + deg;
        }
        neighbor.resize(offset.back());
        for (std::size_t r = 0; r < order.size(); ++r) {
            std::size_t at = offset[r];
            for (int w : g.out(order[r]))
                if (!mask[static_cast<std::size_t>(w)])
                    neighbor[at++] = rank_of[static_cast<std::size_t>(w)];
        }
    }
};

// One bounded BFS from rank `v`; returns candidate ranks in visit order.
// Stops once at least t candidates are known and the next visit would be
// deeper than d (vertex granularity, so a level can split). Depth rides in
// the queue; the only random-access state is the 4-byte visit stamp.
void collect_candidates(const SweepGraph& adj, int v, int t, int d, BfsScratch& s,
                        std::vector<int>& out_candidates) {
    out_candidates.clear();
    const std::uint32_t e = s.epoch;
    s.stamp[static_cast<std::size_t>(v)] = e;
    for (std::size_t i = adj.offset[static_cast<std::size_t>(v)];
         i < adj.offset[static_cast<std::size_t>(v) + 1]; ++i) {
        const int u = adj.neighbor[i];
        if (s.stamp[static_cast<std::size_t>(u)] != e) {
            s.stamp[static_cast<std::size_t>(u)] = e;
            s.queue.emplace_back(u, 1);
        }
    }
    std::size_t head = 0;
    while (head < s.queue.size()) {
        const auto [u, depth] = s.queue[head];
        if (static_cast<int>(out_candidates.size()) >= t && depth > d)
            break;
        ++head;
        out_candidates.push_back(u);
        // children at depth+1 > d are only ever consumed while |C| < t; once
        // the vertices already queued are enough to reach t, discovering
        // them is pure waste, so skip the expansion (exact, not heuristic:
        // every queued vertex ahead of them is consumed first)
        if (depth + 1 > d &&
            out_candidates.size() + (s.queue.size() - head) >= static_cast<std::size_t>(t))
            continue;
        for (std::size_t i = adj.offset[static_cast<std::size_t>(u)];
             i < adj.offset[static_cast<std::size_t>(u) + 1]; ++i) {
            const int w = adj.neighbor[i];
            if (s.stamp[static_cast<std::size_t>(w)] != e) {
                s.stamp[static_cast<std::size_t>(w)] = e;
                s.queue.emplace_back(w, depth + 1);
            }
        }
    }
}

} // namespace

DirectedGraph condense(const DirectedGraph& g, const RemovalSet& removed,
                       const CondenseConfig& cfg, int threads) {
    if (cfg.t < 1)
        throw InvalidParameter("condense: t must be >= 1");
    if (cfg.depth < 0)
        throw InvalidParameter("condense: depth must be >= 0");
    if (cfg.measure == CondenseMeasure::euclidean && cfg.points == nullptr)
        throw InvalidParameter("condense: euclidean measure needs a point set");

    const std::vector<char> mask = removed.local_mask(g);
    const int n = static_cast<int>(g.size());

    std::vector<int> survivors; // old locals, ascending
    survivors.reserve(g.size());
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        if (!mask[static_cast<std::size_t>(v)]) {
            remap[static_cast<std::size_t>(v)] = static_cast<int>(survivors.size());
            survivors.push_back(v);
        }
    }
    if (survivors.empty())
        throw InvalidParameter("condense: all vertices removed");

    if (cfg.measure == CondenseMeasure::euclidean) {
        for (int v : survivors)
            if (static_cast<std::size_t>(g.id(v)) >= cfg.points->size())
                throw InvalidParameter("condense: point set does not cover the graph");
    }

    const SweepGraph adj(g, mask, survivors);
    const std::size_t ns = adj.order.size();

    // Jaccard reads neighborhoods of the *input* graph restricted to
    // survivors, snapshotted before any rewiring so the pass is
    // order-independent. Rank-relabeled, sorted N+ sets make the overlap a
    // linear merge over one flat arena.
    std::vector<std::size_t> nplus_offset;
    std::vector<int> nplus_data;
    if (cfg.measure == CondenseMeasure::jaccard) {
        nplus_offset.resize(ns + 1, 0);
        for (std::size_t r = 0; r < ns; ++r)
            nplus_offset[r + 1] = nplus_offset[r] + (adj.offset[r + 1] - adj.offset[r]) + 1;
        nplus_data.resize(nplus_offset.back());
        for (std::size_t r = 0; r < ns; ++r) {
            std::size_t w = nplus_offset[r];
            for (std::size_t i = adj.offset[r]; i < adj.offset[r + 1]; ++i)
                nplus_data[w++] = adj.neighbor[i];
            nplus_data[w++] = static_cast<int>(r);
            std::sort(nplus_data.begin() + static_cast<std::ptrdiff_t>(nplus_offset[r]),
                      nplus_data.begin() + static_cast<std::ptrdiff_t>(w));
        }
    }

    const auto jaccard_dissimilarity = [&](int a, int b) {
        std::size_t i = nplus_offset[static_cast<std::size_t>(a)];
        const std::size_t a_end = nplus_offset[static_cast<std::size_t>(a) + 1];
        std::size_t j = nplus_offset[static_cast<std::size_t>(b)];
        const std::size_t b_end = nplus_offset[static_cast<std::size_t>(b) + 1];
        const std::size_t size_a = a_end - i;
        const std::size_t size_b = b_end - j;
        std::size_t inter = 0;
        while (i < a_end && j < b_end) {
            if (nplus_data[i] < nplus_data[j]) {
                ++i;
            } else if (nplus_data[i] > nplus_data[j]) {
                ++j;
            } else {
                ++inter;
                ++i;
                ++j;
            }
        }
        const std::size_t uni = size_a + size_b - inter;
        return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
    };

    std::vector<std::vector<int>> new_out(ns);

    parallel_for(ns, threads, [&](std::size_t r) {
        thread_local BfsScratch scratch;
        thread_local std::vector<int> candidates;
        thread_local std::vector<std::pair<double, int>> scored; // (score, visit idx)
        scratch.begin_query(ns);
        collect_candidates(adj, static_cast<int>(r), cfg.t, cfg.depth, scratch, candidates);
        const std::size_t take = std::min<std::size_t>(candidates.size(),
                                                       static_cast<std::size_t>(cfg.t));
        auto& lst = new_out[static_cast<std::size_t>(
            remap[static_cast<std::size_t>(adj.order[r])])];
        lst.clear();
        lst.reserve(take);
        if (cfg.measure == CondenseMeasure::visit_order) {
            for (std::size_t c = 0; c < take; ++c)
                lst.push_back(remap[static_cast<std::size_t>(
                    adj.order[static_cast<std::size_t>(candidates[c])])]);
            return;
        }
        scored.clear();
        scored.reserve(candidates.size());
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const int u = candidates[c];
            double score;
            if (cfg.measure == CondenseMeasure::jaccard) {
                score = jaccard_dissimilarity(static_cast<int>(r), u);
            } else {
                score = cfg.points->dist2(
                    static_cast<std::size_t>(g.id(adj.order[r])),
                    static_cast<std::size_t>(g.id(adj.order[static_cast<std::size_t>(u)])));
            }
            scored.emplace_back(score, static_cast<int>(c));
        }
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                          scored.end());
        for (std::size_t c = 0; c < take; ++c)
            lst.push_back(remap[static_cast<std::size_t>(adj.order[static_cast<std::size_t>(
                candidates[static_cast<std::size_t>(scored[c].second)])])]);
    });

    std::vector<VertexId> new_ids(survivors.size());
    for (std::size_t i = 0; i < survivors.size(); ++i)
        new_ids[i] = g.id(survivors[i]);
    return DirectedGraph(std::move(new_ids), std::move(new_out));
}

} // namespace sc
