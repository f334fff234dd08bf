#include <sc/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <sc/error.hpp>

namespace sc {

namespace {

std::vector<char> positivity_flags(const DirectedGraph& g, const std::vector<int>& truth) {
    const int n = static_cast<int>(g.size());
    std::vector<char> positive(static_cast<std::size_t>(n), 1);
    for (int v = 0; v < n; ++v) {
        const std::size_t vid = static_cast<std::size_t>(g.id(v));
        if (vid >= truth.size())
            throw InvalidInput("positivity: labels do not cover the graph");
        const int lab = truth[vid];
        for (int u : g.out(v)) {
            if (truth[static_cast<std::size_t>(g.id(u))] != lab) {
                positive[static_cast<std::size_t>(v)] = 0;
                break;
            }
        }
    }
    return positive;
}

} // namespace

double vertex_positivity(const DirectedGraph& g, const std::vector<int>& truth) {
    if (g.empty())
        throw InvalidInput("vertex_positivity: empty graph");
    const auto positive = positivity_flags(g, truth);
    std::size_t count = 0;
    for (char p : positive)
        count += static_cast<std::size_t>(p);
    return static_cast<double>(count) / static_cast<double>(g.size());
}

double positivity_after_removal(const DirectedGraph& g, const std::vector<int>& truth,
                                const RemovalSet& removed) {
    const auto mask = removed.local_mask(g);
    const std::size_t survivors = g.size() - removed.size();
    if (survivors == 0)
        throw InvalidParameter("positivity_after_removal: every vertex removed");
    const auto positive = positivity_flags(g, truth);
    std::size_t count = 0;
    for (std::size_t v = 0; v < g.size(); ++v)
        if (!mask[v] && positive[v])
            ++count;
    return static_cast<double>(count) / static_cast<double>(survivors);
}

double edge_positivity(const DirectedGraph& g, const std::vector<int>& truth) {
    std::size_t edges = 0;
    std::size_t positive = 0;
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
        const std::size_t vid = static_cast<std::size_t>(g.id(v));
        if (vid >= truth.size())
            throw InvalidInput("edge_positivity: labels do not cover the graph");
        const int lab = truth[vid];
        for (int u : g.out(v)) {
            ++edges;
            if (truth[static_cast<std::size_t>(g.id(u))] == lab)
                ++positive;
        }
    }
    if (edges == 0)
        throw InvalidInput("edge_positivity: graph has no edges");
    return static_cast<double>(positive) / static_cast<double>(edges);
}

namespace {

// Dinic on unit capacities. The arc arrays are built once per graph and the
// flow state is reset per (source, sink) pair.
class UnitFlow {
public:
    explicit UnitFlow(const DirectedGraph& g) : n_(static_cast<int>(g.size())) {
        // forward arc 2i pairs with its residual twin 2i+1 (arc ^ 1)
        std::vector<std::pair<int, int>> arcs;
        for (int v = 0; v < n_; ++v)
            for (int u : g.out(v))
                arcs.emplace_back(v, u);
        adj_list_.assign(static_cast<std::size_t>(n_), {});
        cap_.assign(arcs.size() * 2, 0);
        to_.assign(arcs.size() * 2, 0);
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const auto [v, u] = arcs[i];
            to_[2 * i] = u;
            to_[2 * i + 1] = v;
            adj_list_[static_cast<std::size_t>(v)].push_back(static_cast<int>(2 * i));
            adj_list_[static_cast<std::size_t>(u)].push_back(static_cast<int>(2 * i + 1));
        }
        level_.assign(static_cast<std::size_t>(n_), -1);
        it_.assign(static_cast<std::size_t>(n_), 0);
    }

    int maxflow(int s, int t) {
        for (std::size_t i = 0; i < cap_.size(); i += 2) {
            cap_[i] = 1;
            cap_[i + 1] = 0;
        }
        int flow = 0;
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            int pushed;
            while ((pushed = dfs(s, t)) > 0)
                flow += pushed;
        }
        return flow;
    }

private:
    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        queue_.clear();
        queue_.push_back(s);
        level_[static_cast<std::size_t>(s)] = 0;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const int v = queue_[head];
            for (int a : adj_list_[static_cast<std::size_t>(v)]) {
                const int u = to_[static_cast<std::size_t>(a)];
                if (cap_[static_cast<std::size_t>(a)] > 0 && level_[static_cast<std::size_t>(u)] < 0) {
                    level_[static_cast<std::size_t>(u)] = level_[static_cast<std::size_t>(v)] + 1;
                    queue_.push_back(u);
                }
            }
        }
        return level_[static_cast<std::size_t>(t)] >= 0;
    }

    int dfs(int v, int t) {
        if (v == t)
            return 1;
        for (int& i = it_[static_cast<std::size_t>(v)];
             i < static_cast<int>(adj_list_[static_cast<std::size_t>(v)].size()); ++i) {
            const int a = adj_list_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
            const int u = to_[static_cast<std::size_t>(a)];
            if (cap_[static_cast<std::size_t>(a)] > 0 &&
                level_[static_cast<std::size_t>(u)] == level_[static_cast<std::size_t>(v)] + 1 &&
                dfs(u, t) > 0) {
                --cap_[static_cast<std::size_t>(a)];
                ++cap_[static_cast<std::size_t>(a ^ 1)];
                return 1;
            }
        }
        return 0;
    }

    int n_;
    std::vector<int> to_;
    std::vector<int> cap_;
    std::vector<std::vector<int>> adj_list_;
    std::vector<int> level_;
    std::vector<int> it_;
    std::vector<int> queue_;
};

} // namespace

double graph_connectivity(const DirectedGraph& g) {
    const int n = static_cast<int>(g.size());
    if (n < 2)
        throw InvalidParameter("graph_connectivity: need at least two vertices");
    if (g.edge_count() == 0)
        return 0.0;
    UnitFlow flow(g);
    long long total = 0;
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (s != t)
                total += flow.maxflow(s, t);
    return static_cast<double>(total) /
           (static_cast<double>(n) * static_cast<double>(n - 1));
}

ContingencyTable ContingencyTable::from_labels(const std::vector<int>& a,
                                               const std::vector<int>& b) {
    if (a.empty() || a.size() != b.size())
        throw InvalidInput("contingency: labelings must be equal-length and non-empty");
    std::unordered_map<int, int> ra, rb;
    std::vector<int> da(a.size()), db(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        da[i] = ra.emplace(a[i], static_cast<int>(ra.size())).first->second;
        db[i] = rb.emplace(b[i], static_cast<int>(rb.size())).first->second;
    }
    ContingencyTable table;
    table.n = static_cast<long long>(a.size());
    table.counts.assign(ra.size(), std::vector<long long>(rb.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        ++table.counts[static_cast<std::size_t>(da[i])][static_cast<std::size_t>(db[i])];
    table.row_sums.assign(ra.size(), 0);
    table.col_sums.assign(rb.size(), 0);
    for (std::size_t i = 0; i < table.counts.size(); ++i)
        for (std::size_t j = 0; j < table.counts[i].size(); ++j) {
            table.row_sums[i] += table.counts[i][j];
            table.col_sums[j] += table.counts[i][j];
        }
    return table;
}

namespace {

double entropy(const std::vector<long long>& sums, long long n) {
    double h = 0.0;
    for (long long s : sums) {
        if (s > 0) {
            const double p = static_cast<double>(s) / static_cast<double>(n);
            h -= p * std::log(p);
        }
    }
    return h;
}

double mutual_information(const ContingencyTable& t) {
    const double n = static_cast<double>(t.n);
    double mi = 0.0;
    for (std::size_t i = 0; i < t.counts.size(); ++i) {
        for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
            const long long c = t.counts[i][j];
            if (c > 0) {
                const double pij = static_cast<double>(c) / n;
                mi += pij * std::log(n * static_cast<double>(c) /
                                     (static_cast<double>(t.row_sums[i]) *
                                      static_cast<double>(t.col_sums[j])));
            }
        }
    }
    return std::max(0.0, mi);
}

// Expected mutual information under the permutation (hypergeometric) model.
double expected_mutual_information(const ContingencyTable& t) {
    const long long n = t.n;
    std::vector<double> log_fact(static_cast<std::size_t>(n) + 1, 0.0);
    for (long long i = 1; i <= n; ++i)
        log_fact[static_cast<std::size_t>(i)] =
            log_fact[static_cast<std::size_t>(i - 1)] + std::log(static_cast<double>(i));
    const double dn = static_cast<double>(n);
    double emi = 0.0;
    for (long long ai : t.row_sums) {
        for (long long bj : t.col_sums) {
            const long long lo = std::max<long long>(1, ai + bj - n);
            const long long hi = std::min(ai, bj);
            for (long long nij = lo; nij <= hi; ++nij) {
                const double log_term =
                    log_fact[static_cast<std::size_t>(ai)] + log_fact[static_cast<std::size_t>(bj)] +
                    log_fact[static_cast<std::size_t>(n - ai)] +
                    log_fact[static_cast<std::size_t>(n - bj)] -
                    log_fact[static_cast<std::size_t>(n)] -
                    log_fact[static_cast<std::size_t>(nij)] -
                    log_fact[static_cast<std::size_t>(ai - nij)] -
                    log_fact[static_cast<std::size_t>(bj - nij)] -
                    log_fact[static_cast<std::size_t>(n - ai - bj + nij)];
                emi += (static_cast<double>(nij) / dn) *
                       std::log(dn * static_cast<double>(nij) /
                                (static_cast<double>(ai) * static_cast<double>(bj))) *
                       std::exp(log_term);
            }
        }
    }
    return emi;
}

bool constant_labeling(const std::vector<long long>& sums) {
    int nonzero = 0;
    for (long long s : sums)
        if (s > 0)
            ++nonzero;
    return nonzero <= 1;
}

} // namespace

double nmi(const std::vector<int>& a, const std::vector<int>& b, NmiNorm norm) {
    const auto table = ContingencyTable::from_labels(a, b);
    const double ha = entropy(table.row_sums, table.n);
    const double hb = entropy(table.col_sums, table.n);
    if (constant_labeling(table.row_sums) && constant_labeling(table.col_sums))
        return 1.0;
    const double denom = norm == NmiNorm::max ? std::max(ha, hb) : std::sqrt(ha * hb);
    if (denom <= 0.0)
        return 0.0;
    const double value = mutual_information(table) / denom;
    return std::clamp(value, 0.0, 1.0);
}

double ami(const std::vector<int>& a, const std::vector<int>& b) {
    const auto table = ContingencyTable::from_labels(a, b);
    if (constant_labeling(table.row_sums) && constant_labeling(table.col_sums))
        return 1.0;
    const double ha = entropy(table.row_sums, table.n);
    const double hb = entropy(table.col_sums, table.n);
    const double mi = mutual_information(table);
    const double emi = expected_mutual_information(table);
    const double denom = std::max(ha, hb) - emi;
    const double num = mi - emi;
    if (std::abs(denom) < 1e-15)
        return 0.0;
    return num / denom;
}

} // namespace sc
