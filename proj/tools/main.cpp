// scluster: sampling-clustering pipeline driver.
//
// Subcommands: knn, cluster, prune, smooth, label, eval, graphstats, bench.
// Every stage reads and writes plain files, so any step can be re-run or
// swapped out on its own. Exit codes: 0 ok, 1 runtime failure, 2 usage.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <sc/cluster.hpp>
#include <sc/dataio.hpp>
#include <sc/error.hpp>
#include <sc/knn.hpp>
#include <sc/metrics.hpp>
#include <sc/postprocess.hpp>
#include <sc/summarize.hpp>

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

sc::KnnMethod parse_knn_method(const std::string& s) {
    if (s == "brute")
        return sc::KnnMethod::brute;
    if (s == "tree")
        return sc::KnnMethod::tree;
    throw CLI::ValidationError("--method", "expected 'brute' or 'tree'");
}

sc::SamplingMeasure parse_sampling(const std::string& s) {
    if (s == "random")
        return sc::SamplingMeasure::random;
    if (s == "indegree")
        return sc::SamplingMeasure::indegree;
    if (s == "mutual")
        return sc::SamplingMeasure::mutual;
    throw CLI::ValidationError("--sample", "expected 'random', 'indegree' or 'mutual'");
}

sc::CondenseMeasure parse_condense(const std::string& s) {
    if (s == "visit")
        return sc::CondenseMeasure::visit_order;
    if (s == "jaccard")
        return sc::CondenseMeasure::jaccard;
    if (s == "euclid")
        return sc::CondenseMeasure::euclidean;
    throw CLI::ValidationError("--condense", "expected 'visit', 'jaccard' or 'euclid'");
}

std::string measure_name(sc::SamplingMeasure m) {
    switch (m) {
    case sc::SamplingMeasure::random: return "random";
    case sc::SamplingMeasure::indegree: return "indegree";
    case sc::SamplingMeasure::mutual: return "mutual";
    }
    return "?";
}

std::string measure_name(sc::CondenseMeasure m) {
    switch (m) {
    case sc::CondenseMeasure::visit_order: return "visit";
    case sc::CondenseMeasure::jaccard: return "jaccard";
    case sc::CondenseMeasure::euclidean: return "euclid";
    }
    return "?";
}

void emit_metrics(const std::vector<std::pair<std::string, double>>& rows,
                  const std::string& output_path) {
    std::ostringstream text;
    for (const auto& [name, value] : rows) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", value);
        text << name << ',' << buf << '\n';
    }
    if (output_path.empty()) {
        std::cout << text.str();
    } else {
        std::ofstream out(output_path);
        if (!out)
            throw sc::InvalidInput("cannot write file: " + output_path);
        out << text.str();
    }
}

std::vector<int> load_truth(const std::string& path, int truth_label_column) {
    if (truth_label_column >= 0)
        return sc::load_points(path, truth_label_column).labels();
    return sc::load_labels(path);
}

// ---------------------------------------------------------------------------
// cluster subcommand state

struct ClusterArgs {
    std::string graph_path;
    std::string points_path;
    int label_column = -1;
    double rate = 0.2;
    int t = 16;
    int depth = 2;
    std::string sample = "indegree";
    std::string condense = "visit";
    std::string precondense = "jaccard";
    std::string components = "strong";
    std::uint64_t seed = 0;
    int threads = 1;
    std::string output;
    bool full_pipeline = false;
    std::string prune_mode = "soft";
    int n_clusters = 10;
    double alpha = 0.8;
    int smooth_passes = 16;
    std::string labels_output;
};

int run_cluster(const ClusterArgs& a) {
    sc::RunManifest manifest;
    const auto t0 = Clock::now();

    const sc::DirectedGraph graph = sc::load_graph(a.graph_path);
    manifest.add_input(a.graph_path);

    sc::PointSet points;
    if (!a.points_path.empty()) {
        points = sc::load_points(a.points_path,
                                 a.label_column >= 0 ? std::optional<int>(a.label_column)
                                                     : std::nullopt);
        manifest.add_input(a.points_path);
    }
    manifest.add_timing("load", ms_since(t0));

    sc::ClusterConfig cfg;
    cfg.sampling.rate = a.rate;
    cfg.sampling.measure = parse_sampling(a.sample);
    cfg.sampling.seed = a.seed;
    cfg.condensing.t = a.t;
    cfg.condensing.depth = a.depth;
    cfg.condensing.measure = parse_condense(a.condense);
    cfg.components = a.components == "weak" ? sc::ComponentMode::weak : sc::ComponentMode::strong;
    cfg.threads = a.threads;
    if (a.precondense != "none") {
        sc::CondenseConfig pre = cfg.condensing;
        pre.measure = parse_condense(a.precondense);
        cfg.precondense = pre;
    }
    const bool needs_points =
        cfg.condensing.measure == sc::CondenseMeasure::euclidean ||
        (cfg.precondense && cfg.precondense->measure == sc::CondenseMeasure::euclidean);
    if (needs_points && points.empty())
        throw sc::InvalidParameter("euclid condensing requires --points");
    if (!points.empty()) {
        cfg.condensing.points = &points;
        if (cfg.precondense)
            cfg.precondense->points = &points;
    }

    nlohmann::json config_json = {
        {"command", "cluster"},
        {"graph", a.graph_path},
        {"rate", a.rate},
        {"t", a.t},
        {"depth", a.depth},
        {"sample", a.sample},
        {"condense", a.condense},
        {"precondense", a.precondense},
        {"components", a.components},
        {"seed", a.seed},
        {"threads", a.threads},
    };

    const auto t1 = Clock::now();
    const sc::ClusterResult result = sc::cluster(graph, cfg);
    manifest.add_timing("cluster", ms_since(t1));

    const auto t2 = Clock::now();
    sc::save_dendrogram(result.dendrogram, a.output, config_json);
    manifest.outputs.push_back(a.output);

    if (a.full_pipeline) {
        if (a.labels_output.empty())
            throw sc::InvalidParameter("--full-pipeline requires --labels-output");
        config_json["prune_mode"] = a.prune_mode;
        config_json["n"] = a.n_clusters;
        config_json["alpha"] = a.alpha;
        config_json["smooth_passes"] = a.smooth_passes;
        const sc::PruneMode mode =
            a.prune_mode == "hard" ? sc::PruneMode::hard : sc::PruneMode::soft;
        const std::vector<int> labels = sc::postprocess_pipeline(
            result.dendrogram, graph, mode, sc::PruneConfig{a.n_clusters, a.alpha},
            a.smooth_passes);
        sc::save_labels(labels, a.labels_output);
        manifest.outputs.push_back(a.labels_output);
    }
    manifest.add_timing("write", ms_since(t2));

    manifest.config = config_json;
    manifest.write(a.output + ".manifest.json");
    return 0;
}

// ---------------------------------------------------------------------------
// bench subcommand: synthetic Gaussian blobs, timing table on stdout

sc::PointSet make_blobs(std::size_t n, std::size_t dim, int n_blobs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center_dist(-50.0, 50.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::vector<double>> centers(static_cast<std::size_t>(n_blobs),
                                             std::vector<double>(dim));
    for (auto& c : centers)
        for (auto& x : c)
            x = center_dist(rng);
    sc::PointSet pts(n, dim);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t blob = i % static_cast<std::size_t>(n_blobs);
        labels[i] = static_cast<int>(blob);
        for (std::size_t d = 0; d < dim; ++d)
            pts.at(i, d) = centers[blob][d] + noise(rng);
    }
    pts.set_labels(std::move(labels));
    return pts;
}

int run_bench(const std::vector<std::size_t>& sizes, int repeats, int k, double rate, int t,
              int depth, std::uint64_t seed, int threads) {
    std::cout << "n,repeat,knn_ms,cluster_ms\n";
    for (std::size_t n : sizes) {
        for (int rep = 0; rep < repeats; ++rep) {
            const sc::PointSet pts = make_blobs(n, 16, 10, seed + static_cast<std::uint64_t>(rep));
            const auto t0 = Clock::now();
            const sc::DirectedGraph g = sc::build_knn_graph(pts, k, sc::KnnMethod::tree, threads);
            const double knn_ms = ms_since(t0);

            sc::ClusterConfig cfg;
            cfg.sampling.rate = rate;
            cfg.condensing.t = t;
            cfg.condensing.depth = depth;
            cfg.precondense = cfg.condensing;
            cfg.precondense->measure = sc::CondenseMeasure::jaccard;
            cfg.threads = threads;
            const auto t1 = Clock::now();
            const sc::ClusterResult result = sc::cluster(g, cfg);
            const double cluster_ms = ms_since(t1);
            (void)result;

            char row[160];
            std::snprintf(row, sizeof(row), "%zu,%d,%.1f,%.1f\n", n, rep, knn_ms, cluster_ms);
            std::cout << row;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling-clustering pipeline"};
    app.require_subcommand(1);

    // ---- knn ----
    std::string knn_input, knn_output, knn_method = "tree";
    int knn_k = 16, knn_label_column = -1, knn_threads = 1;
    auto* knn_cmd = app.add_subcommand("knn", "build a k-nearest-neighbor graph from points");
    knn_cmd->add_option("--input", knn_input, "points CSV")->required();
    knn_cmd->add_option("--k", knn_k, "neighbors per vertex (default 16)");
    knn_cmd->add_option("--method", knn_method, "brute|tree (default tree)");
    knn_cmd->add_option("--label-column", knn_label_column, "0-based label column to exclude");
    knn_cmd->add_option("--threads", knn_threads, "worker threads (default 1)");
    knn_cmd->add_option("--output", knn_output, "graph file")->required();

    // ---- cluster ----
    ClusterArgs ca;
    auto* cluster_cmd = app.add_subcommand("cluster", "divisive clustering of a graph by recursive summarization");
    cluster_cmd->add_option("--graph", ca.graph_path, "input graph file")->required();
    cluster_cmd->add_option("--points", ca.points_path, "points CSV (needed by euclid condensing)");
    cluster_cmd->add_option("--label-column", ca.label_column, "0-based label column in --points");
    cluster_cmd->add_option("--rate", ca.rate, "sampling rate r in (0,1) (default 0.2)");
    cluster_cmd->add_option("--t", ca.t, "condensing target out-degree (default 16)");
    cluster_cmd->add_option("--depth", ca.depth, "condensing BFS depth guard (default 2)");
    cluster_cmd->add_option("--sample", ca.sample, "random|indegree|mutual (default indegree)");
    cluster_cmd->add_option("--condense", ca.condense, "visit|jaccard|euclid (default visit)");
    cluster_cmd->add_option("--precondense", ca.precondense,
                            "one pass on the input graph: visit|jaccard|euclid|none (default jaccard)");
    cluster_cmd->add_option("--components", ca.components, "strong|weak (default strong)");
    cluster_cmd->add_option("--seed", ca.seed, "seed for random sampling (default 0)");
    cluster_cmd->add_option("--threads", ca.threads, "worker threads (default 1)");
    cluster_cmd->add_option("--output", ca.output, "dendrogram JSON")->required();
    cluster_cmd->add_flag("--full-pipeline", ca.full_pipeline,
                          "also smooth, prune and smooth again, writing a labels CSV");
    cluster_cmd->add_option("--prune-mode", ca.prune_mode, "hard|soft (default soft)");
    cluster_cmd->add_option("--n", ca.n_clusters, "cluster count for pruning (default 10)");
    cluster_cmd->add_option("--alpha", ca.alpha, "hard-prune coverage fraction (default 0.8)");
    cluster_cmd->add_option("--smooth-passes", ca.smooth_passes,
                            "smoothing passes before and after pruning (default 16)");
    cluster_cmd->add_option("--labels-output", ca.labels_output, "labels CSV (full pipeline)");

    // ---- prune ----
    std::string prune_dendro, prune_mode = "hard", prune_output;
    int prune_n = 10;
    double prune_alpha = 0.8;
    auto* prune_cmd = app.add_subcommand("prune", "reduce a dendrogram to n clusters");
    prune_cmd->add_option("--dendro", prune_dendro, "dendrogram JSON")->required();
    prune_cmd->add_option("--mode", prune_mode, "hard|soft (default hard)");
    prune_cmd->add_option("--n", prune_n, "desired cluster count")->required();
    prune_cmd->add_option("--alpha", prune_alpha, "hard-prune coverage fraction (default 0.8)");
    prune_cmd->add_option("--output", prune_output, "pruned dendrogram JSON")->required();

    // ---- smooth ----
    std::string smooth_labels, smooth_graph, smooth_output;
    int smooth_passes = 16;
    auto* smooth_cmd = app.add_subcommand("smooth", "majority-vote label smoothing over a graph");
    smooth_cmd->add_option("--labels", smooth_labels, "labels CSV")->required();
    smooth_cmd->add_option("--graph", smooth_graph, "graph file")->required();
    smooth_cmd->add_option("--passes", smooth_passes, "max passes (default 16)");
    smooth_cmd->add_option("--output", smooth_output, "smoothed labels CSV")->required();

    // ---- label ----
    std::string label_dendro, label_output;
    auto* label_cmd = app.add_subcommand("label", "flatten a dendrogram into a labels CSV");
    label_cmd->add_option("--dendro", label_dendro, "dendrogram JSON")->required();
    label_cmd->add_option("--output", label_output, "labels CSV")->required();

    // ---- eval ----
    std::string eval_pred, eval_truth, eval_metrics = "ami", eval_output;
    int eval_truth_label_column = -1;
    auto* eval_cmd = app.add_subcommand("eval", "compare a predicted labeling to ground truth");
    eval_cmd->add_option("--pred", eval_pred, "predicted labels CSV")->required();
    eval_cmd->add_option("--truth", eval_truth, "truth labels CSV, or points CSV with --truth-label-column")
        ->required();
    eval_cmd->add_option("--truth-label-column", eval_truth_label_column,
                         "read truth from this column of a points CSV");
    eval_cmd->add_option("--metric", eval_metrics, "comma list: ami,nmi,nmi_sqrt (default ami)");
    eval_cmd->add_option("--output", eval_output, "write metric CSV here instead of stdout");

    // ---- graphstats ----
    std::string gs_graph, gs_truth, gs_output;
    int gs_truth_label_column = -1;
    bool gs_positivity = false, gs_edge_positivity = false, gs_connectivity = false;
    auto* gs_cmd = app.add_subcommand("graphstats", "separability and connectivity measures of a graph");
    gs_cmd->add_option("--graph", gs_graph, "graph file")->required();
    gs_cmd->add_option("--truth", gs_truth, "truth labels CSV, or points CSV with --truth-label-column");
    gs_cmd->add_option("--truth-label-column", gs_truth_label_column,
                       "read truth from this column of a points CSV");
    gs_cmd->add_flag("--positivity", gs_positivity, "vertex positivity (needs --truth)");
    gs_cmd->add_flag("--edge-positivity", gs_edge_positivity, "edge positivity (needs --truth)");
    gs_cmd->add_flag("--connectivity", gs_connectivity, "average pairwise max-flow (small graphs)");
    gs_cmd->add_option("--output", gs_output, "write metric CSV here instead of stdout");

    // ---- bench ----
    std::string bench_sizes = "20000,40000,80000";
    int bench_repeats = 1, bench_k = 16, bench_t = 16, bench_depth = 2, bench_threads = 1;
    double bench_rate = 0.2;
    std::uint64_t bench_seed = 0;
    auto* bench_cmd = app.add_subcommand("bench", "timing table on synthetic Gaussian blobs");
    bench_cmd->add_option("--sizes", bench_sizes, "comma list of dataset sizes");
    bench_cmd->add_option("--repeats", bench_repeats, "repeats per size (default 1)");
    bench_cmd->add_option("--k", bench_k, "k-NN size (default 16)");
    bench_cmd->add_option("--rate", bench_rate, "sampling rate (default 0.2)");
    bench_cmd->add_option("--t", bench_t, "condensing out-degree (default 16)");
    bench_cmd->add_option("--depth", bench_depth, "condensing depth guard (default 2)");
    bench_cmd->add_option("--seed", bench_seed, "blob generator seed (default 0)");
    bench_cmd->add_option("--threads", bench_threads, "worker threads (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*knn_cmd) {
            sc::RunManifest manifest;
            const sc::PointSet pts = sc::load_points(
                knn_input, knn_label_column >= 0 ? std::optional<int>(knn_label_column)
                                                 : std::nullopt);
            manifest.add_input(knn_input);
            const auto t0 = Clock::now();
            const sc::DirectedGraph g =
                sc::build_knn_graph(pts, knn_k, parse_knn_method(knn_method), knn_threads);
            manifest.add_timing("knn", ms_since(t0));
            sc::save_graph(g, knn_output);
            manifest.outputs.push_back(knn_output);
            manifest.config = {{"command", "knn"},       {"input", knn_input},
                               {"k", knn_k},             {"method", knn_method},
                               {"label_column", knn_label_column}, {"threads", knn_threads}};
            manifest.write(knn_output + ".manifest.json");
            return 0;
        }
        if (*cluster_cmd)
            return run_cluster(ca);
        if (*prune_cmd) {
            sc::RunManifest manifest;
            nlohmann::json config;
            const sc::Dendrogram d = sc::load_dendrogram(prune_dendro, &config);
            manifest.add_input(prune_dendro);
            const auto t0 = Clock::now();
            const sc::Dendrogram pruned =
                prune_mode == "soft" ? sc::soft_prune(d, prune_n)
                                     : sc::hard_prune(d, sc::PruneConfig{prune_n, prune_alpha});
            manifest.add_timing("prune", ms_since(t0));
            config["prune"] = {{"mode", prune_mode}, {"n", prune_n}, {"alpha", prune_alpha}};
            sc::save_dendrogram(pruned, prune_output, config);
            manifest.outputs.push_back(prune_output);
            manifest.config = config;
            manifest.write(prune_output + ".manifest.json");
            return 0;
        }
        if (*smooth_cmd) {
            sc::RunManifest manifest;
            const std::vector<int> labels = sc::load_labels(smooth_labels);
            const sc::DirectedGraph g = sc::load_graph(smooth_graph);
            manifest.add_input(smooth_labels);
            manifest.add_input(smooth_graph);
            const auto t0 = Clock::now();
            const std::vector<int> smoothed = sc::smooth(labels, g, smooth_passes);
            manifest.add_timing("smooth", ms_since(t0));
            sc::save_labels(smoothed, smooth_output);
            manifest.outputs.push_back(smooth_output);
            manifest.config = {{"command", "smooth"}, {"passes", smooth_passes}};
            manifest.write(smooth_output + ".manifest.json");
            return 0;
        }
        if (*label_cmd) {
            const sc::Dendrogram d = sc::load_dendrogram(label_dendro);
            sc::save_labels(sc::flatten(d), label_output);
            sc::RunManifest manifest;
            manifest.add_input(label_dendro);
            manifest.outputs.push_back(label_output);
            manifest.config = {{"command", "label"}};
            manifest.write(label_output + ".manifest.json");
            return 0;
        }
        if (*eval_cmd) {
            const std::vector<int> pred = sc::load_labels(eval_pred);
            const std::vector<int> truth = load_truth(eval_truth, eval_truth_label_column);
            std::vector<std::pair<std::string, double>> rows;
            std::stringstream metrics(eval_metrics);
            std::string metric;
            while (std::getline(metrics, metric, ',')) {
                if (metric == "ami")
                    rows.emplace_back("ami", sc::ami(pred, truth));
                else if (metric == "nmi")
                    rows.emplace_back("nmi", sc::nmi(pred, truth, sc::NmiNorm::max));
                else if (metric == "nmi_sqrt")
                    rows.emplace_back("nmi_sqrt", sc::nmi(pred, truth, sc::NmiNorm::sqrt));
                else
                    throw sc::InvalidParameter("unknown metric: " + metric);
            }
            emit_metrics(rows, eval_output);
            return 0;
        }
        if (*gs_cmd) {
            const sc::DirectedGraph g = sc::load_graph(gs_graph);
            std::vector<std::pair<std::string, double>> rows;
            if (gs_positivity || gs_edge_positivity) {
                if (gs_truth.empty())
                    throw sc::InvalidParameter("positivity measures need --truth");
                const std::vector<int> truth = load_truth(gs_truth, gs_truth_label_column);
                if (gs_positivity)
                    rows.emplace_back("vertex_positivity", sc::vertex_positivity(g, truth));
                if (gs_edge_positivity)
                    rows.emplace_back("edge_positivity", sc::edge_positivity(g, truth));
            }
            if (gs_connectivity)
                rows.emplace_back("connectivity", sc::graph_connectivity(g));
            emit_metrics(rows, gs_output);
            return 0;
        }
        if (*bench_cmd) {
            std::vector<std::size_t> sizes;
            std::stringstream ss(bench_sizes);
            std::string item;
            while (std::getline(ss, item, ','))
                sizes.push_back(static_cast<std::size_t>(std::stoull(item)));
            return run_bench(sizes, bench_repeats, bench_k, bench_rate, bench_t, bench_depth,
                             bench_seed, bench_threads);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
