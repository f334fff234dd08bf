#ifndef SC_DATAIO_HPP_
#define SC_DATAIO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <sc/dendrogram.hpp>
#include <sc/graph.hpp>
#include <sc/points.hpp>

namespace sc {

/// CSV loader: one row per point, numeric cells, comma/semicolon/tab
/// separated. A non-numeric first row is treated as a header and skipped.
/// `label_column` extracts that column (0-based) as integer labels and drops
/// it from the features. Malformed content raises ParseError with the line
/// number.
PointSet load_points(const std::string& path, std::optional<int> label_column = {});

/// Plain-text adjacency: one `<id>: <out-neighbor ids>` line per vertex,
/// sorted by id, neighbor order preserved. load(save(g)) == g edge-for-edge.
void save_graph(const DirectedGraph& g, const std::string& path);
DirectedGraph load_graph(const std::string& path);

/// JSON dendrogram: a node is {"children": [...]} or {"items": [sorted ids]};
/// the top level records the config used for provenance. Loading validates
/// the leaf-partition invariant and rejects structural violations.
void save_dendrogram(const Dendrogram& d, const std::string& path,
                     const nlohmann::json& config = nlohmann::json::object());
Dendrogram load_dendrogram(const std::string& path, nlohmann::json* config = nullptr);

/// Labels CSV with header `index,label`, one row per vertex, sorted by index.
void save_labels(const std::vector<int>& labels, const std::string& path);
std::vector<int> load_labels(const std::string& path);

/// FNV-1a digest of a file's bytes, as fixed-width hex.
std::string file_digest(const std::string& path);

/// Provenance sidecar written next to each command output: the full config
/// (parameters and seeds), input digests, stage timings and output paths.
/// Written atomically (temp file + rename) after a successful run.
struct RunManifest {
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::pair<std::string, std::string>> inputs;   // path, digest
    std::vector<std::pair<std::string, double>> timings_ms;
    std::vector<std::string> outputs;

    void add_input(const std::string& path) { inputs.emplace_back(path, file_digest(path)); }
    void add_timing(const std::string& stage, double ms) { timings_ms.emplace_back(stage, ms); }
    void write(const std::string& path) const;
};

} // namespace sc

#endif
