#include <sc/dataio.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <sc/error.hpp>

namespace sc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',' || line[i] == ';' || line[i] == '\t') {
            cells.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return cells;
}

bool parse_double(std::string_view cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !cell.empty();
}

bool parse_int(std::string_view cell, long long& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !cell.empty();
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open file: " + path);
    return in;
}

} // namespace

PointSet load_points(const std::string& path, std::optional<int> label_column) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    std::vector<double> data;
    std::vector<int> labels;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool first_line = true;
    bool first_data_row = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto cells = split_cells(line);
        const bool may_be_header = first_line;
        first_line = false;
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (!parse_double(cells[j], row[j])) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (may_be_header)
                continue; // header row
            parse_fail(path, line_no, "non-numeric cell");
        }
        if (first_data_row) {
            cols = cells.size();
            if (label_column && (*label_column < 0 || static_cast<std::size_t>(*label_column) >= cols))
                throw InvalidParameter("label column out of range");
            if (label_column && cols < 2)
                throw InvalidInput("no feature columns besides the label column");
            first_data_row = false;
        } else if (cells.size() != cols) {
            parse_fail(path, line_no,
                       "expected " + std::to_string(cols) + " columns, got " +
                           std::to_string(cells.size()));
        }
        if (label_column) {
            const double lv = row[static_cast<std::size_t>(*label_column)];
            if (lv != std::floor(lv))
                parse_fail(path, line_no, "label cell is not an integer");
            labels.push_back(static_cast<int>(lv));
            row.erase(row.begin() + *label_column);
        }
        data.insert(data.end(), row.begin(), row.end());
        ++rows;
    }

    const std::size_t dim = label_column && cols > 0 ? cols - 1 : cols;
    PointSet pts(rows, dim);
    std::copy(data.begin(), data.end(), pts.row(0));
    if (label_column)
        pts.set_labels(std::move(labels));
    return pts;
}

void save_graph(const DirectedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw InvalidInput("cannot write file: " + path);
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
        out << g.id(v) << ':';
        for (int u : g.out(v))
            out << ' ' << g.id(u);
        out << '\n';
    }
    if (!out)
        throw Error("write failed: " + path);
}

DirectedGraph load_graph(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    std::vector<VertexId> ids;
    std::vector<std::vector<VertexId>> out_orig;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = trim(line);
        if (sv.empty())
            continue;
        const std::size_t colon = sv.find(':');
        if (colon == std::string_view::npos)
            parse_fail(path, line_no, "missing ':'");
        long long id;
        if (!parse_int(trim(sv.substr(0, colon)), id) || id < 0)
            parse_fail(path, line_no, "bad vertex id");
        if (!ids.empty() && id <= ids.back())
            parse_fail(path, line_no, "vertex ids must be strictly increasing");
        ids.push_back(static_cast<VertexId>(id));
        std::vector<VertexId> nbrs;
        std::string_view rest = sv.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == '\t'))
                ++pos;
            if (pos >= rest.size())
                break;
            std::size_t end = pos;
            while (end < rest.size() && rest[end] != ' ' && rest[end] != '\t')
                ++end;
            long long nb;
            if (!parse_int(trim(rest.substr(pos, end - pos)), nb) || nb < 0)
                parse_fail(path, line_no, "bad neighbor id");
            nbrs.push_back(static_cast<VertexId>(nb));
            pos = end;
        }
        out_orig.push_back(std::move(nbrs));
    }

    std::vector<std::vector<int>> out(ids.size());
    for (std::size_t v = 0; v < ids.size(); ++v) {
        out[v].reserve(out_orig[v].size());
        for (VertexId nb : out_orig[v]) {
            const auto it = std::lower_bound(ids.begin(), ids.end(), nb);
            if (it == ids.end() || *it != nb)
                throw ParseError(path + ": dangling neighbor id " + std::to_string(nb));
            out[v].push_back(static_cast<int>(it - ids.begin()));
        }
    }
    try {
        return DirectedGraph(std::move(ids), std::move(out));
    } catch (const InvalidParameter& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace {

nlohmann::json dendrogram_to_json(const Dendrogram& d) {
    nlohmann::json node;
    if (d.is_leaf()) {
        node["items"] = d.items;
    } else {
        nlohmann::json children = nlohmann::json::array();
        for (const auto& c : d.children)
            children.push_back(dendrogram_to_json(c));
        node["children"] = std::move(children);
    }
    return node;
}

Dendrogram dendrogram_from_json(const nlohmann::json& node) {
    if (!node.is_object())
        throw ParseError("dendrogram node must be an object");
    const bool has_children = node.contains("children");
    const bool has_items = node.contains("items");
    if (has_children == has_items)
        throw ParseError("dendrogram node needs exactly one of 'children' or 'items'");
    Dendrogram d;
    if (has_items) {
        for (const auto& v : node.at("items")) {
            if (!v.is_number_integer())
                throw ParseError("dendrogram leaf items must be integers");
            d.items.push_back(v.get<VertexId>());
        }
        if (!std::is_sorted(d.items.begin(), d.items.end()) ||
            std::adjacent_find(d.items.begin(), d.items.end()) != d.items.end())
            throw ParseError("dendrogram leaf items must be sorted and unique");
    } else {
        const auto& children = node.at("children");
        if (!children.is_array() || children.empty())
            throw ParseError("dendrogram branch needs a non-empty child array");
        for (const auto& c : children)
            d.children.push_back(dendrogram_from_json(c));
    }
    return d;
}

} // namespace

void save_dendrogram(const Dendrogram& d, const std::string& path, const nlohmann::json& config) {
    nlohmann::json doc;
    doc["config"] = config;
    doc["root"] = dendrogram_to_json(d);
    std::ofstream out(path);
    if (!out)
        throw InvalidInput("cannot write file: " + path);
    out << doc.dump(2) << '\n';
    if (!out)
        throw Error("write failed: " + path);
}

Dendrogram load_dendrogram(const std::string& path, nlohmann::json* config) {
    std::ifstream in = open_or_throw(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("root"))
        throw ParseError(path + ": missing 'root'");
    Dendrogram d = dendrogram_from_json(doc.at("root"));
    try {
        validate_dendrogram(d);
    } catch (const InvalidInput& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (config)
        *config = doc.value("config", nlohmann::json::object());
    return d;
}

void save_labels(const std::vector<int>& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw InvalidInput("cannot write file: " + path);
    out << "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << i << ',' << labels[i] << '\n';
    if (!out)
        throw Error("write failed: " + path);
}

std::vector<int> load_labels(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    std::vector<std::pair<long long, long long>> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = trim(line);
        if (sv.empty())
            continue;
        const auto cells = split_cells(sv);
        if (line_no == 1 && !cells.empty() && cells[0] == "index")
            continue; // header
        if (cells.size() != 2)
            parse_fail(path, line_no, "expected 'index,label'");
        long long idx, lab;
        if (!parse_int(cells[0], idx) || !parse_int(cells[1], lab) || idx < 0)
            parse_fail(path, line_no, "bad index or label");
        rows.emplace_back(idx, lab);
    }
    std::vector<int> labels(rows.size(), 0);
    std::vector<char> seen(rows.size(), 0);
    for (const auto& [idx, lab] : rows) {
        if (static_cast<std::size_t>(idx) >= labels.size())
            throw ParseError(path + ": index " + std::to_string(idx) + " out of range");
        if (seen[static_cast<std::size_t>(idx)])
            throw ParseError(path + ": duplicate index " + std::to_string(idx));
        seen[static_cast<std::size_t>(idx)] = 1;
        labels[static_cast<std::size_t>(idx)] = static_cast<int>(lab);
    }
    return labels;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open file: " + path);
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001B3ULL;
        }
        if (!in)
            break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(hex);
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json doc;
    doc["config"] = config;
    nlohmann::json ins = nlohmann::json::array();
    for (const auto& [p, digest] : inputs)
        ins.push_back({{"path", p}, {"digest", digest}});
    doc["inputs"] = std::move(ins);
    nlohmann::json times = nlohmann::json::object();
    for (const auto& [stage, ms] : timings_ms)
        times[stage] = ms;
    doc["timings_ms"] = std::move(times);
    doc["outputs"] = outputs;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw InvalidInput("cannot write file: " + tmp);
        out << doc.dump(2) << '\n';
        if (!out)
            throw Error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot move manifest into place: " + path);
}

} // namespace sc
