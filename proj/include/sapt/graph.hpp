#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sapt/errors.hpp"

namespace sapt {

// Undirected simple graph.  Vertex order is insertion order and defines the
// index <-> id mapping used everywhere downstream, so reports align with the
// user's input files.
struct Graph {
    std::vector<std::string> ids;
    std::vector<std::pair<int, int>> edges; // normalized (lo, hi), no duplicates
    std::vector<std::vector<int>> adjacency;

    int order() const { return static_cast<int>(ids.size()); }

    int index_of(std::string_view id) const {
        auto it = index_.find(std::string(id));
        return it == index_.end() ? -1 : it->second;
    }

    int add_vertex(std::string_view id) {
        auto it = index_.find(std::string(id));
        if (it != index_.end()) return it->second;
        const int idx = order();
        ids.emplace_back(id);
        adjacency.emplace_back();
        index_.emplace(std::string(id), idx);
        return idx;
    }

    // Returns false if the edge already exists.
    bool add_edge(int a, int b) {
        if (a == b) throw input_error("self-loop rejected");
        const auto e = std::minmax(a, b);
        for (int nb : adjacency[static_cast<std::size_t>(e.first)]) {
            if (nb == e.second) return false;
        }
        edges.emplace_back(e.first, e.second);
        adjacency[static_cast<std::size_t>(e.first)].push_back(e.second);
        adjacency[static_cast<std::size_t>(e.second)].push_back(e.first);
        return true;
    }

    void sort_adjacency() {
        for (auto& nb : adjacency) std::sort(nb.begin(), nb.end());
    }

private:
    std::unordered_map<std::string, int> index_;
};

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    // tolerate a trailing newline producing an empty tail
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t c = line.find(',', start);
        if (c == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, c - start));
        start = c + 1;
    }
}

} // namespace detail

// Edge-list CSV: header `src,dst`, one edge per row.  Duplicate rows collapse;
// vertices keep first-appearance order.  Self-loops and malformed rows are
// rejected with their row number.
inline Graph load_edge_list(std::string_view csv) {
    const auto lines = detail::split_lines(csv);
    if (lines.empty() || lines[0] != "src,dst") {
        throw input_error("edge list: expected header 'src,dst'");
    }
    Graph g;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = detail::split_fields(lines[r]);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            throw input_error("edge list: malformed row " + std::to_string(r + 1));
        }
        if (fields[0] == fields[1]) {
            throw input_error("edge list: self-loop at row " + std::to_string(r + 1));
        }
        const int a = g.add_vertex(fields[0]);
        const int b = g.add_vertex(fields[1]);
        g.add_edge(a, b);
    }
    g.sort_adjacency();
    return g;
}

inline std::string to_edge_csv(const Graph& g) {
    std::string out = "src,dst\n";
    for (const auto& [a, b] : g.edges) {
        out += g.ids[static_cast<std::size_t>(a)];
        out += ',';
        out += g.ids[static_cast<std::size_t>(b)];
        out += '\n';
    }
    return out;
}

} // namespace sapt
