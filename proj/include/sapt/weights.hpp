#pragma once

#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/graph.hpp"

namespace sapt {

enum class ConnectivityClass { LowConnected, HighConnected, Degenerate };

inline const char* name(ConnectivityClass c) {
    switch (c) {
        case ConnectivityClass::LowConnected: return "low-connected";
        case ConnectivityClass::HighConnected: return "high-connected";
        case ConnectivityClass::Degenerate: return "degenerate";
    }
    return "?";
}

// Binary k-nearest-neighbour weight matrix: w_ij = 1 iff the shortest path
// between distinct vertices i and j has length <= k.  Zero diagonal,
// symmetric for undirected input.
struct WeightMatrix {
    int n = 0;
    int k = 0;
    std::vector<std::uint8_t> w;              // dense n*n
    std::vector<std::vector<int>> neighbors;  // sorted per row
    std::vector<int> degree;                  // m_i = row sums

    bool at(int i, int j) const {
        return w[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] != 0;
    }
};

// BFS distances from `src`, capped at depth `k` (unreached = -1).
inline void bfs_within(const Graph& g, int src, int k, std::vector<int>& dist) {
    dist.assign(static_cast<std::size_t>(g.order()), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(src)] = 0;
    q.push(src);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        const int du = dist[static_cast<std::size_t>(u)];
        if (du == k) continue;
        for (int v : g.adjacency[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = du + 1;
                q.push(v);
            }
        }
    }
}

inline WeightMatrix knn_weights(const Graph& g, int k) {
    const int n = g.order();
    if (k < 1) throw input_error("knn_weights: k must be >= 1");
    if (n < 2) throw input_error("knn_weights: graph needs at least 2 vertices");

    // connectivity check from vertex 0 (hop counts uncapped)
    std::vector<int> dist;
    bfs_within(g, 0, n, dist);
    for (int v = 0; v < n; ++v) {
        if (dist[static_cast<std::size_t>(v)] < 0) {
            throw input_error("knn_weights: graph disconnected, no path between '" +
                              g.ids[0] + "' and '" + g.ids[static_cast<std::size_t>(v)] + "'");
        }
    }

    WeightMatrix wm;
    wm.n = n;
    wm.k = k;
    wm.w.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    wm.neighbors.resize(static_cast<std::size_t>(n));
    wm.degree.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        bfs_within(g, i, k, dist);
        auto& nb = wm.neighbors[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            const int d = dist[static_cast<std::size_t>(j)];
            if (j != i && d >= 1 && d <= k) {
                wm.w[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = 1;
                nb.push_back(j);
            }
        }
        wm.degree[static_cast<std::size_t>(i)] = static_cast<int>(nb.size());
    }
    return wm;
}

// Degenerate rows (m_i = 0 or n-1) are excluded from per-vertex testing: the
// analytic bounds divide by both m_i and n-m_i-1.
inline ConnectivityClass classify_vertex(const WeightMatrix& w, int i) {
    if (i < 0 || i >= w.n) throw input_error("classify_vertex: index out of range");
    const int m = w.degree[static_cast<std::size_t>(i)];
    if (m == 0 || m == w.n - 1) return ConnectivityClass::Degenerate;
    if (2 * m > w.n) return ConnectivityClass::HighConnected;
    return ConnectivityClass::LowConnected;
}

inline bool is_testable(const WeightMatrix& w, int i) {
    return classify_vertex(w, i) != ConnectivityClass::Degenerate;
}

// Dense 0/1 CSV dump for debugging (flag-gated in the CLI).
inline std::string to_dense_csv(const WeightMatrix& w) {
    std::string out;
    for (int i = 0; i < w.n; ++i) {
        for (int j = 0; j < w.n; ++j) {
            if (j) out += ',';
            out += w.at(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

} // namespace sapt
