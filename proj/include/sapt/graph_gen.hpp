#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/graph.hpp"
#include "sapt/rng.hpp"

namespace sapt {

inline Graph ring_graph(int n) {
    if (n < 3) throw input_error("ring_graph: n must be >= 3");
    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    g.sort_adjacency();
    return g;
}

inline Graph grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2) throw input_error("grid_graph: bad dimensions");
    Graph g;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) g.add_vertex("v" + std::to_string(r * cols + c));
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int i = r * cols + c;
            if (c + 1 < cols) g.add_edge(i, i + 1);
            if (r + 1 < rows) g.add_edge(i, i + cols);
        }
    }
    g.sort_adjacency();
    return g;
}

namespace detail {

struct Tri {
    int a, b, c;
    bool alive = true;
};

// Strictly-inside-circumcircle test, long double determinant form.
inline bool in_circumcircle(const std::array<double, 2>& p, const std::array<double, 2>& A,
                            const std::array<double, 2>& B, const std::array<double, 2>& C) {
    const long double ax = A[0] - p[0], ay = A[1] - p[1];
    const long double bx = B[0] - p[0], by = B[1] - p[1];
    const long double cx = C[0] - p[0], cy = C[1] - p[1];
    const long double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                            (bx * bx + by * by) * (ax * cy - cx * ay) +
                            (cx * cx + cy * cy) * (ax * by - bx * ay);
    // sign convention depends on orientation of (A,B,C)
    const long double orient = (B[0] - A[0]) * (long double)(C[1] - A[1]) -
                               (C[0] - A[0]) * (long double)(B[1] - A[1]);
    return orient > 0 ? det > 0 : det < 0;
}

} // namespace detail

// Delaunay-style triangulation (Bowyer-Watson) over n seeded uniform points in
// the unit square; the edge set of the triangulation is the graph.  Planar,
// connected, low-degree: the regime of the analytic bounds' connectivity
// condition.
inline Graph planar_triangulation(int n, std::uint64_t seed) {
    if (n < 3) throw input_error("planar_triangulation: n must be >= 3");
    RngStream rng(seed, "planar-points");
    std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
        p[0] = rng.next_unit();
        p[1] = rng.next_unit();
    }
    // super-triangle enclosing the unit square by a wide margin
    pts.push_back({-100.0, -100.0});
    pts.push_back({101.0, -100.0});
    pts.push_back({0.5, 150.0});
    const int s0 = n, s1 = n + 1, s2 = n + 2;

    std::vector<detail::Tri> tris;
    tris.push_back({s0, s1, s2});
    std::vector<std::array<int, 2>> boundary;
    for (int ip = 0; ip < n; ++ip) {
        boundary.clear();
        // collect edges of the cavity: edges of bad triangles that are not
        // shared by two bad triangles
        std::vector<int> bad;
        for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
            auto& tr = tris[static_cast<std::size_t>(t)];
            if (!tr.alive) continue;
            if (detail::in_circumcircle(pts[static_cast<std::size_t>(ip)],
                                        pts[static_cast<std::size_t>(tr.a)],
                                        pts[static_cast<std::size_t>(tr.b)],
                                        pts[static_cast<std::size_t>(tr.c)])) {
                bad.push_back(t);
            }
        }
        auto push_edge = [&](int u, int v) {
            // cancel an opposite copy if present (shared edge), else record
            for (std::size_t e = 0; e < boundary.size(); ++e) {
                const auto& be = boundary[e];
                if ((be[0] == u && be[1] == v) || (be[0] == v && be[1] == u)) {
                    boundary.erase(boundary.begin() + static_cast<std::ptrdiff_t>(e));
                    return;
                }
            }
            boundary.push_back({u, v});
        };
        for (int t : bad) {
            auto& tr = tris[static_cast<std::size_t>(t)];
            tr.alive = false;
            push_edge(tr.a, tr.b);
            push_edge(tr.b, tr.c);
            push_edge(tr.c, tr.a);
        }
        for (const auto& e : boundary) tris.push_back({e[0], e[1], ip});
    }

    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    for (const auto& tr : tris) {
        if (!tr.alive) continue;
        if (tr.a >= n || tr.b >= n || tr.c >= n) continue; // touches super-triangle
        g.add_edge(tr.a, tr.b);
        g.add_edge(tr.b, tr.c);
        g.add_edge(tr.c, tr.a);
    }
    g.sort_adjacency();
    return g;
}

} // namespace sapt
