#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "sapt/observations.hpp"
#include "sapt/weights.hpp"

namespace sapt {

// Proximity between a pair of observations: cross-product of deviations
// (Moran family) or squared difference (Geary).
enum class ProximityKind { MoranCross, GearySquare };

inline const char* name(ProximityKind k) {
    return k == ProximityKind::MoranCross ? "moran-cross" : "geary-square";
}

inline double proximity_value(const ObservationVector& y, ProximityKind kind, int i, int j) {
    const double yi = y.values[static_cast<std::size_t>(i)];
    const double yj = y.values[static_cast<std::size_t>(j)];
    if (kind == ProximityKind::MoranCross) return (yi - y.mean) * (yj - y.mean);
    const double d = yi - yj;
    return d * d;
}

// Fills out[j] = lambda(y_i, y_j) for j = 0..n-1 (the diagonal entry is
// present but never used against a zero-diagonal weight matrix).
inline void proximity_row(const ObservationVector& y, ProximityKind kind, int i,
                          std::span<double> out) {
    const int n = y.size();
    const double yi = y.values[static_cast<std::size_t>(i)];
    if (kind == ProximityKind::MoranCross) {
        const double di = yi - y.mean;
        for (int j = 0; j < n; ++j) {
            out[static_cast<std::size_t>(j)] = di * (y.values[static_cast<std::size_t>(j)] - y.mean);
        }
    } else {
        for (int j = 0; j < n; ++j) {
            const double d = yi - y.values[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(j)] = d * d;
        }
    }
}

// Row-level summary for the local gamma index at vertex i:
//   gamma   = sum_j w_ij lambda_ij
//   lbar    = (n-1)^-1 sum_{j != i} lambda_ij
//   s2      = (n-1)^-1 sum_{j != i} (lambda_ij - lbar)^2
struct LocalRowSummary {
    int vertex = -1;
    int degree = 0;
    double lambda_bar = 0.0;
    double s2 = 0.0;
    double gamma = 0.0;
};

// Computes the row summary from a caller-provided lambda-row buffer
// (length n, already filled for vertex i).
inline LocalRowSummary local_gamma_from_row(const WeightMatrix& w, std::span<const double> row, int i) {
    const int n = w.n;
    LocalRowSummary s;
    s.vertex = i;
    s.degree = w.degree[static_cast<std::size_t>(i)];
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j != i) sum += row[static_cast<std::size_t>(j)];
    }
    s.lambda_bar = sum / static_cast<double>(n - 1);
    double ss = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = row[static_cast<std::size_t>(j)] - s.lambda_bar;
        ss += d * d;
    }
    s.s2 = ss / static_cast<double>(n - 1);
    double g = 0.0;
    for (int j : w.neighbors[static_cast<std::size_t>(i)]) g += row[static_cast<std::size_t>(j)];
    s.gamma = g;
    return s;
}

// The row itself is well defined for every vertex, degenerate or not; the
// inference layer decides which vertices are testable.
inline LocalRowSummary local_gamma(const WeightMatrix& w, const ObservationVector& y,
                                   ProximityKind kind, int i) {
    std::vector<double> row(static_cast<std::size_t>(w.n));
    proximity_row(y, kind, i, row);
    return local_gamma_from_row(w, row, i);
}

} // namespace sapt
