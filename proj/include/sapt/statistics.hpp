#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/proximity.hpp"

namespace sapt {

enum class Statistic { Moran, Geary, GetisG, GetisGStar };

inline const char* name(Statistic s) {
    switch (s) {
        case Statistic::Moran: return "moran";
        case Statistic::Geary: return "geary";
        case Statistic::GetisG: return "getis";
        case Statistic::GetisGStar: return "getis-star";
    }
    return "?";
}

// All four statistics route through two proximity kinds.  Under restricted
// randomization Moran, G and G* order permutations identically (only
// sum_j w_ij y_pi(j) moves), so they share the Moran cross-product gamma test.
inline ProximityKind proximity_for(Statistic s) {
    return s == Statistic::Geary ? ProximityKind::GearySquare : ProximityKind::MoranCross;
}

namespace detail {

inline double sum_values(const ObservationVector& y) {
    double s = 0.0;
    for (double v : y.values) s += v;
    return s;
}

inline double neighbor_sum(const WeightMatrix& w, const ObservationVector& y, int i) {
    double s = 0.0;
    for (int j : w.neighbors[static_cast<std::size_t>(i)]) s += y.values[static_cast<std::size_t>(j)];
    return s;
}

} // namespace detail

// Local statistic value at vertex i.  Throws degenerate_error on undefined
// denominators (centralized division-by-zero policy).
inline double local_statistic(const WeightMatrix& w, const ObservationVector& y,
                              Statistic stat, int i) {
    const int n = w.n;
    const double yi = y.values[static_cast<std::size_t>(i)];
    switch (stat) {
        case Statistic::Moran: {
            if (!(y.variance > 0.0)) throw degenerate_error("moran: zero sample variance");
            double s = 0.0;
            for (int j : w.neighbors[static_cast<std::size_t>(i)]) {
                s += y.values[static_cast<std::size_t>(j)] - y.mean;
            }
            return (yi - y.mean) / y.variance * s;
        }
        case Statistic::Geary: {
            if (!(y.variance > 0.0)) throw degenerate_error("geary: zero sample variance");
            double s = 0.0;
            for (int j : w.neighbors[static_cast<std::size_t>(i)]) {
                const double d = yi - y.values[static_cast<std::size_t>(j)];
                s += d * d;
            }
            return s / y.variance;
        }
        case Statistic::GetisG: {
            const double denom = detail::sum_values(y) - yi;
            if (denom == 0.0) throw degenerate_error("getis: zero denominator sum_{j!=i} y_j");
            return detail::neighbor_sum(w, y, i) / denom;
        }
        case Statistic::GetisGStar: {
            const double denom = detail::sum_values(y);
            if (denom == 0.0) throw degenerate_error("getis-star: zero denominator sum_j y_j");
            return detail::neighbor_sum(w, y, i) / denom;
        }
    }
    throw input_error("local_statistic: unknown statistic");
    (void)n;
}

// Total-randomization mean and variance of the local statistic, implementing
// the printed formulas verbatim.  w_(1) = sum_j w_ij and w_(2) = sum_j w_ij^2
// coincide (= m_i) for binary weights; b is the raw-moment kurtosis factor.
// A nonpositive computed variance is flagged, not silently used.
struct MomentSummary {
    Statistic stat = Statistic::Moran;
    double mean = 0.0;
    double variance = 0.0;
    bool variance_positive = false;
    double mean_loo = 0.0; // leave-one-out ybar_{-i} (Getis G only)
    double var_loo = 0.0;  // leave-one-out sigma2_{-i} (Getis G only)
};

inline MomentSummary lisa_moments(const WeightMatrix& w, const ObservationVector& y,
                                  Statistic stat, int i) {
    const double n = static_cast<double>(w.n);
    if (w.n < 3) throw input_error("lisa_moments: requires n >= 3");
    const double w1 = static_cast<double>(w.degree[static_cast<std::size_t>(i)]);
    const double w2 = w1; // binary weights
    const double b = y.kurtosis_factor;
    MomentSummary ms;
    ms.stat = stat;
    switch (stat) {
        case Statistic::Moran:
            ms.mean = -w1 / (n - 1.0);
            ms.variance = w2 * (n - b) / (n - 1.0) +
                          (w1 * w1 - w2) * (2.0 * b - n) / ((n - 1.0) * (n - 2.0)) -
                          w1 * w1 / ((n - 1.0) * (n - 1.0));
            break;
        case Statistic::Geary:
            ms.mean = 2.0 * n * w1 / (n - 1.0);
            ms.variance = (n / (n - 1.0)) * (w1 * w1 - w2) * (3.0 + b) -
                          (2.0 * n * w1 / (n - 1.0)) * (2.0 * n * w1 / (n - 1.0));
            break;
        case Statistic::GetisG: {
            const double yi = y.values[static_cast<std::size_t>(i)];
            const double mean_loo = (detail::sum_values(y) - yi) / (n - 1.0);
            double ss = 0.0;
            for (int j = 0; j < w.n; ++j) {
                if (j == i) continue;
                const double d = y.values[static_cast<std::size_t>(j)] - mean_loo;
                ss += d * d;
            }
            const double var_loo = ss / (n - 1.0);
            ms.mean_loo = mean_loo;
            ms.var_loo = var_loo;
            ms.mean = w1 / (n - 1.0);
            if (mean_loo == 0.0) throw degenerate_error("lisa_moments: ybar_{-i} = 0 for Getis G");
            ms.variance = w1 * (n - 1.0 - w1) * var_loo /
                          ((n - 1.0) * (n - 1.0) * (n - 2.0) * mean_loo * mean_loo);
            break;
        }
        case Statistic::GetisGStar: {
            ms.mean = w1 / n;
            if (y.mean == 0.0) throw degenerate_error("lisa_moments: ybar = 0 for Getis G*");
            ms.variance = w1 * (n - w1) * y.variance /
                          (n * n * (n - 1.0) * y.mean * y.mean);
            break;
        }
    }
    ms.variance_positive = ms.variance > 0.0;
    return ms;
}

// Reason a vertex is excluded from testing with the given statistic, if any.
inline std::optional<std::string> exclusion_reason(const WeightMatrix& w,
                                                   const ObservationVector& y,
                                                   Statistic stat, int i) {
    if (classify_vertex(w, i) == ConnectivityClass::Degenerate) {
        return std::string("degenerate-connectivity");
    }
    switch (stat) {
        case Statistic::Moran:
        case Statistic::Geary:
            if (!(y.variance > 0.0)) return std::string("zero-sample-variance");
            break;
        case Statistic::GetisG:
            if (detail::sum_values(y) - y.values[static_cast<std::size_t>(i)] == 0.0) {
                return std::string("zero-denominator");
            }
            break;
        case Statistic::GetisGStar:
            if (detail::sum_values(y) == 0.0) return std::string("zero-denominator");
            break;
    }
    return std::nullopt;
}

struct GlobalStatistic {
    double value = 0.0;
    std::vector<int> excluded; // vertex indices, ascending
};

// Global statistic = sum of local values over non-excluded vertices; the
// excluded set is reported alongside.
inline GlobalStatistic global_statistic(const WeightMatrix& w, const ObservationVector& y,
                                        Statistic stat) {
    GlobalStatistic g;
    for (int i = 0; i < w.n; ++i) {
        if (exclusion_reason(w, y, stat, i)) {
            g.excluded.push_back(i);
            continue;
        }
        g.value += local_statistic(w, y, stat, i);
    }
    return g;
}

} // namespace sapt
