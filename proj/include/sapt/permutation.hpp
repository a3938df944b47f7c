#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/rng.hpp"
#include "sapt/statistics.hpp"

namespace sapt {

enum class Tail { Upper, Lower, TwoSided };

inline const char* name(Tail t) {
    switch (t) {
        case Tail::Upper: return "upper";
        case Tail::Lower: return "lower";
        case Tail::TwoSided: return "two-sided";
    }
    return "?";
}

// One Monte Carlo randomization plan.  Every replicate draws from its own
// stream keyed by (seed, purpose, vertex-or-0, replicate), so results are
// independent of evaluation order and thread count.
struct PermutationPlan {
    enum class Mode { RestrictedLocal, SingleGlobal, ProductGroupGlobal };
    Mode mode = Mode::RestrictedLocal;
    int fixed_vertex = -1;
    long long permutations = 0;
    std::uint64_t seed = 0;
    Tail tail = Tail::TwoSided;
};

// Uniform draw over the (n-1)! permutations fixing `fixed`: Fisher-Yates over
// the n-1 complement positions, addressed through pos(t) = t-th non-fixed slot.
inline void draw_restricted_permutation(RngStream& rng, int n, int fixed,
                                        std::vector<int>& perm) {
    perm.resize(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    const auto pos = [fixed](int t) { return t < fixed ? t : t + 1; };
    for (int t = n - 2; t > 0; --t) {
        const int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(t) + 1));
        std::swap(perm[static_cast<std::size_t>(pos(t))], perm[static_cast<std::size_t>(pos(u))]);
    }
}

inline void draw_unrestricted_permutation(RngStream& rng, int n, std::vector<int>& perm) {
    perm.resize(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int hi = n - 1; hi > 0; --hi) {
        const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(hi) + 1));
        std::swap(perm[static_cast<std::size_t>(hi)], perm[static_cast<std::size_t>(j)]);
    }
}

namespace detail {

inline bool tail_exceeds(Tail tail, double value, double observed, double center) {
    switch (tail) {
        case Tail::Upper: return value >= observed;
        case Tail::Lower: return value <= observed;
        case Tail::TwoSided: return std::abs(value - center) >= std::abs(observed - center);
    }
    return false;
}

} // namespace detail

// Monte Carlo permutation p-value for the local gamma index at vertex i with
// the add-one convention p = (1 + #exceedances)/(B + 1).  Two-sided
// exceedance compares |gamma(pi) - m lbar| against the observed deviation.
inline double mc_local_pvalue(const WeightMatrix& w, const ObservationVector& y,
                              ProximityKind kind, int i, const PermutationPlan& plan) {
    if (plan.mode != PermutationPlan::Mode::RestrictedLocal) {
        throw input_error("mc_local_pvalue: plan mode must be RestrictedLocal");
    }
    if (plan.permutations < 1) throw input_error("mc_local_pvalue: needs B >= 1");
    const int n = w.n;
    std::vector<double> row(static_cast<std::size_t>(n));
    proximity_row(y, kind, i, row);
    const LocalRowSummary s = local_gamma_from_row(w, row, i);
    const double center = s.degree * s.lambda_bar;
    const auto& nbrs = w.neighbors[static_cast<std::size_t>(i)];
    std::vector<int> perm;
    long long exceed = 0;
    for (long long k = 0; k < plan.permutations; ++k) {
        RngStream rng(plan.seed, "mclocal", static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(k));
        draw_restricted_permutation(rng, n, i, perm);
        double g = 0.0;
        for (int j : nbrs) g += row[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
        if (detail::tail_exceeds(plan.tail, g, s.gamma, center)) ++exceed;
    }
    return static_cast<double>(1 + exceed) / static_cast<double>(plan.permutations + 1);
}

// Same Monte Carlo test on a named statistic, recomputed per permutation.
// With a shared plan (same seed), two statistics that order permutations
// identically yield bitwise-equal p-values.
inline double mc_local_statistic_pvalue(const WeightMatrix& w, const ObservationVector& y,
                                        Statistic stat, int i, const PermutationPlan& plan) {
    if (plan.mode != PermutationPlan::Mode::RestrictedLocal) {
        throw input_error("mc_local_statistic_pvalue: plan mode must be RestrictedLocal");
    }
    if (plan.permutations < 1) throw input_error("mc_local_statistic_pvalue: needs B >= 1");
    const int n = w.n;
    const double observed = local_statistic(w, y, stat, i);
    const MomentSummary ms = lisa_moments(w, y, stat, i);
    const double center = ms.mean;
    const auto& nbrs = w.neighbors[static_cast<std::size_t>(i)];
    const double yi = y.values[static_cast<std::size_t>(i)];
    const double total = detail::sum_values(y);
    std::vector<int> perm;
    long long exceed = 0;
    for (long long k = 0; k < plan.permutations; ++k) {
        RngStream rng(plan.seed, "mclocal", static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(k));
        draw_restricted_permutation(rng, n, i, perm);
        double nsum = 0.0;
        for (int j : nbrs) nsum += y.values[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
        double value = 0.0;
        switch (stat) {
            case Statistic::Moran: {
                const double m = static_cast<double>(nbrs.size());
                value = (yi - y.mean) / y.variance * (nsum - m * y.mean);
                break;
            }
            case Statistic::Geary: {
                double sq = 0.0;
                for (int j : nbrs) {
                    const double d = yi - y.values[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
                    sq += d * d;
                }
                value = sq / y.variance;
                break;
            }
            case Statistic::GetisG: value = nsum / (total - yi); break;
            case Statistic::GetisGStar: value = nsum / total; break;
        }
        if (detail::tail_exceeds(plan.tail, value, observed, center)) ++exceed;
    }
    return static_cast<double>(1 + exceed) / static_cast<double>(plan.permutations + 1);
}

// Exact reference distribution: enumerates all (n-1)! restricted permutations.
// The identity is part of the enumeration, so the returned proportion matches
// the Monte Carlo add-one convention (minimum 1/(n-1)!).
inline double exhaustive_local_pvalue(const WeightMatrix& w, const ObservationVector& y,
                                      ProximityKind kind, int i, Tail tail) {
    const int n = w.n;
    if (n > 9) throw infeasible_error("exhaustive_local_pvalue: n > 9 not enumerable");
    std::vector<double> row(static_cast<std::size_t>(n));
    proximity_row(y, kind, i, row);
    const LocalRowSummary s = local_gamma_from_row(w, row, i);
    const double center = s.degree * s.lambda_bar;

    std::vector<int> others;
    for (int j = 0; j < n; ++j) {
        if (j != i) others.push_back(j);
    }
    // neighbor j occupies slot pos[j] within `others`
    std::vector<int> nbr_slots;
    for (int j : w.neighbors[static_cast<std::size_t>(i)]) {
        nbr_slots.push_back(static_cast<int>(std::lower_bound(others.begin(), others.end(), j) - others.begin()));
    }
    std::vector<int> image = others; // image[slot] = pi(others[slot])
    long long exceed = 0, count = 0;
    do {
        double g = 0.0;
        for (int slot : nbr_slots) g += row[static_cast<std::size_t>(image[static_cast<std::size_t>(slot)])];
        if (detail::tail_exceeds(tail, g, s.gamma, center)) ++exceed;
        ++count;
    } while (std::next_permutation(image.begin(), image.end()));
    return static_cast<double>(exceed) / static_cast<double>(count);
}

namespace detail {

// Centered global gamma for a value assignment: returns gamma - center where
// center = sum_i m_i lbar_{-i}, both restricted to non-degenerate vertices.
// O(sum m_i + n) using sufficient statistics of the assignment.
inline double centered_global_gamma(const WeightMatrix& w, std::span<const double> v,
                                    ProximityKind kind) {
    const int n = w.n;
    double s1 = 0.0, s2 = 0.0;
    for (double x : v) {
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / static_cast<double>(n);
    double acc = 0.0;
    if (kind == ProximityKind::MoranCross) {
        for (int i = 0; i < n; ++i) {
            const int m = w.degree[static_cast<std::size_t>(i)];
            if (m == 0 || m == n - 1) continue;
            const double di = v[static_cast<std::size_t>(i)] - mean;
            double nsum = 0.0;
            for (int j : w.neighbors[static_cast<std::size_t>(i)]) {
                nsum += v[static_cast<std::size_t>(j)] - mean;
            }
            const double lbar = -di * di / static_cast<double>(n - 1);
            acc += di * nsum - m * lbar;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const int m = w.degree[static_cast<std::size_t>(i)];
            if (m == 0 || m == n - 1) continue;
            const double yi = v[static_cast<std::size_t>(i)];
            double g = 0.0;
            for (int j : w.neighbors[static_cast<std::size_t>(i)]) {
                const double d = yi - v[static_cast<std::size_t>(j)];
                g += d * d;
            }
            // sum_{j != i} (yi - yj)^2 = n yi^2 - 2 yi s1 + s2 (the j = i term is 0)
            const double rowsum = static_cast<double>(n) * yi * yi - 2.0 * yi * s1 + s2;
            acc += g - m * rowsum / static_cast<double>(n - 1);
        }
    }
    return acc;
}

} // namespace detail

// Monte Carlo global p-value.  SingleGlobal permutes the observation vector
// wholesale and recomputes the centered statistic; ProductGroupGlobal draws
// one restricted permutation per coordinate, matching the randomization under
// which the analytic global bound is derived.
inline double mc_global_pvalue(const WeightMatrix& w, const ObservationVector& y,
                               ProximityKind kind, const PermutationPlan& plan) {
    if (plan.mode == PermutationPlan::Mode::RestrictedLocal) {
        throw input_error("mc_global_pvalue: plan mode must be a global mode");
    }
    if (plan.permutations < 1) throw input_error("mc_global_pvalue: needs B >= 1");
    const int n = w.n;
    const double obs = detail::centered_global_gamma(w, y.values, kind);
    long long exceed = 0;
    if (plan.mode == PermutationPlan::Mode::SingleGlobal) {
        std::vector<int> perm;
        std::vector<double> shuffled(static_cast<std::size_t>(n));
        for (long long k = 0; k < plan.permutations; ++k) {
            RngStream rng(plan.seed, "mcglobal-single", 0, static_cast<std::uint64_t>(k));
            draw_unrestricted_permutation(rng, n, perm);
            for (int j = 0; j < n; ++j) {
                shuffled[static_cast<std::size_t>(j)] =
                    y.values[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
            }
            const double g = detail::centered_global_gamma(w, shuffled, kind);
            if (detail::tail_exceeds(plan.tail, g, obs, 0.0)) ++exceed;
        }
    } else {
        // product-group draw: row i samples its own restricted permutation
        std::vector<double> row(static_cast<std::size_t>(n));
        std::vector<int> perm;
        for (long long k = 0; k < plan.permutations; ++k) {
            double g = 0.0;
            for (int i = 0; i < n; ++i) {
                const int m = w.degree[static_cast<std::size_t>(i)];
                if (m == 0 || m == n - 1) continue; // zero centered contribution
                proximity_row(y, kind, i, row);
                const LocalRowSummary s = local_gamma_from_row(w, row, i);
                RngStream rng(plan.seed, "mcglobal-product", static_cast<std::uint64_t>(i),
                              static_cast<std::uint64_t>(k));
                draw_restricted_permutation(rng, n, i, perm);
                double gi = 0.0;
                for (int j : w.neighbors[static_cast<std::size_t>(i)]) {
                    gi += row[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
                }
                g += gi - m * s.lambda_bar;
            }
            if (detail::tail_exceeds(plan.tail, g, obs, 0.0)) ++exceed;
        }
    }
    return static_cast<double>(1 + exceed) / static_cast<double>(plan.permutations + 1);
}

} // namespace sapt
