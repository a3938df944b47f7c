#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/permutation.hpp"
#include "sapt/proximity.hpp"
#include "sapt/specfun.hpp"
#include "sapt/statistics.hpp"
#include "sapt/weights.hpp"

namespace sapt {

// Threshold placed on the tail-probability side.  Centered matches the
// permutation-test semantics |gamma_obs - m_i lbar_{-i}|; Literal reproduces
// the verbatim reading with the raw observed gamma.
enum class ThresholdMode { Centered, Literal };

// Analytic permutation-test bounds for one vertex.  The exponent and beta
// parameters follow the proof regime: the smaller of (m_i, n-m_i-1) plays the
// group-size role, which reduces to the printed low/high-connectivity pair
// everywhere except the tie at m_i = n/2 for even n.
struct LocalInference {
    int vertex = -1;
    int degree = 0;
    ConnectivityClass connectivity = ConnectivityClass::LowConnected;
    double gamma = 0.0;
    double lambda_bar = 0.0;
    double s2 = 0.0;
    double centering = 0.0;  // m_i * lbar_{-i}
    double threshold = 0.0;  // t
    double beta_shape = 0.0; // a = (n-1) max / min^2
    double log_c0 = 0.0;
    double p_subgauss = 1.0;
    double p_beta = 1.0;
    double log_p_subgauss = 0.0;
    double log_p_beta = 0.0;
    bool zero_scale = false;
};

inline LocalInference local_analytic(const LocalRowSummary& row, int n, ThresholdMode mode) {
    const int m = row.degree;
    if (m == 0 || m == n - 1) {
        throw degenerate_error("local_analytic: vertex excluded (degenerate connectivity)");
    }
    LocalInference r;
    r.vertex = row.vertex;
    r.degree = m;
    r.connectivity = (2 * m > n) ? ConnectivityClass::HighConnected
                                 : ConnectivityClass::LowConnected;
    r.gamma = row.gamma;
    r.lambda_bar = row.lambda_bar;
    r.s2 = row.s2;
    r.centering = static_cast<double>(m) * row.lambda_bar;
    r.threshold = mode == ThresholdMode::Centered ? std::abs(row.gamma - r.centering)
                                                  : std::abs(row.gamma);
    const double lo = static_cast<double>(std::min(m, n - 1 - m));
    const double hi = static_cast<double>(std::max(m, n - 1 - m));
    r.beta_shape = static_cast<double>(n - 1) * hi / (lo * lo);
    r.log_c0 = 0.5 * std::log(r.beta_shape) + ln_gamma(r.beta_shape) -
               ln_gamma(r.beta_shape + 0.5);
    if (!(row.s2 > 0.0)) {
        r.zero_scale = true;
        return r; // p = 1 with the flag
    }
    const double v = lo * r.threshold * r.threshold / (2.0 * row.s2 * hi * hi);
    r.log_p_subgauss = -v;
    r.p_subgauss = std::exp(-v); // <= 1 by construction
    r.log_p_beta = std::min(0.0, r.log_c0 + log_reg_inc_beta_logx(-v, r.beta_shape, 0.5));
    r.p_beta = std::exp(r.log_p_beta);
    return r;
}

inline double local_pvalue_subgauss(const LocalRowSummary& row, int n, ThresholdMode mode) {
    return local_analytic(row, n, mode).p_subgauss;
}

inline double local_pvalue_beta(const LocalRowSummary& row, int n, ThresholdMode mode) {
    return local_analytic(row, n, mode).p_beta;
}

// Normal-approximation p-value from the total-randomization moments.
inline double local_pvalue_zscore(double value, const MomentSummary& moments, Tail tail) {
    if (!moments.variance_positive) {
        throw degenerate_error("local_pvalue_zscore: nonpositive variance");
    }
    const double z = (value - moments.mean) / std::sqrt(moments.variance);
    switch (tail) {
        case Tail::Upper: return normal_upper_tail(z);
        case Tail::Lower: return normal_upper_tail(-z);
        case Tail::TwoSided: return std::min(1.0, 2.0 * normal_upper_tail(std::abs(z)));
    }
    throw input_error("local_pvalue_zscore: unknown tail");
}

// ---------------------------------------------------------------------------
// Global gamma test.
// ---------------------------------------------------------------------------
struct GlobalGammaSummary {
    ProximityKind kind = ProximityKind::MoranCross;
    int n = 0;
    double gamma = 0.0;      // sum of gamma_i over non-degenerate vertices
    double centering = 0.0;  // sum of m_i lbar_{-i} over the same set
    double upsilon2 = 0.0;   // sum eta_i s_i^2, eta_i = m_i (n-m_i-1)/(n-1)
    double varpi2 = 0.0;     // sum (n-m_i-1)^2 s_i^2 / m_i (diagnostic only)
    std::vector<double> eta;  // aligned to vertex index; 0 for degenerate rows
    std::vector<int> excluded;
    bool zero_scale = false;
    bool small_n_warning = false; // dropped O(2^-2n) remainder is not negligible
};

inline GlobalGammaSummary global_gamma_summary(const WeightMatrix& w,
                                               const ObservationVector& y,
                                               ProximityKind kind) {
    const int n = w.n;
    GlobalGammaSummary s;
    s.kind = kind;
    s.n = n;
    s.eta.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int m = w.degree[static_cast<std::size_t>(i)];
        if (m == 0 || m == n - 1) {
            s.excluded.push_back(i);
            continue;
        }
        proximity_row(y, kind, i, row);
        const LocalRowSummary ls = local_gamma_from_row(w, row, i);
        const double eta = static_cast<double>(m) * static_cast<double>(n - 1 - m) /
                           static_cast<double>(n - 1);
        s.eta[static_cast<std::size_t>(i)] = eta;
        s.gamma += ls.gamma;
        s.centering += static_cast<double>(m) * ls.lambda_bar;
        s.upsilon2 += eta * ls.s2;
        s.varpi2 += static_cast<double>(n - 1 - m) * static_cast<double>(n - 1 - m) * ls.s2 /
                    static_cast<double>(m);
    }
    s.zero_scale = !(s.upsilon2 > 0.0);
    s.small_n_warning = n < 10;
    return s;
}

// Q(t^2 / (4 upsilon^2); 1/2) with t the (centered) observed global gamma.
// The O(2^-2n) remainder of the underlying expansion is dropped.
inline double global_pvalue(const GlobalGammaSummary& s, ThresholdMode mode) {
    if (s.zero_scale) return 1.0;
    const double t = mode == ThresholdMode::Centered ? std::abs(s.gamma - s.centering)
                                                     : std::abs(s.gamma);
    return reg_upper_inc_gamma(t * t / (4.0 * s.upsilon2), 0.5);
}

inline double log_global_pvalue(const GlobalGammaSummary& s, ThresholdMode mode) {
    if (s.zero_scale) return 0.0;
    const double t = mode == ThresholdMode::Centered ? std::abs(s.gamma - s.centering)
                                                     : std::abs(s.gamma);
    return log_reg_upper_inc_gamma(t * t / (4.0 * s.upsilon2), 0.5);
}

// ---------------------------------------------------------------------------
// Empirical beta transform (GISA calibration).
// ---------------------------------------------------------------------------
struct EmpiricalBetaResult {
    double p_adjusted = 1.0;
    std::optional<BetaParams> fit;
    std::vector<double> p_samples;
    bool degenerate = false;
    int replicates = 0;
};

// Generic form: draws r p-values from `sampler(k)` and maps p0 through the
// fitted beta CDF.  On a degenerate fit p0 passes through unchanged.
template <typename PSampler>
EmpiricalBetaResult empirical_beta_transform(double p0, PSampler&& sampler, int r) {
    if (r < 2) throw input_error("empirical_beta_transform: r must be >= 2");
    EmpiricalBetaResult out;
    out.replicates = r;
    out.p_samples.reserve(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) out.p_samples.push_back(sampler(k));
    out.fit = beta_mom_fit(out.p_samples);
    if (!out.fit) {
        out.degenerate = true;
        out.p_adjusted = p0;
        return out;
    }
    out.p_adjusted = reg_inc_beta(p0, out.fit->alpha, out.fit->beta);
    return out;
}

// Concrete GISA form: product-group permutation draws (coordinate i fixes i),
// p_k evaluated with the observed upsilon^2 and centering, which are invariant
// under within-row reindexing.  Stream: (seed, "alg1", replicate).
inline EmpiricalBetaResult empirical_beta_global(const WeightMatrix& w,
                                                 const ObservationVector& y,
                                                 const GlobalGammaSummary& s,
                                                 int r, std::uint64_t seed,
                                                 ThresholdMode mode) {
    const double p0 = global_pvalue(s, mode);
    if (s.zero_scale) {
        EmpiricalBetaResult out;
        out.degenerate = true;
        out.p_adjusted = p0;
        out.replicates = r;
        return out;
    }
    const int n = w.n;
    auto sampler = [&](int k) {
        std::vector<double> row(static_cast<std::size_t>(n));
        std::vector<int> perm;
        double centered = 0.0;
        for (int i = 0; i < n; ++i) {
            const int m = w.degree[static_cast<std::size_t>(i)];
            if (m == 0 || m == n - 1) continue;
            proximity_row(y, s.kind, i, row);
            const LocalRowSummary ls = local_gamma_from_row(w, row, i);
            RngStream rng(seed, "alg1", static_cast<std::uint64_t>(i),
                          static_cast<std::uint64_t>(k));
            draw_restricted_permutation(rng, n, i, perm);
            double gi = 0.0;
            for (int j : w.neighbors[static_cast<std::size_t>(i)]) {
                gi += row[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
            }
            centered += gi - static_cast<double>(m) * ls.lambda_bar;
        }
        return reg_upper_inc_gamma(centered * centered / (4.0 * s.upsilon2), 0.5);
    };
    return empirical_beta_transform(p0, sampler, r);
}

} // namespace sapt
