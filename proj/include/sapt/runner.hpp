#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/inference.hpp"
#include "sapt/parallel.hpp"
#include "sapt/permutation.hpp"
#include "sapt/statistics.hpp"
#include "sapt/studies.hpp"

namespace sapt {

// ---------------------------------------------------------------------------
// LISA run: per-vertex analytic/Monte Carlo/exhaustive p-values.
// ---------------------------------------------------------------------------
struct LisaRunConfig {
    Statistic stat = Statistic::Moran;
    int k = 1;
    std::vector<LocalMethod> methods{LocalMethod::Beta};
    Tail tail = Tail::TwoSided;
    std::uint64_t seed = 0;
    long long permutations = 10000;
    ThresholdMode mode = ThresholdMode::Centered;
    int threads = 1;
};

struct LisaVertexResult {
    int index = -1;
    std::string id;
    ConnectivityClass connectivity = ConnectivityClass::LowConnected;
    bool excluded = false;
    std::string reason; // set when excluded
    int degree = 0;
    double gamma = 0.0, lambda_bar = 0.0, s2 = 0.0, centering = 0.0, threshold = 0.0;
    std::optional<double> statistic;
    std::optional<double> p_beta, p_subgauss, p_zscore, p_mc, p_exhaustive;
    bool zero_scale = false;
    bool zscore_unavailable = false; // nonpositive printed variance
};

struct LisaRunResult {
    LisaRunConfig config;
    int n = 0;
    std::vector<LisaVertexResult> results; // one per vertex, input order
};

inline LisaRunResult run_lisa(const Graph& g, const ObservationVector& y,
                              const LisaRunConfig& cfg) {
    const WeightMatrix w = knn_weights(g, cfg.k);
    const int n = w.n;
    if (y.size() != n) throw input_error("run_lisa: observation count mismatch");
    const bool want_exhaustive =
        std::count(cfg.methods.begin(), cfg.methods.end(), LocalMethod::Exhaustive) > 0;
    if (want_exhaustive && n > 9) {
        throw infeasible_error("run_lisa: exhaustive enumeration infeasible for n = " +
                               std::to_string(n) + " (max 9)");
    }
    const ProximityKind kind = proximity_for(cfg.stat);

    LisaRunResult out;
    out.config = cfg;
    out.n = n;
    out.results.resize(static_cast<std::size_t>(n));

    parallel_for(n, cfg.threads, [&](int i) {
        LisaVertexResult& r = out.results[static_cast<std::size_t>(i)];
        r.index = i;
        r.id = g.ids[static_cast<std::size_t>(i)];
        r.connectivity = classify_vertex(w, i);
        r.degree = w.degree[static_cast<std::size_t>(i)];
        if (auto reason = exclusion_reason(w, y, cfg.stat, i)) {
            r.excluded = true;
            r.reason = *reason;
            return;
        }
        r.statistic = local_statistic(w, y, cfg.stat, i);
        const LocalRowSummary row = local_gamma(w, y, kind, i);
        r.gamma = row.gamma;
        r.lambda_bar = row.lambda_bar;
        r.s2 = row.s2;
        const LocalInference inf = local_analytic(row, n, cfg.mode);
        r.centering = inf.centering;
        r.threshold = inf.threshold;
        r.zero_scale = inf.zero_scale;
        for (LocalMethod me : cfg.methods) {
            switch (me) {
                case LocalMethod::Beta: r.p_beta = inf.p_beta; break;
                case LocalMethod::SubGauss: r.p_subgauss = inf.p_subgauss; break;
                case LocalMethod::ZScore: {
                    const MomentSummary ms = lisa_moments(w, y, cfg.stat, i);
                    if (!ms.variance_positive) {
                        r.zscore_unavailable = true;
                    } else {
                        r.p_zscore = local_pvalue_zscore(*r.statistic, ms, cfg.tail);
                    }
                    break;
                }
                case LocalMethod::Mc: {
                    PermutationPlan plan;
                    plan.mode = PermutationPlan::Mode::RestrictedLocal;
                    plan.fixed_vertex = i;
                    plan.permutations = cfg.permutations;
                    plan.seed = cfg.seed;
                    plan.tail = cfg.tail;
                    r.p_mc = mc_local_pvalue(w, y, kind, i, plan);
                    break;
                }
                case LocalMethod::Exhaustive:
                    r.p_exhaustive = exhaustive_local_pvalue(w, y, kind, i, cfg.tail);
                    break;
            }
        }
    });

    bool any_output = false;
    for (const auto& r : out.results) {
        if (!r.excluded && (r.p_beta || r.p_subgauss || r.p_zscore || r.p_mc || r.p_exhaustive)) {
            any_output = true;
            break;
        }
    }
    if (!any_output) {
        throw degenerate_error("run_lisa: numeric degeneracy prevented all requested methods");
    }
    return out;
}

// ---------------------------------------------------------------------------
// GISA run: global statistic, analytic bound, Monte Carlo comparison, and the
// optional empirical beta adjustment.
// ---------------------------------------------------------------------------
enum class GlobalMethod { Analytic, Mc };

inline const char* name(GlobalMethod m) {
    return m == GlobalMethod::Analytic ? "analytic" : "mc";
}

struct GisaRunConfig {
    Statistic stat = Statistic::Moran;
    int k = 1;
    std::vector<GlobalMethod> methods{GlobalMethod::Analytic};
    Tail tail = Tail::TwoSided;
    std::uint64_t seed = 0;
    long long permutations = 500;
    PermutationPlan::Mode mc_mode = PermutationPlan::Mode::SingleGlobal;
    int empirical_beta_r = 0; // 0 disables Algorithm-1 adjustment
    ThresholdMode mode = ThresholdMode::Centered;
    int threads = 1;
};

struct GisaRunResult {
    GisaRunConfig config;
    int n = 0;
    GlobalStatistic statistic;      // named statistic over non-excluded vertices
    std::vector<std::string> excluded_reasons;
    GlobalGammaSummary summary;
    std::optional<double> p_analytic;
    std::optional<double> p_mc;
    std::optional<EmpiricalBetaResult> empirical;
};

inline GisaRunResult run_gisa(const Graph& g, const ObservationVector& y,
                              const GisaRunConfig& cfg) {
    const WeightMatrix w = knn_weights(g, cfg.k);
    const int n = w.n;
    if (y.size() != n) throw input_error("run_gisa: observation count mismatch");
    const ProximityKind kind = proximity_for(cfg.stat);

    GisaRunResult out;
    out.config = cfg;
    out.n = n;
    out.statistic = global_statistic(w, y, cfg.stat);
    for (int i : out.statistic.excluded) {
        out.excluded_reasons.push_back(*exclusion_reason(w, y, cfg.stat, i));
    }
    out.summary = global_gamma_summary(w, y, kind);
    for (GlobalMethod me : cfg.methods) {
        if (me == GlobalMethod::Analytic) {
            out.p_analytic = global_pvalue(out.summary, cfg.mode);
        } else {
            PermutationPlan plan;
            plan.mode = cfg.mc_mode;
            plan.permutations = cfg.permutations;
            plan.seed = cfg.seed;
            plan.tail = cfg.tail;
            out.p_mc = mc_global_pvalue(w, y, kind, plan);
        }
    }
    if (cfg.empirical_beta_r > 0) {
        out.empirical = empirical_beta_global(w, y, out.summary, cfg.empirical_beta_r,
                                              cfg.seed, cfg.mode);
    }
    return out;
}

} // namespace sapt
