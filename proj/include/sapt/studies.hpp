#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/inference.hpp"
#include "sapt/parallel.hpp"
#include "sapt/permutation.hpp"
#include "sapt/simulate.hpp"
#include "sapt/uniformity.hpp"

namespace sapt {

enum class LocalMethod { Beta, SubGauss, ZScore, Mc, Exhaustive };

inline const char* name(LocalMethod m) {
    switch (m) {
        case LocalMethod::Beta: return "beta";
        case LocalMethod::SubGauss: return "subgauss";
        case LocalMethod::ZScore: return "zscore";
        case LocalMethod::Mc: return "mc";
        case LocalMethod::Exhaustive: return "exhaustive";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Null-uniformity study: per replicate, iid data on the graph, per-vertex
// p-values per (statistic, method), Anderson-Darling uniformity verdicts.
// ---------------------------------------------------------------------------
struct NullStudyConfig {
    std::string graph_label;
    int k = 1;
    Distribution dist = Distribution::Gaussian;
    std::vector<Statistic> stats{Statistic::Moran};
    std::vector<LocalMethod> methods{LocalMethod::Beta};
    int replicates = 30;
    std::uint64_t seed = 0;
    long long mc_permutations = 1000;
    ThresholdMode mode = ThresholdMode::Centered;
    int threads = 1;
};

struct NullStudyCell {
    Statistic stat = Statistic::Moran;
    LocalMethod method = LocalMethod::Beta;
    std::vector<std::vector<double>> pvalues; // [replicate][testable vertex]
    std::vector<double> ad_stat;              // per replicate
    std::vector<std::uint8_t> ad_reject;      // per replicate, at 1%
    std::vector<int> skipped;                 // per replicate (zscore variance guard)
    int rejections = 0;
};

struct NullStudyReport {
    NullStudyConfig config;
    int n = 0;
    std::vector<int> excluded; // degenerate vertices
    std::vector<NullStudyCell> cells;
};

inline NullStudyReport run_null_study(const Graph& g, const NullStudyConfig& cfg) {
    if (cfg.replicates < 1) throw input_error("run_null_study: replicates must be >= 1");
    const WeightMatrix w = knn_weights(g, cfg.k);
    const int n = w.n;
    NullStudyReport rep;
    rep.config = cfg;
    rep.n = n;
    std::vector<int> testable;
    for (int i = 0; i < n; ++i) {
        if (is_testable(w, i)) {
            testable.push_back(i);
        } else {
            rep.excluded.push_back(i);
        }
    }
    if (testable.empty()) throw degenerate_error("run_null_study: no testable vertices");

    for (Statistic st : cfg.stats) {
        for (LocalMethod me : cfg.methods) {
            if (me == LocalMethod::Exhaustive) {
                throw infeasible_error("run_null_study: exhaustive method not supported in studies");
            }
            NullStudyCell cell;
            cell.stat = st;
            cell.method = me;
            cell.pvalues.resize(static_cast<std::size_t>(cfg.replicates));
            cell.ad_stat.resize(static_cast<std::size_t>(cfg.replicates), 0.0);
            cell.ad_reject.resize(static_cast<std::size_t>(cfg.replicates), 0);
            cell.skipped.resize(static_cast<std::size_t>(cfg.replicates), 0);
            rep.cells.push_back(std::move(cell));
        }
    }

    parallel_for(cfg.replicates, cfg.threads, [&](int r) {
        RngStream data_rng(cfg.seed, "null-data", static_cast<std::uint64_t>(r));
        const ObservationVector y = simulate_iid(cfg.dist, n, data_rng);
        std::size_t cell_idx = 0;
        for (Statistic st : cfg.stats) {
            const ProximityKind kind = proximity_for(st);
            for (LocalMethod me : cfg.methods) {
                NullStudyCell& cell = rep.cells[cell_idx++];
                std::vector<double>& pv = cell.pvalues[static_cast<std::size_t>(r)];
                pv.reserve(testable.size());
                int skipped = 0;
                for (int i : testable) {
                    switch (me) {
                        case LocalMethod::Beta:
                        case LocalMethod::SubGauss: {
                            const LocalRowSummary row = local_gamma(w, y, kind, i);
                            const LocalInference inf = local_analytic(row, n, cfg.mode);
                            pv.push_back(me == LocalMethod::Beta ? inf.p_beta : inf.p_subgauss);
                            break;
                        }
                        case LocalMethod::ZScore: {
                            const MomentSummary ms = lisa_moments(w, y, st, i);
                            if (!ms.variance_positive) {
                                ++skipped;
                                break;
                            }
                            pv.push_back(local_pvalue_zscore(local_statistic(w, y, st, i), ms,
                                                             Tail::TwoSided));
                            break;
                        }
                        case LocalMethod::Mc: {
                            PermutationPlan plan;
                            plan.mode = PermutationPlan::Mode::RestrictedLocal;
                            plan.fixed_vertex = i;
                            plan.permutations = cfg.mc_permutations;
                            plan.seed = derive_seed(cfg.seed, "null-mc", static_cast<std::uint64_t>(r));
                            plan.tail = Tail::TwoSided;
                            pv.push_back(mc_local_pvalue(w, y, kind, i, plan));
                            break;
                        }
                        case LocalMethod::Exhaustive: break; // rejected above
                    }
                }
                cell.skipped[static_cast<std::size_t>(r)] = skipped;
                const AndersonDarlingResult ad = anderson_darling_uniform(pv);
                cell.ad_stat[static_cast<std::size_t>(r)] = ad.a2;
                cell.ad_reject[static_cast<std::size_t>(r)] = ad.reject_at_1pct ? 1 : 0;
            }
        }
    });
    for (auto& cell : rep.cells) {
        cell.rejections = 0;
        for (std::uint8_t f : cell.ad_reject) cell.rejections += f;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Power study: correlated data with covariance I + cA over a grid of c,
// analytic vs Monte Carlo global p-values, rejection rates at `alpha`.
// ---------------------------------------------------------------------------
struct PowerStudyConfig {
    std::string graph_label;
    int k = 1;
    Distribution dist = Distribution::Gaussian;
    Statistic stat = Statistic::Moran;
    std::vector<double> c_grid{0.0};
    int replicates = 400;
    long long mc_permutations = 500;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    bool empirical_beta = false;
    int empirical_beta_r = 10;
    ThresholdMode mode = ThresholdMode::Centered;
    PermutationPlan::Mode mc_mode = PermutationPlan::Mode::SingleGlobal;
    int threads = 1;
};

struct PowerPoint {
    double c = 0.0;
    std::vector<double> p_analytic;
    std::vector<double> p_mc;
    std::vector<double> p_empirical; // empty unless enabled
    double power_analytic = 0.0, se_analytic = 0.0;
    double power_mc = 0.0, se_mc = 0.0;
    double power_empirical = 0.0, se_empirical = 0.0;
};

struct PowerStudyReport {
    PowerStudyConfig config;
    int n = 0;
    std::vector<PowerPoint> points;
};

inline PowerStudyReport run_power_study(const Graph& g, const PowerStudyConfig& cfg) {
    if (cfg.replicates < 1) throw input_error("run_power_study: replicates must be >= 1");
    if (cfg.c_grid.empty()) throw input_error("run_power_study: empty c grid");
    const WeightMatrix w = knn_weights(g, cfg.k);
    const int n = w.n;
    const ProximityKind kind = proximity_for(cfg.stat);

    PowerStudyReport rep;
    rep.config = cfg;
    rep.n = n;
    std::vector<CholeskyFactor> factors;
    for (double c : cfg.c_grid) {
        try {
            factors.push_back(correlation_factor(g, c));
        } catch (const degenerate_error& e) {
            throw input_error("power study: I + cA not positive definite at c = " +
                              std::to_string(c) + " (" + e.what() + ")");
        }
    }

    const int nc = static_cast<int>(cfg.c_grid.size());
    rep.points.resize(static_cast<std::size_t>(nc));
    for (int ci = 0; ci < nc; ++ci) {
        PowerPoint& pt = rep.points[static_cast<std::size_t>(ci)];
        pt.c = cfg.c_grid[static_cast<std::size_t>(ci)];
        pt.p_analytic.resize(static_cast<std::size_t>(cfg.replicates), 1.0);
        pt.p_mc.resize(static_cast<std::size_t>(cfg.replicates), 1.0);
        if (cfg.empirical_beta) pt.p_empirical.resize(static_cast<std::size_t>(cfg.replicates), 1.0);
    }

    parallel_for(nc * cfg.replicates, cfg.threads, [&](int item) {
        const int ci = item / cfg.replicates;
        const int r = item % cfg.replicates;
        RngStream data_rng(cfg.seed, "power-data", static_cast<std::uint64_t>(ci),
                           static_cast<std::uint64_t>(r));
        const CholeskyFactor& f = factors[static_cast<std::size_t>(ci)];
        const ObservationVector y = cfg.dist == Distribution::Gaussian
                                        ? simulate_correlated_gaussian(f, data_rng)
                                        : simulate_correlated_exponential(f, data_rng);
        PowerPoint& pt = rep.points[static_cast<std::size_t>(ci)];
        const GlobalGammaSummary s = global_gamma_summary(w, y, kind);
        pt.p_analytic[static_cast<std::size_t>(r)] = global_pvalue(s, cfg.mode);
        PermutationPlan plan;
        plan.mode = cfg.mc_mode;
        plan.permutations = cfg.mc_permutations;
        plan.seed = derive_seed(cfg.seed, "power-mc", static_cast<std::uint64_t>(ci),
                                static_cast<std::uint64_t>(r));
        plan.tail = Tail::TwoSided;
        pt.p_mc[static_cast<std::size_t>(r)] = mc_global_pvalue(w, y, kind, plan);
        if (cfg.empirical_beta) {
            const EmpiricalBetaResult eb = empirical_beta_global(
                w, y, s, cfg.empirical_beta_r,
                derive_seed(cfg.seed, "power-emp", static_cast<std::uint64_t>(ci),
                            static_cast<std::uint64_t>(r)),
                cfg.mode);
            pt.p_empirical[static_cast<std::size_t>(r)] = eb.p_adjusted;
        }
    });

    const auto summarize = [&](const std::vector<double>& pv, double& power, double& se) {
        int rejec = 0;
        for (double p : pv) rejec += (p <= cfg.alpha) ? 1 : 0;
        power = static_cast<double>(rejec) / static_cast<double>(pv.size());
        se = std::sqrt(power * (1.0 - power) / static_cast<double>(pv.size()));
    };
    for (auto& pt : rep.points) {
        summarize(pt.p_analytic, pt.power_analytic, pt.se_analytic);
        summarize(pt.p_mc, pt.power_mc, pt.se_mc);
        if (cfg.empirical_beta) summarize(pt.p_empirical, pt.power_empirical, pt.se_empirical);
    }
    return rep;
}

} // namespace sapt
