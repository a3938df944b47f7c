#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sapt/rng.hpp"
#include "sapt/runner.hpp"
#include "sapt/studies.hpp"
#include "sapt/version.hpp"

namespace sapt {

using json = nlohmann::json;

inline std::string fnv1a64_hex(std::string_view bytes) {
    const std::uint64_t h = detail::fnv1a64(bytes);
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[static_cast<std::size_t>(15 - i)] = digits[(h >> (4 * i)) & 0xf];
    return out;
}

// Every output embeds its manifest: subcommand, reproducibility-relevant
// flags (canonical order), input digests, root seed, tool version.  Execution
// details that cannot affect report content (--threads, --out) stay out, so
// reruns with different worker counts stay byte-identical.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> flags;
    std::vector<std::pair<std::string, std::string>> inputs; // (path, digest)
    std::uint64_t seed = 0;
};

inline json to_json(const RunManifest& m) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["subcommand"] = m.subcommand;
    j["flags"] = m.flags; // std::map keeps canonical key order
    json inputs = json::array();
    for (const auto& [path, digest] : m.inputs) {
        inputs.push_back(json{{"path", path}, {"fnv1a64", digest}});
    }
    j["inputs"] = inputs;
    j["seed"] = m.seed;
    return j;
}

inline const char* name(ThresholdMode m) {
    return m == ThresholdMode::Centered ? "centered" : "literal";
}

inline const char* name(PermutationPlan::Mode m) {
    switch (m) {
        case PermutationPlan::Mode::RestrictedLocal: return "restricted-local";
        case PermutationPlan::Mode::SingleGlobal: return "single";
        case PermutationPlan::Mode::ProductGroupGlobal: return "product";
    }
    return "?";
}

inline json lisa_report(const LisaRunResult& run, const Graph& g, const RunManifest& manifest) {
    json j;
    j["report_type"] = "lisa";
    j["manifest"] = to_json(manifest);
    json cfg;
    cfg["stat"] = name(run.config.stat);
    cfg["k"] = run.config.k;
    json methods = json::array();
    for (LocalMethod m : run.config.methods) methods.push_back(name(m));
    cfg["methods"] = methods;
    cfg["tail"] = name(run.config.tail);
    cfg["threshold_mode"] = name(run.config.mode);
    cfg["permutations"] = run.config.permutations;
    cfg["seed"] = run.config.seed;
    j["config"] = cfg;
    j["n"] = run.n;
    json results = json::array();
    json excluded = json::array();
    for (const auto& r : run.results) {
        if (r.excluded) {
            excluded.push_back(json{{"id", r.id}, {"index", r.index}, {"reason", r.reason}});
            continue;
        }
        json v;
        v["id"] = r.id;
        v["index"] = r.index;
        v["connectivity"] = name(r.connectivity);
        v["degree"] = r.degree;
        v["gamma"] = r.gamma;
        v["lambda_bar"] = r.lambda_bar;
        v["s2"] = r.s2;
        v["centering"] = r.centering;
        v["threshold"] = r.threshold;
        if (r.statistic) v["statistic"] = *r.statistic;
        json p;
        if (r.p_beta) p["beta"] = *r.p_beta;
        if (r.p_subgauss) p["subgauss"] = *r.p_subgauss;
        if (r.p_zscore) p["zscore"] = *r.p_zscore;
        if (r.p_mc) p["mc"] = *r.p_mc;
        if (r.p_exhaustive) p["exhaustive"] = *r.p_exhaustive;
        v["p"] = p;
        json flags = json::array();
        if (r.zero_scale) flags.push_back("zero-scale");
        if (r.zscore_unavailable) flags.push_back("nonpositive-variance");
        v["flags"] = flags;
        results.push_back(v);
    }
    j["results"] = results;
    j["excluded"] = excluded;
    (void)g;
    return j;
}

inline json gisa_report(const GisaRunResult& run, const Graph& g, const RunManifest& manifest) {
    json j;
    j["report_type"] = "gisa";
    j["manifest"] = to_json(manifest);
    json cfg;
    cfg["stat"] = name(run.config.stat);
    cfg["k"] = run.config.k;
    json methods = json::array();
    for (GlobalMethod m : run.config.methods) methods.push_back(name(m));
    cfg["methods"] = methods;
    cfg["tail"] = name(run.config.tail);
    cfg["threshold_mode"] = name(run.config.mode);
    cfg["permutations"] = run.config.permutations;
    cfg["mc_mode"] = name(run.config.mc_mode);
    cfg["empirical_beta_r"] = run.config.empirical_beta_r;
    cfg["seed"] = run.config.seed;
    j["config"] = cfg;
    j["n"] = run.n;
    j["statistic"] = run.statistic.value;
    json excluded = json::array();
    for (std::size_t e = 0; e < run.statistic.excluded.size(); ++e) {
        const int idx = run.statistic.excluded[e];
        excluded.push_back(json{{"id", g.ids[static_cast<std::size_t>(idx)]},
                                {"index", idx},
                                {"reason", run.excluded_reasons[e]}});
    }
    j["excluded"] = excluded;
    j["gamma"] = run.summary.gamma;
    j["centering"] = run.summary.centering;
    j["upsilon2"] = run.summary.upsilon2;
    j["varpi2"] = run.summary.varpi2;
    j["eta"] = run.summary.eta;
    json p;
    if (run.p_analytic) p["analytic"] = *run.p_analytic;
    if (run.p_mc) p["mc"] = *run.p_mc;
    if (run.empirical) p["empirical_beta"] = run.empirical->p_adjusted;
    j["p"] = p;
    if (run.empirical) {
        json eb;
        eb["r"] = run.empirical->replicates;
        eb["degenerate"] = run.empirical->degenerate;
        if (run.empirical->fit) {
            eb["alpha"] = run.empirical->fit->alpha;
            eb["beta"] = run.empirical->fit->beta;
        }
        eb["samples"] = run.empirical->p_samples;
        j["empirical_beta"] = eb;
    }
    json flags = json::array();
    if (run.summary.zero_scale) flags.push_back("zero-scale");
    if (run.summary.small_n_warning) flags.push_back("small-n-remainder");
    j["flags"] = flags;
    return j;
}

inline json null_study_report(const NullStudyReport& rep, const RunManifest& manifest) {
    json j;
    j["report_type"] = "null-study";
    j["manifest"] = to_json(manifest);
    json cfg;
    cfg["graph"] = rep.config.graph_label;
    cfg["k"] = rep.config.k;
    cfg["dist"] = name(rep.config.dist);
    json stats = json::array();
    for (Statistic s : rep.config.stats) stats.push_back(name(s));
    cfg["stats"] = stats;
    json methods = json::array();
    for (LocalMethod m : rep.config.methods) methods.push_back(name(m));
    cfg["methods"] = methods;
    cfg["replicates"] = rep.config.replicates;
    cfg["seed"] = rep.config.seed;
    cfg["mc_permutations"] = rep.config.mc_permutations;
    cfg["threshold_mode"] = name(rep.config.mode);
    j["config"] = cfg;
    j["n"] = rep.n;
    j["excluded"] = rep.excluded;
    j["ad_critical_1pct"] = kAndersonDarling1pctCritical;
    json cells = json::array();
    for (const auto& c : rep.cells) {
        json jc;
        jc["stat"] = name(c.stat);
        jc["method"] = name(c.method);
        jc["rejections"] = c.rejections;
        jc["ad_stat"] = c.ad_stat;
        json rej = json::array();
        for (std::uint8_t f : c.ad_reject) rej.push_back(f != 0);
        jc["ad_reject"] = rej;
        jc["skipped"] = c.skipped;
        jc["pvalues"] = c.pvalues;
        cells.push_back(jc);
    }
    j["cells"] = cells;
    return j;
}

inline json power_study_report(const PowerStudyReport& rep, const RunManifest& manifest) {
    json j;
    j["report_type"] = "power-study";
    j["manifest"] = to_json(manifest);
    json cfg;
    cfg["graph"] = rep.config.graph_label;
    cfg["k"] = rep.config.k;
    cfg["dist"] = name(rep.config.dist);
    cfg["stat"] = name(rep.config.stat);
    cfg["c_grid"] = rep.config.c_grid;
    cfg["replicates"] = rep.config.replicates;
    cfg["mc_permutations"] = rep.config.mc_permutations;
    cfg["alpha"] = rep.config.alpha;
    cfg["seed"] = rep.config.seed;
    cfg["empirical_beta"] = rep.config.empirical_beta;
    cfg["empirical_beta_r"] = rep.config.empirical_beta_r;
    cfg["threshold_mode"] = name(rep.config.mode);
    cfg["mc_mode"] = name(rep.config.mc_mode);
    j["config"] = cfg;
    j["n"] = rep.n;
    json points = json::array();
    for (const auto& pt : rep.points) {
        json jp;
        jp["c"] = pt.c;
        json power;
        power["analytic"] = pt.power_analytic;
        power["mc"] = pt.power_mc;
        if (rep.config.empirical_beta) power["empirical_beta"] = pt.power_empirical;
        jp["power"] = power;
        json se;
        se["analytic"] = pt.se_analytic;
        se["mc"] = pt.se_mc;
        if (rep.config.empirical_beta) se["empirical_beta"] = pt.se_empirical;
        jp["se"] = se;
        json pv;
        pv["analytic"] = pt.p_analytic;
        pv["mc"] = pt.p_mc;
        if (rep.config.empirical_beta) pv["empirical_beta"] = pt.p_empirical;
        jp["pvalues"] = pv;
        points.push_back(jp);
    }
    j["points"] = points;
    return j;
}

// QQ plot source data: per replicate, sorted p-values against (i-0.5)/n.
inline std::string qq_csv(const NullStudyReport& rep) {
    std::string out = "stat,method,replicate,rank,expected,observed\n";
    char buf[128];
    for (const auto& c : rep.cells) {
        for (std::size_t r = 0; r < c.pvalues.size(); ++r) {
            std::vector<double> sorted = c.pvalues[r];
            std::sort(sorted.begin(), sorted.end());
            const std::size_t m = sorted.size();
            for (std::size_t i = 0; i < m; ++i) {
                const double expected = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
                std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%.17g,%.17g\n", name(c.stat),
                              name(c.method), r, i + 1, expected, sorted[i]);
                out += buf;
            }
        }
    }
    return out;
}

inline std::string power_csv(const PowerStudyReport& rep) {
    std::string out = "c,method,power,se\n";
    char buf[128];
    for (const auto& pt : rep.points) {
        std::snprintf(buf, sizeof buf, "%.17g,analytic,%.17g,%.17g\n", pt.c, pt.power_analytic,
                      pt.se_analytic);
        out += buf;
        std::snprintf(buf, sizeof buf, "%.17g,mc,%.17g,%.17g\n", pt.c, pt.power_mc, pt.se_mc);
        out += buf;
        if (rep.config.empirical_beta) {
            std::snprintf(buf, sizeof buf, "%.17g,empirical-beta,%.17g,%.17g\n", pt.c,
                          pt.power_empirical, pt.se_empirical);
            out += buf;
        }
    }
    return out;
}

} // namespace sapt
