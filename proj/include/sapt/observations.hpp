#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/graph.hpp"

namespace sapt {

// Per-vertex measurements aligned to Graph order, with the randomization
// moments' sufficient statistics cached: ybar, sigma2 = n^-1 sum (y-ybar)^2,
// and the kurtosis factor b = n sum y^4 / (sum y^2)^2 computed from raw y.
struct ObservationVector {
    std::vector<double> values;
    double mean = 0.0;
    double variance = 0.0;
    double kurtosis_factor = 0.0;

    int size() const { return static_cast<int>(values.size()); }

    static ObservationVector from_values(std::vector<double> v) {
        ObservationVector o;
        o.values = std::move(v);
        o.recompute();
        return o;
    }

    void recompute() {
        const std::size_t n = values.size();
        if (n == 0) {
            mean = variance = kurtosis_factor = 0.0;
            return;
        }
        double s1 = 0.0;
        for (double y : values) s1 += y;
        mean = s1 / static_cast<double>(n);
        double ss = 0.0, s2 = 0.0, s4 = 0.0;
        for (double y : values) {
            const double d = y - mean;
            ss += d * d;
            s2 += y * y;
            s4 += y * y * y * y;
        }
        variance = ss / static_cast<double>(n);
        kurtosis_factor = s2 > 0.0 ? static_cast<double>(n) * s4 / (s2 * s2) : 0.0;
    }
};

namespace detail {

inline double parse_double(std::string_view s, std::size_t row) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw input_error("observations: bad value at row " + std::to_string(row));
    }
    return v;
}

} // namespace detail

// Observations CSV: header `id,value`; ids must biject with graph vertices.
inline ObservationVector load_observations(std::string_view csv, const Graph& g) {
    const auto lines = detail::split_lines(csv);
    if (lines.empty() || lines[0] != "id,value") {
        throw input_error("observations: expected header 'id,value'");
    }
    const int n = g.order();
    std::vector<double> vals(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = detail::split_fields(lines[r]);
        if (fields.size() != 2 || fields[0].empty()) {
            throw input_error("observations: malformed row " + std::to_string(r + 1));
        }
        const int idx = g.index_of(fields[0]);
        if (idx < 0) {
            throw input_error("observations: unknown vertex id '" + std::string(fields[0]) +
                              "' at row " + std::to_string(r + 1));
        }
        if (seen[static_cast<std::size_t>(idx)]) {
            throw input_error("observations: duplicate id '" + std::string(fields[0]) +
                              "' at row " + std::to_string(r + 1));
        }
        seen[static_cast<std::size_t>(idx)] = true;
        vals[static_cast<std::size_t>(idx)] = detail::parse_double(fields[1], r + 1);
    }
    for (int i = 0; i < n; ++i) {
        if (!seen[static_cast<std::size_t>(i)]) {
            throw input_error("observations: missing value for vertex '" + g.ids[static_cast<std::size_t>(i)] + "'");
        }
    }
    return ObservationVector::from_values(std::move(vals));
}

} // namespace sapt
