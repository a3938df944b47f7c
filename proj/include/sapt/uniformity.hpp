#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sapt/errors.hpp"

namespace sapt {

// Asymptotic 1% critical value for the Anderson-Darling A^2 statistic with a
// fully specified null (Uniform(0,1)).
inline constexpr double kAndersonDarling1pctCritical = 3.857;

struct AndersonDarlingResult {
    double a2 = 0.0;
    bool reject_at_1pct = false;
};

// A^2 = -n - n^-1 sum (2i-1)[ln u_(i) + ln(1 - u_(n+1-i))], u sorted ascending.
// Inputs are clamped into [1e-12, 1 - 1e-12] first.
inline AndersonDarlingResult anderson_darling_uniform(std::vector<double> u) {
    const std::size_t n = u.size();
    if (n < 8) throw infeasible_error("anderson_darling_uniform: needs at least 8 samples");
    for (double& x : u) x = std::min(std::max(x, 1e-12), 1.0 - 1e-12);
    std::sort(u.begin(), u.end());
    double s = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        s += (2.0 * static_cast<double>(i) - 1.0) *
             (std::log(u[i - 1]) + std::log1p(-u[n - i]));
    }
    AndersonDarlingResult r;
    r.a2 = -static_cast<double>(n) - s / static_cast<double>(n);
    r.reject_at_1pct = r.a2 > kAndersonDarling1pctCritical;
    return r;
}

struct KolmogorovSmirnovResult {
    double d = 0.0;
    double p = 1.0;
};

// Asymptotic Kolmogorov distribution: Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double s = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * s));
}

inline KolmogorovSmirnovResult ks_uniform(std::vector<double> u) {
    const std::size_t n = u.size();
    if (n == 0) throw infeasible_error("ks_uniform: empty sample");
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double fi = static_cast<double>(i) / static_cast<double>(n);
        const double fim = static_cast<double>(i - 1) / static_cast<double>(n);
        d = std::max(d, std::max(fi - u[i - 1], u[i - 1] - fim));
    }
    KolmogorovSmirnovResult r;
    r.d = d;
    r.p = kolmogorov_q(std::sqrt(static_cast<double>(n)) * d);
    return r;
}

} // namespace sapt
