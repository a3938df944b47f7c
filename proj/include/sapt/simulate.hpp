#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sapt/errors.hpp"
#include "sapt/observations.hpp"
#include "sapt/rng.hpp"
#include "sapt/specfun.hpp"
#include "sapt/weights.hpp"

namespace sapt {

enum class Distribution { Gaussian, Exponential };

inline const char* name(Distribution d) {
    return d == Distribution::Gaussian ? "gaussian" : "exponential";
}

inline ObservationVector simulate_iid(Distribution dist, int n, RngStream& rng) {
    if (n < 1) throw input_error("simulate_iid: n must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (dist == Distribution::Gaussian) {
        for (double& x : v) x = rng.next_gaussian();
    } else {
        for (double& x : v) x = rng.next_exponential();
    }
    return ObservationVector::from_values(std::move(v));
}

// Dense lower-triangular Cholesky factor of a symmetric matrix (row-major).
// Throws naming the smallest pivot when the matrix is not positive definite.
struct CholeskyFactor {
    int n = 0;
    std::vector<double> lower; // row-major, entries above diagonal zero
};

inline CholeskyFactor cholesky_lower(const std::vector<double>& a, int n) {
    CholeskyFactor f;
    f.n = n;
    f.lower.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    auto L = [&](int r, int c) -> double& {
        return f.lower[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)];
    };
    double smallest_pivot = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        double d = a[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
        for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        smallest_pivot = std::min(smallest_pivot, d);
        if (!(d > 0.0)) {
            throw degenerate_error("cholesky: matrix not positive definite (smallest pivot " +
                                   std::to_string(smallest_pivot) + " at column " + std::to_string(j) + ")");
        }
        L(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / L(j, j);
        }
    }
    return f;
}

// Factor of I + cA with A the graph adjacency matrix (unit diagonal, so the
// latent Gaussian marginals stay standard).
inline CholeskyFactor correlation_factor(const Graph& g, double c) {
    const int n = g.order();
    std::vector<double> m(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        m[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = 1.0;
    }
    for (const auto& [a, b] : g.edges) {
        m[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)] = c;
        m[static_cast<std::size_t>(b) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] = c;
    }
    return cholesky_lower(m, n);
}

// y = L z with z iid standard normal: covariance I + cA.
inline ObservationVector simulate_correlated_gaussian(const CholeskyFactor& f, RngStream& rng) {
    const int n = f.n;
    std::vector<double> z(static_cast<std::size_t>(n));
    for (double& x : z) x = rng.next_gaussian();
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j <= i; ++j) {
            s += f.lower[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] *
                 z[static_cast<std::size_t>(j)];
        }
        y[static_cast<std::size_t>(i)] = s;
    }
    return ObservationVector::from_values(std::move(y));
}

// Gaussian copula with unit-rate exponential marginals: the latent Gaussian
// carries the I + cA correlation; marginals are exact via
// y = -ln(upper_tail(z)).  Dependence on the exponential scale is only
// approximate (documented limitation).
inline ObservationVector simulate_correlated_exponential(const CholeskyFactor& f, RngStream& rng) {
    ObservationVector latent = simulate_correlated_gaussian(f, rng);
    std::vector<double> y(latent.values.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = -log_normal_upper_tail(latent.values[i]);
    }
    return ObservationVector::from_values(std::move(y));
}

} // namespace sapt
