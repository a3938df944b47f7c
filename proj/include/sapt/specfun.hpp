#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sapt {

// ---------------------------------------------------------------------------
// Log-gamma.  Lanczos approximation with the 14-coefficient set (Godfrey /
// Press et al.), full double accuracy on x > 0.
// ---------------------------------------------------------------------------
inline double ln_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("ln_gamma: requires x > 0");
    static const double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,
        14.1360979747417471,     -0.491913816097620199,
        0.339946499848118887e-4,  0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3,
        -0.210264441724104883e-3, 0.217439618115212643e-3,
        -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000; // 671/128
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

// ln Gamma(a+b) - ln Gamma(a).  Direct subtraction loses ~b*eps*|lnGamma(a)|
// absolute digits for large a; the Stirling-series difference keeps full
// accuracy, which matters for Gamma-ratio constants with a up to 1e6.
inline double ln_gamma_diff(double a, double b) {
    if (!(a > 0.0) || !(a + b > 0.0)) throw std::domain_error("ln_gamma_diff: domain");
    if (a < 30.0 || std::abs(b) > 0.25 * a) return ln_gamma(a + b) - ln_gamma(a);
    // B_{2k}/(2k(2k-1)) for k = 1..6
    static const double stc[6] = {1.0 / 12,     -1.0 / 360,     1.0 / 1260,
                                  -1.0 / 1680,  1.0 / 1188,    -691.0 / 360360};
    double s = (a - 0.5) * std::log1p(b / a) + b * std::log(a + b) - b;
    double pa = 1.0 / a, pab = 1.0 / (a + b);
    double qa = pa, qab = pab; // (a)^{1-2k} accumulators
    for (int k = 0; k < 6; ++k) {
        s += stc[k] * (qab - qa);
        qa *= pa * pa;
        qab *= pab * pab;
    }
    return s;
}

inline double ln_beta(double a, double b) {
    if (a < b) std::swap(a, b);
    return ln_gamma(b) - ln_gamma_diff(a, b);
}

namespace detail {

// Modified Lentz evaluation of the incomplete beta continued fraction
// (Press et al. form with even/odd coefficient pairs folded per iteration).
inline double inc_beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("inc_beta_cf: continued fraction did not converge");
}

// ln(1-x) without cancellation; 1-x itself is exact for x >= 0.5 (Sterbenz).
inline double log_one_minus(double x) {
    return x < 0.5 ? std::log1p(-x) : std::log(1.0 - x);
}

} // namespace detail

// Regularized incomplete beta I_x(a, b) with the standard symmetry split at
// x = (a+1)/(a+b+2).
inline double reg_inc_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: shape parameters must be positive");
    if (!(x >= 0.0) || !(x <= 1.0)) throw std::domain_error("reg_inc_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_bt = a * std::log(x) + b * detail::log_one_minus(x) - ln_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_bt) * detail::inc_beta_cf(a, b, x) / a;
    }
    return 1.0 - std::exp(ln_bt) * detail::inc_beta_cf(b, a, 1.0 - x) / b;
}

// ln I_x(a, b) given ln x.  Stays finite long after I_x underflows; used so
// p-values keep a meaningful log-space representation in deep tails.
inline double log_reg_inc_beta_logx(double log_x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("log_reg_inc_beta_logx: shape parameters must be positive");
    if (log_x > 0.0) throw std::domain_error("log_reg_inc_beta_logx: log_x must be <= 0");
    if (log_x == 0.0) return 0.0;
    if (log_x > -700.0) {
        const double x = std::exp(log_x);
        const double ln_bt = a * log_x + b * detail::log_one_minus(x) - ln_beta(a, b);
        if (x < (a + 1.0) / (a + b + 2.0)) {
            return ln_bt + std::log(detail::inc_beta_cf(a, b, x) / a);
        }
        const double other = std::exp(ln_bt) * detail::inc_beta_cf(b, a, 1.0 - x) / b;
        return std::log1p(-other);
    }
    // x below representable range: I_x(a,b) = x^a/(a B(a,b)) (1 + O(x)).
    return a * log_x - std::log(a) - ln_beta(a, b);
}

inline double log_reg_inc_beta(double x, double a, double b) {
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    return log_reg_inc_beta_logx(std::log(x), a, b);
}

namespace detail {

// Series for the lower regularized gamma P(x;s), x < s+1.
inline double gamma_p_series(double x, double s) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            return sum * std::exp(-x + s * std::log(x) - ln_gamma(s));
        }
    }
    throw std::runtime_error("gamma_p_series: no convergence");
}

// Lentz continued fraction for the upper regularized gamma Q(x;s), x >= s+1;
// returns ln Q.
inline double log_gamma_q_cf(double x, double s) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kFpMin = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return -x + s * std::log(x) - ln_gamma(s) + std::log(h);
        }
    }
    throw std::runtime_error("log_gamma_q_cf: no convergence");
}

} // namespace detail

// Regularized upper incomplete gamma Q(x; s) = Gamma(x; s)/Gamma(s).
// Series for the lower part when x < s+1, continued fraction otherwise.
inline double reg_upper_inc_gamma(double x, double s) {
    if (!(s > 0.0)) throw std::domain_error("reg_upper_inc_gamma: s must be positive");
    if (!(x >= 0.0)) throw std::domain_error("reg_upper_inc_gamma: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - detail::gamma_p_series(x, s);
    return std::exp(detail::log_gamma_q_cf(x, s));
}

inline double log_reg_upper_inc_gamma(double x, double s) {
    if (!(s > 0.0)) throw std::domain_error("log_reg_upper_inc_gamma: s must be positive");
    if (!(x >= 0.0)) throw std::domain_error("log_reg_upper_inc_gamma: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return std::log1p(-detail::gamma_p_series(x, s));
    return detail::log_gamma_q_cf(x, s);
}

// Standard normal upper tail P(Z >= z), via Q(z^2/2; 1/2) = erfc(z/sqrt 2).
inline double normal_upper_tail(double z) {
    if (z >= 0.0) return 0.5 * reg_upper_inc_gamma(0.5 * z * z, 0.5);
    return 1.0 - 0.5 * reg_upper_inc_gamma(0.5 * z * z, 0.5);
}

// ln P(Z >= z); finite for z up to ~1e154.
inline double log_normal_upper_tail(double z) {
    if (z >= 0.0) {
        return std::log(0.5) + log_reg_upper_inc_gamma(0.5 * z * z, 0.5);
    }
    return std::log1p(-0.5 * reg_upper_inc_gamma(0.5 * z * z, 0.5));
}

// ---------------------------------------------------------------------------
// Beta method-of-moments fit (empirical beta transform).
// ---------------------------------------------------------------------------
struct BetaParams {
    double alpha = 0;
    double beta = 0;
};

// alpha = pbar^2 (1-pbar)/s^2 - pbar,  beta = [pbar(1-pbar)/s^2 - 1](1-pbar),
// with pbar the sample mean and s^2 the (n-1)-divisor sample variance.
// Returns nullopt when the fit degenerates: fewer than 2 samples, zero
// variance, mean outside (0,1), or a nonpositive fitted shape.
inline std::optional<BetaParams> beta_mom_fit(std::span<const double> samples) {
    const std::size_t r = samples.size();
    if (r < 2) return std::nullopt;
    double mean = 0.0;
    for (double p : samples) mean += p;
    mean /= static_cast<double>(r);
    double ss = 0.0;
    for (double p : samples) ss += (p - mean) * (p - mean);
    const double s2 = ss / static_cast<double>(r - 1);
    if (!(s2 > 0.0) || !(mean > 0.0) || !(mean < 1.0)) return std::nullopt;
    const double alpha = mean * mean * (1.0 - mean) / s2 - mean;
    const double beta = (mean * (1.0 - mean) / s2 - 1.0) * (1.0 - mean);
    if (!(alpha > 0.0) || !(beta > 0.0)) return std::nullopt;
    return BetaParams{alpha, beta};
}

// ---------------------------------------------------------------------------
// Numeric checks for the appendix lemmas.  Both sums are evaluated by direct
// summation of exp(log-term) so that individual terms of very different
// magnitude do not overflow.
// ---------------------------------------------------------------------------

// Even-index binomial half-sum dominates the odd-index half-sum:
//   sum_{k even} G(q+1) c^{k/2} / [G(k/2+1) G(q-k/2+1)]
//     >= sum_{k odd} (same kernel),   q > 0, 0 < c < 1.
inline bool check_half_binomial(int q, double c) {
    if (q < 1 || q > 30) throw std::domain_error("check_half_binomial: q must be in [1,30]");
    if (!(c > 0.0) || !(c < 1.0)) throw std::domain_error("check_half_binomial: c must be in (0,1)");
    const double lg_q1 = ln_gamma(q + 1.0);
    const double ln_c = std::log(c);
    double even = 0.0; // k = 2l, l = 0..q
    for (int l = 0; l <= q; ++l) {
        even += std::exp(lg_q1 - ln_gamma(l + 1.0) - ln_gamma(q - l + 1.0) + l * ln_c);
    }
    double odd = 0.0; // k = 2r-1, r = 1..q
    for (int r = 1; r <= q; ++r) {
        odd += std::exp(lg_q1 - ln_gamma(r + 0.5) - ln_gamma(q - r + 1.5) +
                        (r - 0.5) * ln_c);
    }
    return even >= odd;
}

// Composition-sum bound:
//   sum over compositions k_1+...+k_n = 2p of
//     G(p+1)/prod G(k_i/2+1) * prod c_i^{k_i/2}  <=  2^{n-1} (sum c_i)^p.
// Zero weights are floored at 1e-12 so the log-space kernel stays defined.
inline bool check_composition_bound(int n, int p, std::span<const double> c) {
    if (n < 2 || n > 5) throw std::domain_error("check_composition_bound: n must be in [2,5]");
    if (p < 1 || p > 6) throw std::domain_error("check_composition_bound: p must be in [1,6]");
    if (static_cast<int>(c.size()) != n) throw std::domain_error("check_composition_bound: weight count mismatch");
    std::vector<double> w(c.begin(), c.end());
    double total = 0.0;
    for (double& v : w) {
        if (v < 0.0) throw std::domain_error("check_composition_bound: negative weight");
        v = std::max(v, 1e-12);
        total += v;
    }
    const double lg_p1 = ln_gamma(p + 1.0);
    double sum = 0.0;
    std::vector<int> k(static_cast<std::size_t>(n), 0);
    // depth-first enumeration of compositions of 2p into n nonnegative parts
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n - 1) {
            k[static_cast<std::size_t>(pos)] = remaining;
            double lt = lg_p1;
            for (int i = 0; i < n; ++i) {
                const double ki = k[static_cast<std::size_t>(i)];
                lt -= ln_gamma(0.5 * ki + 1.0);
                lt += 0.5 * ki * std::log(w[static_cast<std::size_t>(i)]);
            }
            sum += std::exp(lt);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            k[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, 2 * p);
    const double bound = std::exp((n - 1) * std::log(2.0) + p * std::log(total));
    return sum <= bound * (1.0 + 1e-12);
}

} // namespace sapt
