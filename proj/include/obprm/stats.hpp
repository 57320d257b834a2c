#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace obprm {

// Two-sided 95% quantile of the standard normal.
inline constexpr double kZ95 = 1.959963984540054;

struct TrialStats {
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double point_estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Wilson score interval; stays inside [0, 1] and never collapses to zero
// width at extreme rates.
inline TrialStats wilson_stats(std::int64_t successes, std::int64_t trials, double z = kZ95) {
    if (trials < 1) throw std::invalid_argument("wilson_stats: trials must be >= 1");
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("wilson_stats: successes out of range");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    TrialStats s;
    s.trials = trials;
    s.successes = successes;
    s.point_estimate = p;
    s.ci_low = center - half;
    s.ci_high = center + half;
    return s;
}

namespace detail {

// Regularized incomplete beta via Lentz's continued fraction.
inline double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-14;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

inline double betai(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace detail

inline double student_t_cdf(double t, double df) {
    double x = df / (df + t * t);
    double tail = 0.5 * detail::betai(0.5 * df, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

// Quantile by bisection on the CDF; plenty for confidence-interval use.
inline double student_t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p in (0,1)");
    if (!(df > 0.0)) throw std::invalid_argument("student_t_quantile: df must be positive");
    double lo = -1e4, hi = 1e4;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, df) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// 95% t-interval over replication means, clamped to [0, 1] for rates.
inline TrialStats replication_stats(const std::vector<double>& rates, std::int64_t trials,
                                    std::int64_t successes) {
    if (rates.empty()) throw std::invalid_argument("replication_stats: no replications");
    TrialStats s;
    s.trials = trials;
    s.successes = successes;
    s.point_estimate = mean(rates);
    double half = 0.0;
    if (rates.size() > 1) {
        double tq = student_t_quantile(0.975, static_cast<double>(rates.size() - 1));
        half = tq * sample_sd(rates) / std::sqrt(static_cast<double>(rates.size()));
    }
    s.ci_low = std::max(0.0, s.point_estimate - half);
    s.ci_high = std::min(1.0, s.point_estimate + half);
    return s;
}

inline double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("pearson_correlation: need two equal-length samples");
    double mx = mean(xs), my = mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace obprm
