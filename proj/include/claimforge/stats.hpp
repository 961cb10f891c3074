#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "claimforge/error.hpp"

namespace claimforge {

inline double mean(std::span<const double> v) {
    long double s = 0.0L;
    for (double x : v) s += x;
    return static_cast<double>(s / static_cast<long double>(v.size()));
}

// Sample standard deviation (n-1 denominator).
inline double sample_sd(std::span<const double> v) {
    if (v.size() < 2) throw DataError("sample_sd: need at least 2 values");
    const long double m = mean(v);
    long double s = 0.0L;
    for (double x : v) s += (x - m) * (x - m);
    return static_cast<double>(std::sqrt(s / static_cast<long double>(v.size() - 1)));
}

// Standard normalization: zero mean, unit sample standard deviation.
inline std::vector<double> standardize(std::span<const double> scores) {
    if (scores.size() < 2) throw DataError("standardize: need at least 2 values");
    const double m = mean(scores);
    const double sd = sample_sd(scores);
    if (sd == 0.0) throw DataError("standardize: zero variance input");
    std::vector<double> out;
    out.reserve(scores.size());
    for (double x : scores) out.push_back((x - m) / sd);
    return out;
}

namespace detail {

// Lanczos approximation of ln(gamma(x)), x > 0.
inline double log_gamma(double x) {
    static const double coeff[6] = {76.18009172947146,  -86.50532032941677, 24.01409824083091,
                                    -1.231739572450155, 0.1208650973866179e-2,
                                    -0.5395239384953e-5};
    double y = x;
    double tmp = x + 5.5;
    tmp -= (x + 0.5) * std::log(tmp);
    double ser = 1.000000000190015;
    for (double c : coeff) ser += c / ++y;
    return -tmp + std::log(2.5066282746310005 * ser / x);
}

// Continued fraction for the incomplete beta function.
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3.0e-12;
    constexpr double kFpMin = 1.0e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// Regularized incomplete beta I_x(a, b).
inline double betai(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                               a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace detail

// Two-sided p-value of a t statistic against Student-t with `df` degrees of
// freedom.
inline double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) throw DataError("student_t_two_sided_p: df must be positive");
    if (std::isinf(t)) return 0.0;
    return detail::betai(0.5 * df, 0.5, df / (df + t * t));
}

// Significance markers: * p<0.10, ** p<0.05, *** p<0.01.
inline std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.10) return "*";
    return "";
}

// Univariate OLS y = alpha + beta x with homoskedastic standard errors and
// Student-t(n-2) two-sided p-values.
struct RegressionResult {
    double alpha = 0.0;
    double beta = 0.0;
    double se_alpha = 0.0;
    double se_beta = 0.0;
    double t_alpha = 0.0;
    double t_beta = 0.0;
    double p_alpha = 1.0;
    double p_beta = 1.0;
    size_t n = 0;
    double r_squared = 0.0;
    std::string stars_alpha;
    std::string stars_beta;
};

inline RegressionResult ols_univariate(std::span<const double> y, std::span<const double> x) {
    if (y.size() != x.size()) throw DataError("ols_univariate: size mismatch");
    const size_t n = y.size();
    if (n < 3) throw DataError("ols_univariate: need at least 3 observations, got " +
                               std::to_string(n));

    // long double accumulation; the closed form is then well within 1e-9
    // relative of a full extended-precision solve on sane inputs.
    long double sx = 0.0L, sy = 0.0L;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / static_cast<long double>(n);
    const long double my = sy / static_cast<long double>(n);
    long double sxx = 0.0L, sxy = 0.0L, syy = 0.0L;
    for (size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0L) throw DataError("ols_univariate: regressor is constant");

    const long double beta = sxy / sxx;
    const long double alpha = my - beta * mx;
    long double sse = 0.0L;
    for (size_t i = 0; i < n; ++i) {
        const long double e = y[i] - (alpha + beta * x[i]);
        sse += e * e;
    }
    if (sse < 0.0L) sse = 0.0L;
    const long double sigma2 = sse / static_cast<long double>(n - 2);

    RegressionResult r;
    r.n = n;
    r.alpha = static_cast<double>(alpha);
    r.beta = static_cast<double>(beta);
    r.se_beta = static_cast<double>(std::sqrt(sigma2 / sxx));
    r.se_alpha = static_cast<double>(
        std::sqrt(sigma2 * (1.0L / static_cast<long double>(n) + mx * mx / sxx)));
    r.r_squared = syy > 0.0L ? static_cast<double>(1.0L - sse / syy) : 0.0;

    auto t_and_p = [&](double coef, double se, double& t, double& p) {
        if (se > 0.0) {
            t = coef / se;
            p = student_t_two_sided_p(t, static_cast<double>(n - 2));
        } else if (coef == 0.0) {
            t = 0.0;
            p = 1.0;
        } else {
            t = coef > 0.0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
            p = 0.0;
        }
    };
    t_and_p(r.alpha, r.se_alpha, r.t_alpha, r.p_alpha);
    t_and_p(r.beta, r.se_beta, r.t_beta, r.p_beta);
    r.stars_alpha = significance_stars(r.p_alpha);
    r.stars_beta = significance_stars(r.p_beta);
    return r;
}

}  // namespace claimforge
