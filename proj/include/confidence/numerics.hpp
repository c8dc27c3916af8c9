#pragma once

// Deterministic special functions, monotone-function inversion and adaptive
// quadrature. Everything here is pure and re-entrant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "confidence/errors.hpp"

namespace confidence {

struct ToleranceConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_iter = 200;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1)
            throw argument_error("ToleranceConfig: abs_tol > 0, rel_tol > 0, max_iter >= 1 required");
    }
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

// Regularized lower incomplete gamma P(a, x).  Series for x < a+1,
// continued fraction (modified Lentz) otherwise.
inline double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw domain_error("regularized_gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // series: P(a,x) = x^a e^-x / Gamma(a) * sum x^n / (a(a+1)...(a+n))
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int n = 0; n < 100000; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-17)
                return clamp01(sum * std::exp(-x + a * std::log(x) - lg));
        }
        throw accuracy_error("regularized_gamma_p: series did not converge", sum);
    }
    // continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-17) {
            const double q = std::exp(-x + a * std::log(x) - lg) * h;
            return clamp01(1.0 - q);
        }
    }
    throw accuracy_error("regularized_gamma_p: continued fraction did not converge", 1.0 - h);
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double incbeta_cf(double x, double a, double b) {
    const double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 100000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-17) return h;
    }
    throw accuracy_error("incbeta_cf: continued fraction did not converge", h);
}

// Regularized incomplete beta I_x(a, b).
inline double regularized_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0)
        throw domain_error("regularized_beta: need a, b > 0 and x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0))
        return clamp01(front * incbeta_cf(x, a, b) / a);
    return clamp01(1.0 - front * incbeta_cf(1.0 - x, b, a) / b);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Elementary CDFs
// ---------------------------------------------------------------------------

inline double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Inverse standard normal CDF.  Acklam's rational approximation polished by
// two Halley steps against erfc; good to ~1e-15 over (0, 1).
inline double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -detail::kInf;
        if (p == 1.0) return detail::kInf;
        throw domain_error("std_normal_quantile: p must lie in [0, 1]");
    }
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = std_normal_cdf(x) - p;
        const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

inline double student_t_cdf(double t, int df) {
    if (df < 1) throw domain_error("student_t_cdf: df >= 1 required");
    if (std::isnan(t)) throw domain_error("student_t_cdf: NaN argument");
    const double nu = static_cast<double>(df);
    if (std::fabs(t) < 1e-3) {
        // near zero the beta-function argument nu/(nu + t^2) rounds to 1 and
        // loses all resolution; a short odd Taylor series keeps full accuracy
        const double f0 = std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) /
                          std::sqrt(nu * M_PI);
        const double t3 = t * t * t;
        return 0.5 + f0 * (t - (nu + 1.0) / (6.0 * nu) * t3);
    }
    const double x = nu / (nu + t * t);
    const double half_tail = 0.5 * detail::regularized_beta(x, 0.5 * nu, 0.5);
    return t > 0.0 ? 1.0 - half_tail : half_tail;
}

inline double chi_squared_cdf(double q, int df) {
    if (df < 1) throw domain_error("chi_squared_cdf: df >= 1 required");
    if (std::isnan(q)) throw domain_error("chi_squared_cdf: NaN argument");
    if (q <= 0.0) return 0.0;
    if (std::isinf(q)) return 1.0;
    return detail::regularized_gamma_p(0.5 * static_cast<double>(df), 0.5 * q);
}

// ---------------------------------------------------------------------------
// Binomial tails by direct stable summation (no normal approximation)
// ---------------------------------------------------------------------------

namespace detail {

// Sum of binomial pmf over k in [k_lo, k_hi], anchored at the largest term of
// the block and walked outward with the multiplicative recurrence so that big
// terms carry few recurrence steps.  Kahan-compensated.
inline double binomial_block_sum(long long n, double theta, long long k_lo, long long k_hi) {
    if (k_lo > k_hi) return 0.0;
    k_lo = std::max<long long>(k_lo, 0);
    k_hi = std::min<long long>(k_hi, n);
    if (k_lo > k_hi) return 0.0;
    if (theta <= 0.0) return (k_lo == 0) ? 1.0 : 0.0;
    if (theta >= 1.0) return (k_hi == n) ? 1.0 : 0.0;

    const double logp = std::log(theta), logq = std::log1p(-theta);
    auto log_pmf = [&](long long k) {
        return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
               std::lgamma(static_cast<double>(n - k) + 1.0) + static_cast<double>(k) * logp +
               static_cast<double>(n - k) * logq;
    };
    const long long mode = std::clamp(static_cast<long long>(std::floor((n + 1) * theta)), k_lo, k_hi);
    const double anchor = std::exp(log_pmf(mode));

    double sum = anchor, comp = 0.0;
    auto accumulate = [&](double term) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    const double odds = theta / (1.0 - theta);
    // walk down from the anchor
    double term = anchor;
    for (long long k = mode; k > k_lo; --k) {
        term *= static_cast<double>(k) / (static_cast<double>(n - k + 1) * odds);
        if (term == 0.0) break;
        accumulate(term);
    }
    // walk up from the anchor
    term = anchor;
    for (long long k = mode; k < k_hi; ++k) {
        term *= (static_cast<double>(n - k) * odds) / static_cast<double>(k + 1);
        if (term == 0.0) break;
        accumulate(term);
    }
    return std::min(1.0, sum);
}

} // namespace detail

// P(X > x) for X ~ Binomial(n, theta).  Exact summation from the smaller
// tail; accurate to ~1e-12 absolute for n up to 1e6.
inline double binomial_tail_gt(long long n, double theta, long long x) {
    if (n < 0) throw domain_error("binomial_tail_gt: n >= 0 required");
    if (!(theta >= 0.0 && theta <= 1.0)) throw domain_error("binomial_tail_gt: theta in [0, 1] required");
    if (x < 0) return 1.0;
    if (x >= n) return 0.0;
    const double mean = static_cast<double>(n) * theta;
    if (static_cast<double>(x) + 1.0 > mean) {
        return detail::binomial_block_sum(n, theta, x + 1, n);
    }
    return detail::clamp01(1.0 - detail::binomial_block_sum(n, theta, 0, x));
}

inline double binomial_pmf(long long n, double theta, long long k) {
    if (k < 0 || k > n) return 0.0;
    return detail::binomial_block_sum(n, theta, k, k);
}

// ---------------------------------------------------------------------------
// special_cdf dispatcher
// ---------------------------------------------------------------------------

struct SpecialCdf {
    enum class Kind { std_normal, student_t, chi_squared, binomial_tail };
    Kind kind = Kind::std_normal;
    int df = 0;           // student_t, chi_squared
    long long n = 0;      // binomial_tail
    double theta = 0.0;   // binomial_tail

    static SpecialCdf std_normal() { return {Kind::std_normal, 0, 0, 0.0}; }
    static SpecialCdf student_t(int df) { return {Kind::student_t, df, 0, 0.0}; }
    static SpecialCdf chi_squared(int df) { return {Kind::chi_squared, df, 0, 0.0}; }
    static SpecialCdf binomial_tail(long long n, double theta) {
        return {Kind::binomial_tail, 0, n, theta};
    }
};

// For continuous kinds returns the CDF at arg; for binomial_tail, arg is the
// integer x and the return is P(X > x) (nonincreasing in x).
inline double special_cdf(const SpecialCdf& spec, double arg) {
    switch (spec.kind) {
    case SpecialCdf::Kind::std_normal:
        return std_normal_cdf(arg);
    case SpecialCdf::Kind::student_t:
        return student_t_cdf(arg, spec.df);
    case SpecialCdf::Kind::chi_squared:
        return chi_squared_cdf(arg, spec.df);
    case SpecialCdf::Kind::binomial_tail:
        return binomial_tail_gt(spec.n, spec.theta, static_cast<long long>(std::llround(arg)));
    }
    throw argument_error("special_cdf: unknown kind");
}

// ---------------------------------------------------------------------------
// Monotone inversion
// ---------------------------------------------------------------------------

// Solve f(theta) = target for monotone f on [lo, hi].  Guarded bisection:
// p-value functions can be flat on intervals, so no derivative method is
// used.  Throws range_error (with the achievable extremes) when target lies
// outside [min(f(lo), f(hi)), max(f(lo), f(hi))].
inline double invert_monotone(const std::function<double(double)>& f, double lo, double hi,
                              double target, const ToleranceConfig& tol = {}) {
    tol.validate();
    if (!(lo <= hi)) throw argument_error("invert_monotone: lo <= hi required");
    double flo = f(lo), fhi = f(hi);
    const bool increasing = flo <= fhi;
    const double fmin = std::min(flo, fhi), fmax = std::max(flo, fhi);
    if (target < fmin || target > fmax)
        throw range_error("invert_monotone: target outside achievable range", fmin, fmax);
    if (flo == target) return lo;
    if (fhi == target) return hi;

    double a = lo, b = hi;
    for (int i = 0; i < tol.max_iter; ++i) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (std::fabs(fm - target) <= tol.abs_tol) return mid;
        const bool go_right = increasing ? (fm < target) : (fm > target);
        if (go_right) a = mid; else b = mid;
        if (b - a <= tol.rel_tol * std::max(1.0, std::fabs(mid))) return 0.5 * (a + b);
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Adaptive quadrature (Gauss-Kronrod 7-15), infinite endpoints by transform
// ---------------------------------------------------------------------------

namespace detail {

struct GK15Result {
    double value;
    double error;
};

inline GK15Result gk15(const std::function<double(double)>& f, double a, double b) {
    // Kronrod-15 nodes/weights on [-1, 1] and the embedded Gauss-7 weights.
    static const double xk[8] = {0.0,
                                 0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
                                 0.7415311855993945, 0.8648644233597691, 0.9491079123427585,
                                 0.9914553711208126};
    static const double wk[8] = {0.2094821410847278,
                                 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
                                 0.1406532597155259, 0.1047900103222502, 0.0630920926299786,
                                 0.0229353220105292};
    static const double wg[4] = {0.4179591836734694, 0.3818300505051189,
                                 0.2797053914892767, 0.1294849661688697};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double f0 = f(c);
    double resk = wk[0] * f0;
    double resg = wg[0] * f0;
    for (int j = 1; j < 8; ++j) {
        const double fl = f(c - h * xk[j]);
        const double fr = f(c + h * xk[j]);
        resk += wk[j] * (fl + fr);
        if (j % 2 == 0) resg += wg[j / 2] * (fl + fr);
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

inline double integrate_finite(const std::function<double(double)>& f, double a, double b,
                               const ToleranceConfig& tol) {
    struct Panel {
        double a, b, value, error;
    };
    const GK15Result first = gk15(f, a, b);
    std::vector<Panel> panels{{a, b, first.value, first.error}};
    double total_value = first.value, total_error = first.error;
    for (int refinement = 0; refinement < tol.max_iter; ++refinement) {
        if (total_error <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(total_value))) {
            double v = 0.0;
            for (const Panel& p : panels) v += p.value;
            return v;
        }
        // split the worst panel
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].error > panels[worst].error) worst = i;
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) break; // cannot refine further in double
        const GK15Result left = gk15(f, p.a, mid);
        const GK15Result right = gk15(f, mid, p.b);
        total_value += left.value + right.value - p.value;
        total_error += left.error + right.error - p.error;
        panels[worst] = {p.a, mid, left.value, left.error};
        panels.push_back({mid, p.b, right.value, right.error});
    }
    double v = 0.0;
    for (const Panel& p : panels) v += p.value;
    if (total_error <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(v))) return v;
    throw accuracy_error("integrate: did not reach tolerance within max_iter refinements", v);
}

} // namespace detail

// Definite integral of f over (a, b); a = -inf and/or b = +inf are allowed
// and handled by rational transforms onto (0, 1).
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const ToleranceConfig& tol = {}) {
    tol.validate();
    if (!(a <= b)) throw argument_error("integrate: a <= b required");
    if (a == b) return 0.0;
    const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) return detail::integrate_finite(f, a, b, tol);
    if (lo_inf && hi_inf) {
        return integrate(f, a, 0.0, tol) + integrate(f, 0.0, b, tol);
    }
    if (!lo_inf) {
        // (a, +inf): theta = a + t/(1-t)
        auto g = [&f, a](double t) {
            const double om = 1.0 - t;
            return f(a + t / om) / (om * om);
        };
        return detail::integrate_finite(g, 0.0, 1.0, tol);
    }
    // (-inf, b): theta = b - t/(1-t)
    auto g = [&f, b](double t) {
        const double om = 1.0 - t;
        return f(b - t / om) / (om * om);
    };
    return detail::integrate_finite(g, 0.0, 1.0, tol);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov distance to the uniform CDF on [0, 1]
// ---------------------------------------------------------------------------

inline double ks_distance_to_uniform(std::vector<double> sample) {
    if (sample.empty()) throw argument_error("ks_distance_to_uniform: empty sample");
    std::sort(sample.begin(), sample.end());
    const double m = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double u = detail::clamp01(sample[i]);
        d = std::max(d, std::max((static_cast<double>(i) + 1.0) / m - u,
                                 u - static_cast<double>(i) / m));
    }
    return d;
}

} // namespace confidence
