#pragma once

// Upper/lower-tail p-value functions for a scalar interest parameter, the
// canonical representation of a nested set estimator's confidence content.
// The upper-tail function is a CDF in theta; the lower tail is always its
// complement.  Three built-in families cover the normal mean, the binomial
// success probability with a C-corrected tail, and the norm of a
// multivariate normal mean.

#include <cmath>
#include <concepts>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "confidence/numerics.hpp"
#include "confidence/random.hpp"
#include "confidence/region.hpp"

namespace confidence {

enum class Exactness { exact, approximate };
enum class Tail { upper, lower };

namespace detail {

// Evaluation proxy for (possibly) infinite endpoints: monotone CDFs in theta
// are flat far beyond the data scale, so a large finite magnitude stands in
// for the limit.
inline double limit_point(double endpoint) {
    if (std::isinf(endpoint)) return endpoint < 0.0 ? -1e300 : 1e300;
    return endpoint;
}

// Smallest theta in [lo, hi] with nondecreasing F(theta) >= p.  The caller
// guarantees p is attainable at or before hi.  Bisection only: p-value
// functions can be flat on intervals.
inline double monotone_quantile(const std::function<double(double)>& F, double lo, double hi,
                                double p, const ToleranceConfig& tol = {}) {
    double a, b;
    if (std::isinf(lo)) {
        double ref = std::isinf(hi) ? 0.0 : hi;
        double step = 1.0;
        a = ref - step;
        while (F(a) >= p) {
            b = a;
            step *= 2.0;
            a = ref - step;
            if (a < -1e300) return -kInf;
        }
        b = ref;
        if (std::isinf(hi)) {
            // also need F(b) >= p on the right
            step = 1.0;
            while (F(b) < p) {
                a = b;
                b = step;
                step *= 2.0;
                if (b > 1e300) return kInf;
            }
        }
    } else {
        if (F(lo) >= p) return lo;
        a = lo;
        if (std::isinf(hi)) {
            double step = std::max(1.0, std::fabs(lo));
            b = lo + step;
            while (F(b) < p) {
                a = b;
                step *= 2.0;
                b = lo + step;
                if (b > 1e300) return kInf;
            }
        } else {
            b = hi;
        }
    }
    for (int i = 0; i < tol.max_iter && b - a > std::max(tol.abs_tol, tol.rel_tol * std::max(1.0, std::fabs(b))); ++i) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (F(mid) >= p) b = mid; else a = mid;
    }
    return b;
}

} // namespace detail

class PValueFunction {
public:
    PValueFunction(Interval domain, std::function<double(double)> upper_tail,
                   Exactness exactness, std::string provenance)
        : domain_(domain),
          upper_(std::move(upper_tail)),
          exactness_(exactness),
          provenance_(std::move(provenance)) {
        range_lo_ = detail::clamp01(upper_(detail::limit_point(domain_.lo)));
        range_hi_ = detail::clamp01(upper_(detail::limit_point(domain_.hi)));
        if (range_hi_ < range_lo_)
            throw argument_error("PValueFunction: upper tail must be nondecreasing on the domain");
    }

    const Interval& domain() const { return domain_; }
    Exactness exactness() const { return exactness_; }
    const std::string& provenance() const { return provenance_; }

    // Attainable closed range of the upper tail over the domain.
    double range_lo() const { return range_lo_; }
    double range_hi() const { return range_hi_; }

    // Unchecked evaluation (clamped to [0,1]); callers go through eval().
    double upper_unchecked(double theta) const { return detail::clamp01(upper_(theta)); }

private:
    Interval domain_;
    std::function<double(double)> upper_;
    Exactness exactness_;
    std::string provenance_;
    double range_lo_, range_hi_;
};

// ---------------------------------------------------------------------------
// Built-in families
// ---------------------------------------------------------------------------

// Normal data with unknown variance: the p-value function of the mean is the
// t_{n-1} CDF of (theta - mean) sqrt(n) / sd.  Exact.
struct NormalMeanFamily {
    int n;
    double sample_mean;
    double sample_sd;

    NormalMeanFamily(int n, double sample_mean, double sample_sd)
        : n(n), sample_mean(sample_mean), sample_sd(sample_sd) {
        if (n < 2) throw argument_error("NormalMeanFamily: n >= 2 required");
        if (!(sample_sd > 0.0)) throw argument_error("NormalMeanFamily: sample_sd > 0 required");
    }

    double upper_tail(double theta) const {
        return student_t_cdf((theta - sample_mean) * std::sqrt(static_cast<double>(n)) / sample_sd,
                             n - 1);
    }

    PValueFunction pvalue_function() const {
        return PValueFunction({-detail::kInf, detail::kInf},
                              [fam = *this](double theta) { return fam.upper_tail(theta); },
                              Exactness::exact, "normal mean, n=" + std::to_string(n));
    }

    // One replicate of the forward simulation at (true_theta, sd = nuisance):
    // draws a dataset of size n and returns the upper-tail p-value at
    // true_theta.
    double simulate_pvalue(double true_theta, double nuisance, SeededStream& stream) const {
        if (!(nuisance > 0.0)) throw domain_error("NormalMeanFamily: simulation needs sd > 0");
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = stream.normal(true_theta, nuisance);
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / n;
        const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1));
        const double sd = std::sqrt(var);
        return student_t_cdf((true_theta - mean) * std::sqrt(static_cast<double>(n)) / sd, n - 1);
    }
};

// Binomial trials with a C-corrected upper tail
//   p(theta) = P_theta(X > x) + C * P_theta(X = x).
// C = 0 gives the valid member, C = 1 the nonconservative member, C = 1/2
// the half-corrected approximation.
struct BinomialFamily {
    long long n;
    long long x;
    double correction;

    BinomialFamily(long long n, long long x, double correction)
        : n(n), x(x), correction(correction) {
        if (n < 1) throw argument_error("BinomialFamily: n >= 1 required");
        if (x < 0 || x > n) throw argument_error("BinomialFamily: x in [0, n] required");
        if (!(correction >= 0.0 && correction <= 1.0))
            throw argument_error("BinomialFamily: correction in [0, 1] required");
    }

    double upper_tail(double theta) const {
        return binomial_tail_gt(n, theta, x) + correction * binomial_pmf(n, theta, x);
    }

    PValueFunction pvalue_function() const {
        return PValueFunction({0.0, 1.0},
                              [fam = *this](double theta) { return fam.upper_tail(theta); },
                              Exactness::approximate,
                              "binomial, n=" + std::to_string(n) + ", x=" + std::to_string(x));
    }

    double simulate_pvalue(double true_theta, double /*nuisance*/, SeededStream& stream) const {
        if (!(true_theta >= 0.0 && true_theta <= 1.0))
            throw domain_error("BinomialFamily: true_theta in [0, 1] required");
        const long long draw = stream.binomial(n, true_theta);
        return binomial_tail_gt(n, true_theta, draw) +
               correction * binomial_pmf(n, true_theta, draw);
    }
};

// Norm of a dim-variate normal mean with identity covariance: the hypothesis
// theta >= theta' has p-value chi2_dim((|x| / theta')^2), giving the CDF
//   F(theta) = 1 - chi2_dim((|x| / theta)^2)   for theta > 0.
// Approximate (the exact law of |X|^2 is noncentral chi-squared).
struct NormNormalFamily {
    int dim;
    double norm_obs;

    NormNormalFamily(int dim, double norm_obs) : dim(dim), norm_obs(norm_obs) {
        if (dim < 1) throw argument_error("NormNormalFamily: dim >= 1 required");
        if (!(norm_obs >= 0.0)) throw argument_error("NormNormalFamily: norm_obs >= 0 required");
    }

    double upper_tail(double theta) const {
        if (theta <= 0.0) return 0.0;
        if (norm_obs == 0.0) return 1.0;
        const double r = norm_obs / theta;
        return 1.0 - chi_squared_cdf(r * r, dim);
    }

    PValueFunction pvalue_function() const {
        return PValueFunction({0.0, detail::kInf},
                              [fam = *this](double theta) { return fam.upper_tail(theta); },
                              Exactness::approximate, "norm of " + std::to_string(dim) +
                                                          "-variate normal mean");
    }

    double simulate_pvalue(double true_theta, double /*nuisance*/, SeededStream& stream) const {
        if (!(true_theta > 0.0)) throw domain_error("NormNormalFamily: true_theta > 0 required");
        double normsq = 0.0;
        for (int i = 0; i < dim; ++i) {
            double z = stream.normal();
            if (i == 0) z += true_theta;
            normsq += z * z;
        }
        return 1.0 - chi_squared_cdf(normsq / (true_theta * true_theta), dim);
    }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline double eval(const PValueFunction& pf, double theta, Tail tail) {
    if (std::isnan(theta) || !pf.domain().contains(theta))
        throw domain_error("eval: theta outside the parameter domain");
    const double up = pf.upper_unchecked(theta);
    return tail == Tail::upper ? up : 1.0 - up;
}

// Smallest theta with upper_tail(theta) >= alpha (left-continuous
// generalized inverse, ties toward -inf).
inline double invert(const PValueFunction& pf, double alpha, const ToleranceConfig& tol = {}) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw argument_error("invert: alpha must be a probability");
    if (alpha > pf.range_hi())
        throw range_error("invert: alpha above the attainable range of the upper tail",
                          pf.range_lo(), pf.range_hi());
    if (alpha <= pf.range_lo()) return pf.domain().lo;
    auto F = [&pf](double t) { return pf.upper_unchecked(t); };
    return detail::monotone_quantile(F, pf.domain().lo, pf.domain().hi, alpha, tol);
}

// Two-sided p-value of the hypothesis that theta lies in a central region:
//   2 sup_{theta' in region} min(lower(theta'), upper(theta')), clamped.
inline double two_sided_p(const PValueFunction& pf, const Region& region,
                          const ToleranceConfig& tol = {}) {
    if (region.empty()) throw argument_error("two_sided_p: empty region");
    if (!region.contained_in(pf.domain()))
        throw domain_error("two_sided_p: region not contained in the domain");
    auto balance = [&pf](double theta) {
        const double up = pf.upper_unchecked(theta);
        return std::min(up, 1.0 - up);
    };
    double best = 0.0;
    for (const RegionPiece& piece : region.pieces()) {
        const double fa = pf.upper_unchecked(detail::limit_point(piece.lo));
        const double fb = pf.upper_unchecked(detail::limit_point(piece.hi));
        double cand;
        if (fb <= 0.5) {
            cand = std::min(fb, 1.0 - fb);
        } else if (fa >= 0.5) {
            cand = std::min(fa, 1.0 - fa);
        } else {
            // upper tail crosses 1/2 inside the piece
            auto F = [&pf](double t) { return pf.upper_unchecked(t); };
            const double cross = detail::monotone_quantile(F, piece.lo, piece.hi, 0.5, tol);
            cand = balance(cross);
            // guard a jump over 1/2: check just below the crossing as well
            const double below = std::nextafter(cross, piece.lo);
            if (below >= piece.lo) cand = std::max(cand, balance(below));
        }
        best = std::max(best, cand);
    }
    return detail::clamp01(2.0 * best);
}

// ---------------------------------------------------------------------------
// Exactness audit
// ---------------------------------------------------------------------------

struct AuditReport {
    double ks_distance = 0.0;
    int n_sims = 0;
};

template <class Family>
concept ForwardSimulable = requires(const Family& f, double t, double g, SeededStream& s) {
    { f.simulate_pvalue(t, g, s) } -> std::convertible_to<double>;
};

// Simulates n_sims datasets at (true_theta, nuisance), evaluates the
// upper-tail p-value at true_theta each time, and reports the
// Kolmogorov-Smirnov distance to the uniform CDF on [0, 1].  Replicates use
// per-replicate derived streams, so the result does not depend on execution
// order.
template <ForwardSimulable Family>
AuditReport exactness_audit(const Family& proto, double true_theta, double nuisance, int n_sims,
                            const SeededStream& stream) {
    if (n_sims <= 0) throw argument_error("exactness_audit: n_sims >= 1 required");
    std::vector<double> pvals(static_cast<std::size_t>(n_sims));
    for (int i = 0; i < n_sims; ++i) {
        SeededStream sub = stream.substream(static_cast<std::uint64_t>(i));
        pvals[static_cast<std::size_t>(i)] = proto.simulate_pvalue(true_theta, nuisance, sub);
    }
    return {ks_distance_to_uniform(std::move(pvals)), n_sims};
}

inline AuditReport exactness_audit(const PValueFunction&, double, double, int,
                                   const SeededStream&) {
    throw capability_error("exactness_audit: this p-value function has no forward simulator");
}

} // namespace confidence
