#pragma once

// The confidence measure (frequentist posterior): a probability measure on
// the parameter line defined by a CDF.  Region probabilities are sums of CDF
// differences; for valid/nonconservative discrete constructions the CDF can
// be mass-deficient, in which case the missing mass sits as atoms at the
// finite domain endpoints (the full domain always has probability one).
// Interior openness flags never matter for the continuous-interior CDFs
// built here; endpoint flags decide whether a boundary atom is counted.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "confidence/pvalue.hpp"

namespace confidence {

class ConfidenceMeasure {
public:
    ConfidenceMeasure(Interval domain, std::function<double(double)> cdf)
        : domain_(domain), cdf_(std::move(cdf)) {
        cdf_lo_ = detail::clamp01(cdf_(detail::limit_point(domain_.lo)));
        cdf_hi_ = detail::clamp01(cdf_(detail::limit_point(domain_.hi)));
        if (cdf_hi_ < cdf_lo_)
            throw argument_error("ConfidenceMeasure: cdf must be nondecreasing");
    }

    const Interval& domain() const { return domain_; }
    double cdf(double theta) const { return detail::clamp01(cdf_(theta)); }

    // Attainable CDF range over the domain.
    double cdf_lo() const { return cdf_lo_; }
    double cdf_hi() const { return cdf_hi_; }

    // 1 - (cdf(sup domain) - cdf(inf domain)); positive for deficient
    // discrete constructions.  Surfaced as a diagnostic.
    double mass_deficiency() const { return 1.0 - (cdf_hi_ - cdf_lo_); }

private:
    Interval domain_;
    std::function<double(double)> cdf_;
    double cdf_lo_, cdf_hi_;
};

// The CDF of the frequentist posterior is the upper-tail p-value function.
inline ConfidenceMeasure from_pvalue_function(const PValueFunction& pf) {
    return ConfidenceMeasure(pf.domain(), [pf](double t) { return pf.upper_unchecked(t); });
}

// ---------------------------------------------------------------------------
// Region probability
// ---------------------------------------------------------------------------

inline double prob(const ConfidenceMeasure& m, const Region& region) {
    if (region.empty()) return 0.0;
    const Interval& dom = m.domain();
    if (!region.contained_in(dom)) throw domain_error("prob: region not contained in the domain");
    if (region.covers(dom)) return 1.0;
    double total = 0.0;
    for (const RegionPiece& piece : region.pieces()) {
        double lower_val, upper_val;
        if (piece.lo <= dom.lo && !piece.lo_open && std::isfinite(dom.lo))
            lower_val = 0.0; // include the lower boundary atom, if any
        else
            lower_val = m.cdf(detail::limit_point(piece.lo));
        if (piece.hi >= dom.hi && !piece.hi_open && std::isfinite(dom.hi))
            upper_val = 1.0; // include the upper boundary atom, if any
        else
            upper_val = m.cdf(detail::limit_point(piece.hi));
        total += upper_val - lower_val;
    }
    return detail::clamp01(total);
}

// ---------------------------------------------------------------------------
// Quantiles
// ---------------------------------------------------------------------------

namespace detail {

// Generalized inverse clamped to the domain: targets at or below the
// attainable infimum give the lower endpoint, targets above the attainable
// supremum give the upper endpoint.  Used where degenerate discrete cases
// must map to endpoint intervals rather than errors.
inline double clamped_quantile(const ConfidenceMeasure& m, double p,
                               const ToleranceConfig& tol = {}) {
    if (p <= m.cdf_lo()) return m.domain().lo;
    if (p > m.cdf_hi()) return m.domain().hi;
    auto F = [&m](double t) { return m.cdf(t); };
    return monotone_quantile(F, m.domain().lo, m.domain().hi, p, tol);
}

} // namespace detail

// Smallest theta with cdf(theta) >= p, for p strictly inside (0, 1) and
// within the attainable CDF range.
inline double quantile(const ConfidenceMeasure& m, double p, const ToleranceConfig& tol = {}) {
    if (!(p > 0.0 && p < 1.0))
        throw range_error("quantile: p must lie strictly inside (0, 1)", m.cdf_lo(), m.cdf_hi());
    if (p > m.cdf_hi())
        throw range_error("quantile: p above the attainable cdf range", m.cdf_lo(), m.cdf_hi());
    return detail::clamped_quantile(m, p, tol);
}

// ---------------------------------------------------------------------------
// Mean
// ---------------------------------------------------------------------------

// Posterior mean.  On a finite domain the boundary atoms of deficient
// measures are included, via E = hi - int_lo^hi F.  On infinite domains the
// pivot identity E = c + int_c^hi (1 - F) - int_lo^c F is used; heavy tails
// are detected up front and reported as moment errors.
inline double mean(const ConfidenceMeasure& m, const ToleranceConfig& tol = {1e-11, 1e-11, 400}) {
    const Interval& dom = m.domain();
    auto F = [&m](double t) { return m.cdf(t); };
    try {
        if (std::isfinite(dom.lo) && std::isfinite(dom.hi))
            return dom.hi - integrate(F, dom.lo, dom.hi, tol);

        // tail decay pre-check: theta * tail-mass must vanish for the mean to exist
        if (std::isinf(dom.hi)) {
            const double t1 = 1e4 * (1.0 - m.cdf(1e4)), t2 = 1e8 * (1.0 - m.cdf(1e8));
            if (t2 > 0.5 * t1 && t2 > 1e-12)
                throw moment_error("mean: upper tail too heavy, first moment does not exist");
        }
        if (std::isinf(dom.lo)) {
            const double t1 = 1e4 * m.cdf(-1e4), t2 = 1e8 * m.cdf(-1e8);
            if (t2 > 0.5 * t1 && t2 > 1e-12)
                throw moment_error("mean: lower tail too heavy, first moment does not exist");
        }
        const double c = std::min(std::max(0.0, dom.lo), dom.hi);
        const double upper = integrate([&F](double t) { return 1.0 - F(t); }, c, dom.hi, tol);
        const double lower = integrate(F, dom.lo, c, tol);
        return c + upper - lower;
    } catch (const accuracy_error&) {
        throw moment_error("mean: quadrature failed to converge; moment may not exist");
    }
}

// ---------------------------------------------------------------------------
// Mode
// ---------------------------------------------------------------------------

// Argmax of the central-difference density estimate with the given step,
// refined by golden-section.  The caller chooses the bandwidth.  A grid scan
// enforces uniqueness: flat plateaus and separated near-maximal clusters are
// multimodality errors.
inline double mode(const ConfidenceMeasure& m, double bandwidth,
                   const ToleranceConfig& tol = {}) {
    if (!(bandwidth > 0.0)) throw argument_error("mode: bandwidth must be positive");
    if (m.mass_deficiency() > 0.5)
        throw capability_error("mode: measure is mostly boundary atoms, no interior density");
    const Interval& dom = m.domain();
    const double scan_lo = std::isfinite(dom.lo) ? dom.lo : detail::clamped_quantile(m, 0.001, tol);
    const double scan_hi = std::isfinite(dom.hi) ? dom.hi : detail::clamped_quantile(m, 0.999, tol);
    if (!(scan_lo < scan_hi)) throw capability_error("mode: degenerate scan range");

    auto density = [&](double t) {
        const double a = std::max(t - bandwidth, dom.lo);
        const double b = std::min(t + bandwidth, dom.hi);
        return (m.cdf(b) - m.cdf(a)) / (b - a);
    };

    const int grid_n = 512;
    std::vector<double> ds(grid_n + 1);
    double dmax = -1.0;
    int imax = 0;
    for (int i = 0; i <= grid_n; ++i) {
        const double t = scan_lo + (scan_hi - scan_lo) * i / grid_n;
        ds[static_cast<std::size_t>(i)] = density(t);
        if (ds[static_cast<std::size_t>(i)] > dmax) {
            dmax = ds[static_cast<std::size_t>(i)];
            imax = i;
        }
    }
    // uniqueness scan: collect near-maximal grid points
    const double near = dmax - std::max(1e-9, 1e-6 * std::fabs(dmax));
    int first = grid_n + 1, last = -1;
    bool separated = false;
    bool in_run = false;
    int runs = 0;
    for (int i = 0; i <= grid_n; ++i) {
        if (ds[static_cast<std::size_t>(i)] >= near) {
            first = std::min(first, i);
            last = std::max(last, i);
            if (!in_run) ++runs;
            in_run = true;
        } else {
            in_run = false;
        }
    }
    separated = runs > 1;
    if (separated || (last - first) > grid_n / 20)
        throw multimodality_error("mode: maximum of the density estimate is not unique");

    // golden-section refinement around the best grid cell
    double a = scan_lo + (scan_hi - scan_lo) * std::max(0, imax - 1) / grid_n;
    double b = scan_lo + (scan_hi - scan_lo) * std::min(grid_n, imax + 1) / grid_n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = density(x1), f2 = density(x2);
    for (int i = 0; i < 80 && (b - a) > tol.abs_tol + tol.rel_tol * std::fabs(b); ++i) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = density(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = density(x1);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

// Inverse-CDF sampling.  u is drawn uniformly on the attainable CDF range
// (deficient mass is never silently renormalized; sampling is refused when
// the deficiency exceeds 1/2).  Large requests amortize a monotone quantile
// table; draws falling in the outermost table cells fall back to bisection.
inline std::vector<double> sample(const ConfidenceMeasure& m, int k, SeededStream& stream,
                                  const ToleranceConfig& tol = {}) {
    if (k <= 0) throw argument_error("sample: k >= 1 required");
    if (m.mass_deficiency() > 0.5)
        throw capability_error("sample: refused, mass deficiency exceeds 1/2");
    const double ulo = m.cdf_lo(), uhi = m.cdf_hi();
    const double span = uhi - ulo;
    std::vector<double> out(static_cast<std::size_t>(k));

    if (k < 64) {
        for (int i = 0; i < k; ++i)
            out[static_cast<std::size_t>(i)] =
                detail::clamped_quantile(m, ulo + span * stream.uniform(), tol);
        return out;
    }

    const int table_n = 2048;
    std::vector<double> theta_at(static_cast<std::size_t>(table_n) + 1);
    for (int j = 1; j < table_n; ++j)
        theta_at[static_cast<std::size_t>(j)] =
            detail::clamped_quantile(m, ulo + span * j / table_n, tol);
    for (int i = 0; i < k; ++i) {
        const double r = stream.uniform();
        const double u = ulo + span * r;
        const int cell = static_cast<int>(r * table_n);
        if (cell <= 0 || cell >= table_n - 1) {
            out[static_cast<std::size_t>(i)] = detail::clamped_quantile(m, u, tol);
            continue;
        }
        const double w = r * table_n - cell;
        out[static_cast<std::size_t>(i)] =
            (1.0 - w) * theta_at[static_cast<std::size_t>(cell)] +
            w * theta_at[static_cast<std::size_t>(cell) + 1];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Set estimates
// ---------------------------------------------------------------------------

struct ParameterInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return lo >= hi; }
};

// Nested set estimate [quantile(alpha), quantile(alpha + rho)].  Quantile
// targets outside the attainable CDF range clamp to the domain endpoints, so
// degenerate discrete cases yield endpoint intervals; rho = 1 gives the
// whole domain and rho = 0 the empty (zero-width) interval.
inline ParameterInterval set_estimate(const ConfidenceMeasure& m, double rho, double alpha,
                                      const ToleranceConfig& tol = {}) {
    if (alpha < 0.0 || rho < 0.0 || alpha + rho > 1.0 + 1e-12)
        throw argument_error("set_estimate: need alpha >= 0, rho >= 0, alpha + rho <= 1");
    if (rho >= 1.0) return {m.domain().lo, m.domain().hi};
    if (rho == 0.0) {
        const double q = detail::clamped_quantile(m, alpha, tol);
        return {q, q};
    }
    return {detail::clamped_quantile(m, alpha, tol),
            detail::clamped_quantile(m, alpha + rho, tol)};
}

} // namespace confidence
