#pragma once

// A confidence metameasure pairs a valid and a nonconservative confidence
// measure on a common domain.  Every hypothesis (region) then carries a
// closed interval of confidence levels rather than a single level; the
// interval endpoints form a coherent lower/upper probability pair.

#include <utility>
#include <vector>

#include "confidence/measure.hpp"

namespace confidence {

struct ProbabilityInterval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
};

class ConfidenceMetameasure {
public:
    ConfidenceMetameasure(ConfidenceMeasure valid, ConfidenceMeasure nonconservative)
        : valid_(std::move(valid)), nonconservative_(std::move(nonconservative)) {
        if (!(valid_.domain() == nonconservative_.domain()))
            throw argument_error("ConfidenceMetameasure: member measures must share a domain");
    }

    const ConfidenceMeasure& valid() const { return valid_; }
    const ConfidenceMeasure& nonconservative() const { return nonconservative_; }
    const Interval& domain() const { return valid_.domain(); }

    // Numeric check that both member CDFs agree on a grid; degenerate
    // metameasures reduce every metalevel to a point.
    bool is_degenerate(int grid_n = 257, double tol = 1e-12) const {
        const double a = detail::limit_point(domain().lo);
        const double b = detail::limit_point(domain().hi);
        for (int i = 0; i <= grid_n; ++i) {
            // tangent-spaced grid so infinite domains get sensible coverage
            const double frac = static_cast<double>(i) / grid_n;
            const double t = std::isinf(domain().lo) || std::isinf(domain().hi)
                                 ? std::tan(M_PI * (frac - 0.5)) * 10.0
                                 : a + (b - a) * frac;
            const double u = std::min(std::max(t, a), b);
            if (std::fabs(valid_.cdf(u) - nonconservative_.cdf(u)) > tol) return false;
        }
        return true;
    }

private:
    ConfidenceMeasure valid_;
    ConfidenceMeasure nonconservative_;
};

// Convenience: the metameasure of the binomial construction for observed x,
// pairing the C = 0 (valid) and C = 1 (nonconservative) members.
inline ConfidenceMetameasure binomial_metameasure(long long n, long long x) {
    return ConfidenceMetameasure(
        from_pvalue_function(BinomialFamily(n, x, 0.0).pvalue_function()),
        from_pvalue_function(BinomialFamily(n, x, 1.0).pvalue_function()));
}

// [min, max] of the valid and nonconservative confidence levels.
inline ProbabilityInterval metalevel(const ConfidenceMetameasure& mm, const Region& region) {
    const double pv = prob(mm.valid(), region);
    const double pn = prob(mm.nonconservative(), region);
    return {std::min(pv, pn), std::max(pv, pn)};
}

// Width of the metalevel: the degree of conservatism of the estimator pair.
inline double indeterminacy(const ConfidenceMetameasure& mm, const Region& region) {
    return metalevel(mm, region).width();
}

// Pointwise CDF mixture (1 - D) * valid + D * nonconservative: the member
// P_D of the convex family generated by the pair.
inline ConfidenceMeasure reduce_mixture(const ConfidenceMetameasure& mm, double D) {
    if (!(D >= 0.0 && D <= 1.0)) throw argument_error("reduce_mixture: D in [0, 1] required");
    const ConfidenceMeasure v = mm.valid();
    const ConfidenceMeasure n = mm.nonconservative();
    return ConfidenceMeasure(mm.domain(), [v, n, D](double t) {
        return (1.0 - D) * v.cdf(t) + D * n.cdf(t);
    });
}

// Lebesgue average of the convex family, which is simply the D = 1/2
// mixture; for the binomial construction its region probabilities coincide
// with the half-corrected (C = 1/2) family's.
inline ConfidenceMeasure reduce_convex_mean(const ConfidenceMetameasure& mm) {
    return reduce_mixture(mm, 0.5);
}

// ---------------------------------------------------------------------------
// Coherence checks
// ---------------------------------------------------------------------------

struct DualityReport {
    int n_regions = 0;
    int n_disjoint_pairs = 0;
    double max_duality_violation = 0.0;        // |lo(A) + hi(domain \ A) - 1|
    double max_superadditivity_violation = 0.0; // lo(A) + lo(B) - lo(A u B), clipped at 0
    double max_subadditivity_violation = 0.0;   // hi(A u B) - hi(A) - hi(B), clipped at 0

    double max_violation() const {
        return std::max({max_duality_violation, max_superadditivity_violation,
                         max_subadditivity_violation});
    }
};

// Verifies, for each region A, the duality lo(A) + hi(domain \ A) = 1, and
// on every disjoint pair from the list the superadditivity of the lower and
// subadditivity of the upper probability.  Report-only.
inline DualityReport duality_check(const ConfidenceMetameasure& mm,
                                   const std::vector<Region>& regions) {
    DualityReport report;
    report.n_regions = static_cast<int>(regions.size());
    for (const Region& a : regions) {
        const Region comp = a.complement_within(mm.domain());
        const double sum = metalevel(mm, a).lo + metalevel(mm, comp).hi;
        report.max_duality_violation =
            std::max(report.max_duality_violation, std::fabs(sum - 1.0));
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
        for (std::size_t j = i + 1; j < regions.size(); ++j) {
            if (regions[i].intersects(regions[j])) continue;
            ++report.n_disjoint_pairs;
            const Region u = Region::union_of(regions[i], regions[j]);
            const ProbabilityInterval li = metalevel(mm, regions[i]);
            const ProbabilityInterval lj = metalevel(mm, regions[j]);
            const ProbabilityInterval lu = metalevel(mm, u);
            report.max_superadditivity_violation = std::max(
                report.max_superadditivity_violation, (li.lo + lj.lo) - lu.lo);
            report.max_subadditivity_violation = std::max(
                report.max_subadditivity_violation, lu.hi - (li.hi + lj.hi));
        }
    }
    report.max_superadditivity_violation = std::max(0.0, report.max_superadditivity_violation);
    report.max_subadditivity_violation = std::max(0.0, report.max_subadditivity_violation);
    return report;
}

} // namespace confidence
