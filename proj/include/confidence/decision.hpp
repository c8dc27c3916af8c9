#pragma once

// Loss-based decision operators: expected loss under a single confidence
// measure, expectation intervals over a metameasure, the dominance partial
// order, and the betting-odds acceptance rule.
//
// Expected-loss routes by declared loss structure:
//   - indicator / piecewise-constant losses evaluate exactly through region
//     probabilities,
//   - smooth losses integrate by parts against the CDF (quadrature),
//   - everything else falls back to seeded Monte Carlo with a reported
//     standard error.

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "confidence/metameasure.hpp"

namespace confidence {

class LossFunction {
public:
    enum class Kind { smooth, indicator, piecewise_constant, generic };

    static LossFunction smooth(std::function<double(double)> f,
                               std::function<double(double)> df = nullptr) {
        LossFunction loss;
        loss.kind_ = Kind::smooth;
        loss.fn_ = std::move(f);
        loss.dfn_ = std::move(df);
        return loss;
    }

    static LossFunction constant(double c) {
        return smooth([c](double) { return c; }, [](double) { return 0.0; });
    }

    // inside_value on the region, outside_value elsewhere.
    static LossFunction indicator(Region region, double inside_value = 1.0,
                                  double outside_value = 0.0) {
        LossFunction loss;
        loss.kind_ = Kind::indicator;
        loss.region_ = std::move(region);
        loss.inside_ = inside_value;
        loss.outside_ = outside_value;
        loss.fn_ = [r = loss.region_, in = inside_value, out = outside_value](double t) {
            return r.contains(t) ? in : out;
        };
        return loss;
    }

    // values[i] on the cell between breaks[i-1] and breaks[i]; breaks are
    // strictly increasing interior points, values.size() == breaks.size()+1.
    static LossFunction piecewise_constant(std::vector<double> breaks,
                                           std::vector<double> values) {
        if (values.size() != breaks.size() + 1)
            throw argument_error("piecewise_constant: need one more value than breaks");
        for (std::size_t i = 1; i < breaks.size(); ++i)
            if (!(breaks[i - 1] < breaks[i]))
                throw argument_error("piecewise_constant: breaks must be strictly increasing");
        LossFunction loss;
        loss.kind_ = Kind::piecewise_constant;
        loss.breaks_ = std::move(breaks);
        loss.values_ = std::move(values);
        loss.fn_ = [b = loss.breaks_, v = loss.values_](double t) {
            std::size_t cell = std::upper_bound(b.begin(), b.end(), t) - b.begin();
            return v[cell];
        };
        return loss;
    }

    // Declared non-smooth: expected loss uses seeded Monte Carlo.
    static LossFunction monte_carlo(std::function<double(double)> f) {
        LossFunction loss;
        loss.kind_ = Kind::generic;
        loss.fn_ = std::move(f);
        return loss;
    }

    double operator()(double theta) const { return fn_(theta); }
    Kind kind() const { return kind_; }

    double derivative(double theta) const {
        if (dfn_) return dfn_(theta);
        const double h = 1e-6 * std::max(1.0, std::fabs(theta));
        return (fn_(theta + h) - fn_(theta - h)) / (2.0 * h);
    }

    const Region& region() const { return region_; }
    double inside_value() const { return inside_; }
    double outside_value() const { return outside_; }
    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }

private:
    LossFunction() = default;
    Kind kind_ = Kind::generic;
    std::function<double(double)> fn_;
    std::function<double(double)> dfn_;
    Region region_;
    double inside_ = 0.0, outside_ = 0.0;
    std::vector<double> breaks_;
    std::vector<double> values_;
};

struct Action {
    int id = 0;
    LossFunction loss;
};

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int n_draws = 0;
};

// ---------------------------------------------------------------------------
// Expected loss
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kDefaultLossSeed = 0x10552024ull;
inline constexpr int kDefaultLossDraws = 100000;

// Integration by parts against the CDF:
//   E[L] = L(c) + int_c^hi L'(t) (1 - F(t)) dt - int_lo^c L'(t) F(t) dt
// with c the (clamped) median.  Valid for any distribution on the domain,
// boundary atoms included, for L continuously differentiable.
inline double expected_smooth(const ConfidenceMeasure& m, const LossFunction& loss,
                              const ToleranceConfig& tol) {
    const Interval& dom = m.domain();
    const double c = clamped_quantile(m, 0.5);
    double result = loss(c);
    try {
        if (c < dom.hi)
            result += integrate(
                [&](double t) { return loss.derivative(t) * (1.0 - m.cdf(t)); }, c, dom.hi, tol);
        if (dom.lo < c)
            result -= integrate([&](double t) { return loss.derivative(t) * m.cdf(t); }, dom.lo,
                                c, tol);
    } catch (const accuracy_error&) {
        throw moment_error("expected_loss: quadrature diverged; loss may not be integrable");
    }
    return result;
}

inline double expected_piecewise(const ConfidenceMeasure& m, const LossFunction& loss) {
    const Interval& dom = m.domain();
    const std::vector<double>& breaks = loss.breaks();
    const std::vector<double>& values = loss.values();
    double total = 0.0;
    for (std::size_t cell = 0; cell < values.size(); ++cell) {
        const double lo = cell == 0 ? dom.lo : breaks[cell - 1];
        const double hi = cell == breaks.size() ? dom.hi : breaks[cell];
        if (hi <= dom.lo || lo >= dom.hi) continue; // cell outside the domain
        const RegionPiece piece{std::max(lo, dom.lo), std::min(hi, dom.hi),
                                std::isinf(std::max(lo, dom.lo)),
                                cell == breaks.size() ? std::isinf(dom.hi) : true};
        total += values[cell] * prob(m, Region({piece}));
    }
    return total;
}

} // namespace detail

inline MonteCarloEstimate expected_loss_mc(const ConfidenceMeasure& m, const LossFunction& loss,
                                           int n_draws, SeededStream& stream) {
    if (n_draws <= 0) throw argument_error("expected_loss_mc: n_draws >= 1 required");
    const auto draws = sample(m, n_draws, stream);
    double mean = 0.0, m2 = 0.0;
    int count = 0;
    for (double t : draws) {
        const double v = loss(t);
        ++count;
        const double delta = v - mean;
        mean += delta / count;
        m2 += delta * (v - mean);
    }
    const double var = count > 1 ? m2 / (count - 1) : 0.0;
    return {mean, std::sqrt(var / count), n_draws};
}

inline double expected_loss(const ConfidenceMeasure& m, const LossFunction& loss,
                            const ToleranceConfig& tol = {1e-10, 1e-10, 400}) {
    switch (loss.kind()) {
    case LossFunction::Kind::indicator: {
        const double p = prob(m, loss.region());
        return loss.inside_value() * p + loss.outside_value() * (1.0 - p);
    }
    case LossFunction::Kind::piecewise_constant:
        return detail::expected_piecewise(m, loss);
    case LossFunction::Kind::smooth:
        return detail::expected_smooth(m, loss, tol);
    case LossFunction::Kind::generic: {
        SeededStream stream(detail::kDefaultLossSeed);
        return expected_loss_mc(m, loss, detail::kDefaultLossDraws, stream).value;
    }
    }
    throw argument_error("expected_loss: unknown loss kind");
}

// ---------------------------------------------------------------------------
// Expectation intervals and dominance
// ---------------------------------------------------------------------------

struct RealInterval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

// Smallest closed interval containing the expected loss under every member
// of the convex family: the mixture is affine in D, so the endpoints are
// attained at the valid and nonconservative members.
inline RealInterval expectation_interval(const ConfidenceMetameasure& mm,
                                         const LossFunction& loss,
                                         const ToleranceConfig& tol = {1e-10, 1e-10, 400}) {
    const double ev = expected_loss(mm.valid(), loss, tol);
    const double en = expected_loss(mm.nonconservative(), loss, tol);
    return {std::min(ev, en), std::max(ev, en)};
}

// a dominates b iff every expectation of a is <= every expectation of b and
// some pair is strict: sup E(a) <= inf E(b) and inf E(a) < sup E(b).
inline bool dominates(const Action& a, const Action& b, const ConfidenceMetameasure& mm,
                      const ToleranceConfig& tol = {1e-10, 1e-10, 400}) {
    const RealInterval ea = expectation_interval(mm, a.loss, tol);
    const RealInterval eb = expectation_interval(mm, b.loss, tol);
    return ea.hi <= eb.lo && ea.lo < eb.hi;
}

inline std::vector<Action> non_dominated_set(const std::vector<Action>& actions,
                                             const ConfidenceMetameasure& mm,
                                             const ToleranceConfig& tol = {1e-10, 1e-10, 400}) {
    if (actions.empty()) throw argument_error("non_dominated_set: empty action list");
    for (std::size_t i = 0; i < actions.size(); ++i)
        for (std::size_t j = i + 1; j < actions.size(); ++j)
            if (actions[i].id == actions[j].id)
                throw argument_error("non_dominated_set: duplicate action ids");
    std::vector<RealInterval> intervals;
    intervals.reserve(actions.size());
    for (const Action& a : actions) intervals.push_back(expectation_interval(mm, a.loss, tol));
    std::vector<Action> keep;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < actions.size() && !dominated; ++j) {
            if (i == j) continue;
            dominated = intervals[j].hi <= intervals[i].lo && intervals[j].lo < intervals[i].hi;
        }
        if (!dominated) keep.push_back(actions[i]);
    }
    return keep;
}

// Minimizes expected loss under a single measure; ties go to the lowest id.
inline Action argmin_expected_loss(const ConfidenceMeasure& m, const std::vector<Action>& actions,
                                   const ToleranceConfig& tol = {1e-10, 1e-10, 400}) {
    if (actions.empty()) throw argument_error("argmin_expected_loss: empty action list");
    std::size_t best = 0;
    double best_loss = expected_loss(m, actions[0].loss, tol);
    for (std::size_t i = 1; i < actions.size(); ++i) {
        const double e = expected_loss(m, actions[i].loss, tol);
        if (e < best_loss || (e == best_loss && actions[i].id < actions[best].id)) {
            best = i;
            best_loss = e;
        }
    }
    return actions[best];
}

// Accepts the hypothesis iff the fair betting odds strictly exceed the
// cost/benefit ratio; certainty accepts, impossibility rejects.
inline bool accept_hypothesis(const ConfidenceMeasure& m, const Region& region,
                              double cost_benefit_ratio) {
    if (!(cost_benefit_ratio > 0.0))
        throw argument_error("accept_hypothesis: cost/benefit ratio must be positive");
    const double p = prob(m, region);
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return p / (1.0 - p) > cost_benefit_ratio;
}

} // namespace confidence
