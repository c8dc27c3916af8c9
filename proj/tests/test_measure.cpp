#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "confidence/measure.hpp"

using namespace confidence;
using Catch::Approx;

static double t3_cdf(double t) {
    return 0.5 + (1.0 / M_PI) * (t / (std::sqrt(3.0) * (1.0 + t * t / 3.0)) +
                                 std::atan(t / std::sqrt(3.0)));
}

TEST_CASE("Region: normalization, merging, complement") {
    Region r({{0.5, 0.9, false, false}, {0.1, 0.5, false, true}});
    CHECK(r.pieces().size() == 1); // touching pieces merge
    CHECK(r.pieces()[0].lo == 0.1);
    CHECK(r.pieces()[0].hi == 0.9);

    Region gap({{0.1, 0.5, false, true}, {0.5, 0.9, true, false}});
    CHECK(gap.pieces().size() == 2); // both open at 0.5: disjoint
    CHECK_FALSE(gap.contains(0.5));
    CHECK(gap.contains(0.3));

    const Interval unit{0.0, 1.0};
    Region comp = gap.complement_within(unit);
    // complement is [0, 0.1) u {0.5} u (0.9, 1]
    REQUIRE(comp.pieces().size() == 3);
    CHECK(comp.contains(0.5));
    CHECK(comp.contains(0.0));
    CHECK(comp.contains(1.0));
    CHECK_FALSE(comp.contains(0.2));

    CHECK(Region::whole(unit).covers(unit));
    CHECK_THROWS_AS(Region({{0.4, 0.2, false, false}}), argument_error);
}

TEST_CASE("from_pvalue_function: cdf and deficiency") {
    auto normal = from_pvalue_function(NormalMeanFamily(4, 0.0, 1.0).pvalue_function());
    CHECK(normal.cdf(0.0) == Approx(0.5).margin(1e-14));
    CHECK(normal.mass_deficiency() == Approx(0.0).margin(1e-12));

    auto uniform = from_pvalue_function(BinomialFamily(1, 1, 1.0).pvalue_function());
    for (double t : {0.0, 0.25, 0.7, 1.0}) CHECK(uniform.cdf(t) == Approx(t).margin(1e-14));
    CHECK(uniform.mass_deficiency() == Approx(0.0).margin(1e-14));

    auto degenerate = from_pvalue_function(BinomialFamily(1, 1, 0.0).pvalue_function());
    CHECK(degenerate.cdf(0.5) == 0.0);
    CHECK(degenerate.mass_deficiency() == Approx(1.0).margin(1e-14));
}

TEST_CASE("prob: central interval of the normal-mean posterior") {
    auto m = from_pvalue_function(NormalMeanFamily(4, 0.0, 1.0).pvalue_function());
    CHECK(prob(m, Region::interval(-0.5, 0.5)) ==
          Approx(2.0 * t3_cdf(1.0) - 1.0).margin(1e-12));
    CHECK(prob(m, Region::interval(-0.5, 0.5)) == Approx(0.609).margin(5e-4));
    CHECK(prob(m, Region::whole(m.domain())) == 1.0);
    CHECK(prob(m, Region::point(0.3)) == 0.0);
}

TEST_CASE("prob: sphere-norm region via closed-form chi-squared") {
    auto m = from_pvalue_function(NormNormalFamily(2, 2.0).pvalue_function());
    CHECK(prob(m, Region::interval(1.0, 4.0, true, true)) ==
          Approx(std::exp(-0.125) - std::exp(-2.0)).margin(1e-12));
    CHECK(prob(m, Region::interval(1.0, 4.0, true, true)) == Approx(0.747162).margin(5e-7));
}

TEST_CASE("prob: domain errors and boundary atoms") {
    auto m = from_pvalue_function(BinomialFamily(1, 1, 0.0).pvalue_function());
    CHECK_THROWS_AS(prob(m, Region::interval(0.5, 1.5)), domain_error);
    // all deficient mass sits at the upper boundary: interior gets nothing
    CHECK(prob(m, Region::interval(0.25, 0.75)) == 0.0);
    CHECK(prob(m, Region::point(1.0)) == 1.0);
    CHECK(prob(m, Region::interval(0.75, 1.0, true, true)) == 0.0);
    CHECK(prob(m, Region::whole(m.domain())) == 1.0);
}

TEST_CASE("prob: finite additivity on random disjoint region pairs") {
    auto mb = from_pvalue_function(BinomialFamily(10, 7, 0.0).pvalue_function());
    auto mn = from_pvalue_function(NormalMeanFamily(5, 0.3, 1.2).pvalue_function());
    SeededStream stream(8675309);
    for (int rep = 0; rep < 500; ++rep) {
        double cuts[4];
        for (double& c : cuts) c = stream.uniform();
        std::sort(cuts, cuts + 4);
        const Region a = Region::interval(cuts[0], cuts[1], false, true);
        const Region b = Region::interval(cuts[2], cuts[3], true, false);
        Region both({{cuts[0], cuts[1], false, true}, {cuts[2], cuts[3], true, false}});
        CHECK(prob(mb, both) == Approx(prob(mb, a) + prob(mb, b)).margin(1e-12));
        CHECK(prob(mn, both) == Approx(prob(mn, a) + prob(mn, b)).margin(1e-12));
    }
}

TEST_CASE("prob: complement rule holds exactly, atoms included") {
    auto continuous = from_pvalue_function(NormalMeanFamily(4, 1.0, 2.0).pvalue_function());
    auto deficient = from_pvalue_function(BinomialFamily(3, 3, 0.0).pvalue_function());
    SeededStream stream(1234);
    for (int rep = 0; rep < 200; ++rep) {
        double a = stream.uniform(), b = stream.uniform();
        if (a > b) std::swap(a, b);
        const Region r = Region::interval(a, b);
        CHECK(prob(continuous, r) + prob(continuous, r.complement_within(continuous.domain())) ==
              Approx(1.0).margin(1e-12));
        CHECK(prob(deficient, r) + prob(deficient, r.complement_within(deficient.domain())) ==
              Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("quantile: examples and range errors") {
    auto mn = from_pvalue_function(NormalMeanFamily(4, 0.0, 1.0).pvalue_function());
    CHECK(quantile(mn, 0.5) == Approx(0.0).margin(1e-9));

    auto mu = from_pvalue_function(BinomialFamily(1, 1, 1.0).pvalue_function());
    CHECK(quantile(mu, 0.25) == Approx(0.25).margin(1e-9));

    CHECK_THROWS_AS(quantile(mn, 0.0), range_error);
    CHECK_THROWS_AS(quantile(mn, 1.0), range_error);
    auto deficient = from_pvalue_function(BinomialFamily(1, 1, 0.0).pvalue_function());
    CHECK_THROWS_AS(quantile(deficient, 0.5), range_error);
}

TEST_CASE("mean: symmetric families, uniform measure, heavy tails") {
    auto m3 = from_pvalue_function(NormalMeanFamily(4, 3.0, 1.0).pvalue_function());
    CHECK(mean(m3) == Approx(3.0).margin(1e-9));

    auto mu = from_pvalue_function(BinomialFamily(1, 1, 1.0).pvalue_function());
    CHECK(mean(mu) == Approx(0.5).margin(1e-9));

    // n = 2 gives a t_1 (Cauchy-type) posterior: no mean
    auto cauchy = from_pvalue_function(NormalMeanFamily(2, 0.0, 1.0).pvalue_function());
    CHECK_THROWS_AS(mean(cauchy), moment_error);
}

TEST_CASE("mean: boundary atoms are included on finite domains") {
    // valid family with x = n: all mass at theta = 1
    auto atom = from_pvalue_function(BinomialFamily(3, 3, 0.0).pvalue_function());
    CHECK(mean(atom) == Approx(1.0).margin(1e-9));
}

TEST_CASE("mode: symmetric, flat, and sphere-norm densities") {
    auto mn = from_pvalue_function(NormalMeanFamily(4, 0.0, 1.0).pvalue_function());
    CHECK(mode(mn, 1e-3) == Approx(0.0).margin(1e-3));

    auto mu = from_pvalue_function(BinomialFamily(1, 1, 1.0).pvalue_function());
    CHECK_THROWS_AS(mode(mu, 1e-3), multimodality_error);

    // closed-form density argmax at 2/sqrt(3) (fine-grid scan oracle agrees)
    auto sphere = from_pvalue_function(NormNormalFamily(2, 2.0).pvalue_function());
    CHECK(mode(sphere, 1e-4) == Approx(2.0 / std::sqrt(3.0)).margin(1e-3));

    CHECK_THROWS_AS(mode(mn, 0.0), argument_error);
}

TEST_CASE("sample: determinism, median and mean accuracy, refusals") {
    auto mn = from_pvalue_function(NormalMeanFamily(4, 0.0, 1.0).pvalue_function());
    {
        SeededStream s1(7, 2), s2(7, 2);
        CHECK(sample(mn, 1, s1)[0] == sample(mn, 1, s2)[0]);
    }
    {
        SeededStream s(11);
        auto draws = sample(mn, 100000, s);
        std::nth_element(draws.begin(), draws.begin() + draws.size() / 2, draws.end());
        CHECK(draws[draws.size() / 2] == Approx(0.0).margin(0.02));
    }
    {
        auto mu = from_pvalue_function(BinomialFamily(1, 1, 1.0).pvalue_function());
        SeededStream s(13);
        auto draws = sample(mu, 100000, s);
        double total = 0.0;
        for (double d : draws) total += d;
        CHECK(total / static_cast<double>(draws.size()) == Approx(0.5).margin(0.005));
    }
    {
        SeededStream s(1);
        CHECK_THROWS_AS(sample(mn, 0, s), argument_error);
        auto deficient = from_pvalue_function(BinomialFamily(1, 1, 0.2).pvalue_function());
        CHECK(deficient.mass_deficiency() > 0.5);
        CHECK_THROWS_AS(sample(deficient, 10, s), capability_error);
    }
}

TEST_CASE("set_estimate: central interval, endpoints, nesting") {
    auto mn = from_pvalue_function(NormalMeanFamily(4, 0.0, 1.0).pvalue_function());
    const auto central = set_estimate(mn, 0.95, 0.025);
    const double t975 = 3.182446305284263; // t quantile, df=3, p=0.975
    CHECK(central.lo == Approx(-t975 * 0.5).margin(1e-7));
    CHECK(central.hi == Approx(t975 * 0.5).margin(1e-7));

    const auto whole = set_estimate(mn, 1.0, 0.0);
    CHECK(std::isinf(whole.lo));
    CHECK(std::isinf(whole.hi));

    const auto none = set_estimate(mn, 0.0, 0.4);
    CHECK(none.lo == none.hi);

    SeededStream stream(5);
    for (int rep = 0; rep < 100; ++rep) {
        double r1 = stream.uniform(0.0, 0.6), r2 = stream.uniform(0.0, 0.6);
        if (r1 > r2) std::swap(r1, r2);
        const double alpha = stream.uniform(0.0, 1.0 - r2);
        const auto inner = set_estimate(mn, r1, alpha);
        const auto outer = set_estimate(mn, r2, alpha);
        CHECK(outer.lo <= inner.lo + 1e-12);
        CHECK(inner.hi <= outer.hi + 1e-12);
    }
}

TEST_CASE("set_estimate: exact coverage bounds by enumeration") {
    // sum binomial pmf over all x; valid family covers at >= rho,
    // nonconservative at <= rho
    const long long n = 10;
    for (double theta : {0.17, 0.5, 0.83}) {
        for (double rho : {0.5, 0.8, 0.95}) {
            double cover_valid = 0.0, cover_noncons = 0.0;
            for (long long x = 0; x <= n; ++x) {
                const double pmf = binomial_pmf(n, theta, x);
                const auto sv = set_estimate(
                    from_pvalue_function(BinomialFamily(n, x, 0.0).pvalue_function()), rho, 0.0);
                const auto sn = set_estimate(
                    from_pvalue_function(BinomialFamily(n, x, 1.0).pvalue_function()), rho, 0.0);
                if (sv.lo <= theta && theta <= sv.hi) cover_valid += pmf;
                if (sn.lo <= theta && theta <= sn.hi) cover_noncons += pmf;
            }
            CHECK(cover_valid >= rho - 1e-12);
            CHECK(cover_noncons <= rho + 1e-12);
        }
    }
}

TEST_CASE("set_estimate: degenerate discrete cases clamp to endpoints") {
    auto deficient = from_pvalue_function(BinomialFamily(3, 3, 0.0).pvalue_function());
    const auto s = set_estimate(deficient, 0.9, 0.0);
    CHECK(s.lo == 0.0);
    CHECK(s.hi == 1.0);
    CHECK_THROWS_AS(set_estimate(deficient, 0.7, 0.5), argument_error);
}
