#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "confidence/metameasure.hpp"

using namespace confidence;
using Catch::Approx;

static ConfidenceMetameasure degenerate_normal() {
    auto m = from_pvalue_function(NormalMeanFamily(4, 0.0, 1.0).pvalue_function());
    return ConfidenceMetameasure(m, m);
}

// Random sub-region of [0, 1]: one to three intervals with random openness.
static Region random_unit_region(SeededStream& stream) {
    const int pieces = 1 + static_cast<int>(stream.uniform() * 3.0);
    std::vector<RegionPiece> ps;
    for (int i = 0; i < pieces; ++i) {
        double a = stream.uniform(), b = stream.uniform();
        if (a > b) std::swap(a, b);
        ps.push_back({a, b, stream.uniform() < 0.5, stream.uniform() < 0.5});
    }
    return Region(std::move(ps));
}

TEST_CASE("metalevel: hand-enumerated binomial case and edges") {
    auto mm = binomial_metameasure(1, 1);
    const auto level = metalevel(mm, Region::interval(0.25, 0.75));
    CHECK(level.lo == Approx(0.0).margin(1e-14));
    CHECK(level.hi == Approx(0.5).margin(1e-14));

    const auto whole = metalevel(mm, Region::whole(mm.domain()));
    CHECK(whole.lo == 1.0);
    CHECK(whole.hi == 1.0);

    auto deg = degenerate_normal();
    CHECK(deg.is_degenerate());
    for (double a : {-1.0, -0.2, 0.4}) {
        const auto l = metalevel(deg, Region::interval(a, a + 0.7));
        CHECK(l.lo == l.hi);
    }

    CHECK_THROWS_AS(metalevel(mm, Region::interval(0.5, 2.0)), domain_error);
}

TEST_CASE("indeterminacy: shrinks with more observations") {
    const Region central = Region::interval(0.25, 0.75);
    CHECK(indeterminacy(binomial_metameasure(1, 1), central) == Approx(0.5).margin(1e-14));
    CHECK(indeterminacy(degenerate_normal(), Region::interval(-1.0, 1.0)) == 0.0);

    const double at100 = indeterminacy(binomial_metameasure(100, 67), central);
    const double at10 = indeterminacy(binomial_metameasure(10, 7), central);
    const double at1 = indeterminacy(binomial_metameasure(1, 1), central);
    CHECK(at100 < 0.1);
    CHECK(at100 < at10);
    CHECK(at10 < at1);
}

TEST_CASE("reduce_mixture: endpoints recover the members") {
    auto mm = binomial_metameasure(5, 3);
    auto at0 = reduce_mixture(mm, 0.0);
    auto at1 = reduce_mixture(mm, 1.0);
    for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        CHECK(at0.cdf(t) == Approx(mm.valid().cdf(t)).margin(1e-15));
        CHECK(at1.cdf(t) == Approx(mm.nonconservative().cdf(t)).margin(1e-15));
    }
    CHECK_THROWS_AS(reduce_mixture(mm, -0.1), argument_error);
    CHECK_THROWS_AS(reduce_mixture(mm, 1.1), argument_error);
}

TEST_CASE("reduce_mixture: half mixture on the unit binomial case") {
    auto mm = binomial_metameasure(1, 1);
    auto half = reduce_mixture(mm, 0.5);
    CHECK(prob(half, Region::interval(0.25, 0.75)) == Approx(0.25).margin(1e-14));
}

TEST_CASE("reduce_convex_mean: equals the half-corrected family") {
    const Region central = Region::interval(0.25, 0.75);
    {
        auto mm = binomial_metameasure(1, 1);
        auto mean_measure = reduce_convex_mean(mm);
        CHECK(prob(mean_measure, central) == Approx(0.25).margin(1e-14));
        auto half_family = from_pvalue_function(BinomialFamily(1, 1, 0.5).pvalue_function());
        CHECK(prob(mean_measure, central) == Approx(prob(half_family, central)).margin(1e-10));
    }
    // the identity holds across n with x = ceil(2n/3)
    for (long long n : {2, 7, 25, 60, 100}) {
        const long long x = static_cast<long long>(std::ceil(2.0 * n / 3.0));
        auto mm = binomial_metameasure(n, x);
        auto mean_measure = reduce_convex_mean(mm);
        auto half_family = from_pvalue_function(BinomialFamily(n, x, 0.5).pvalue_function());
        CHECK(prob(mean_measure, central) == Approx(prob(half_family, central)).margin(1e-10));
        const auto level = metalevel(mm, central);
        CHECK(level.lo <= prob(mean_measure, central) + 1e-12);
        CHECK(prob(mean_measure, central) <= level.hi + 1e-12);
    }

    auto deg = degenerate_normal();
    auto reduced = reduce_convex_mean(deg);
    for (double t : {-1.0, 0.0, 2.0})
        CHECK(reduced.cdf(t) == Approx(deg.valid().cdf(t)).margin(1e-15));
    CHECK(prob(reduced, Region::whole(deg.domain())) == 1.0);
}

TEST_CASE("mixture levels stay inside the metalevel for random D") {
    auto mm = binomial_metameasure(9, 4);
    SeededStream stream(4242);
    for (int rep = 0; rep < 100; ++rep) {
        const Region r = random_unit_region(stream);
        const double D = stream.uniform();
        const auto level = metalevel(mm, r);
        const double mixed = prob(reduce_mixture(mm, D), r);
        CHECK(level.lo <= mixed + 1e-12);
        CHECK(mixed <= level.hi + 1e-12);
    }
}

TEST_CASE("duality_check: hand case where the complement absorbs the atom") {
    auto mm = binomial_metameasure(1, 1);
    const Region a = Region::interval(0.25, 0.75);
    CHECK(metalevel(mm, a).lo == 0.0);
    CHECK(metalevel(mm, a.complement_within(mm.domain())).hi == 1.0);
    const auto report = duality_check(mm, {a});
    CHECK(report.max_duality_violation < 1e-14);
}

TEST_CASE("duality_check: 200 random regions on Binomial(10, 7)") {
    auto mm = binomial_metameasure(10, 7);
    SeededStream stream(9001);
    std::vector<Region> regions;
    for (int i = 0; i < 200; ++i) regions.push_back(random_unit_region(stream));
    const auto report = duality_check(mm, regions);
    CHECK(report.n_regions == 200);
    CHECK(report.n_disjoint_pairs > 0);
    CHECK(report.max_violation() < 1e-10);
}

TEST_CASE("duality_check: degenerate metameasure has no violations") {
    auto deg = degenerate_normal();
    std::vector<Region> regions = {Region::interval(-1.0, 0.0), Region::interval(0.5, 1.5),
                                   Region::interval(-3.0, -2.0)};
    const auto report = duality_check(deg, regions);
    CHECK(report.max_violation() < 1e-12);
}

TEST_CASE("constructor rejects mismatched domains") {
    auto binom = from_pvalue_function(BinomialFamily(3, 1, 0.0).pvalue_function());
    auto normal = from_pvalue_function(NormalMeanFamily(4, 0.0, 1.0).pvalue_function());
    CHECK_THROWS_AS(ConfidenceMetameasure(binom, normal), argument_error);
}
