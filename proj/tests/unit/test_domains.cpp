#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "besov/domains.hpp"
#include "besov/errors.hpp"
#include "besov/norms.hpp"

using namespace besov;

namespace {

GridPtr dyadic(int depth) { return std::make_shared<const Grid>(build_dyadic(depth)); }

BesovParams params(double s, double p, Exponent q) {
    BesovParams b;
    b.s = s;
    b.p = p;
    b.q = q;
    return b;
}

std::pair<double, double> random_interval(std::mt19937_64& rng, int depth) {
    const int n = 1 << depth;
    std::uniform_int_distribution<int> pick(0, n);
    int i = pick(rng);
    int j = pick(rng);
    while (i == j) j = pick(rng);
    if (i > j) std::swap(i, j);
    return {static_cast<double>(i) / n, static_cast<double>(j) / n};
}

LeafFunction indicator(const GridPtr& g, int level, double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << "indicator(" << a << "," << b << ")";
    return sample(g, level, Generator::parse(os.str()));
}

}  // namespace

TEST_CASE("interval decomposition examples") {
    const GridPtr g = dyadic(6);
    const RegularityReport half = interval_regular_decompose(0.0, 0.5, *g, 0.7);
    CHECK(half.passed);
    CHECK(half.k0 == 1);
    REQUIRE(half.families.size() == 2);
    CHECK(half.families[1].size() == 1);
    CHECK(half.families[1][0] == CellId{1, 0});

    const RegularityReport tq = interval_regular_decompose(0.0, 0.75, *g, 0.7);
    CHECK(tq.passed);
    REQUIRE(tq.families.size() == 3);
    CHECK(tq.families[1] == std::vector<CellId>{{1, 0}});
    CHECK(tq.families[2] == std::vector<CellId>{{2, 2}});
    CHECK(tq.level_sums[1] == doctest::Approx(std::pow(0.5, 0.7)));
    CHECK(tq.level_sums[2] == doctest::Approx(std::pow(0.25, 0.7)));
    CHECK(tq.allowed[2] == doctest::Approx(2.0 * std::pow(2.0, -0.7) * std::pow(0.75, 0.7)));

    CHECK_THROWS_AS(interval_regular_decompose(0.5, 0.5, *g, 0.7), ParameterError);
    CHECK_THROWS_AS(interval_regular_decompose(0.0, 0.3, *g, 0.7), ParameterError);
}

TEST_CASE("random intervals are regular with (2, 2^(s-1)) and tile exactly") {
    const int depth = 10;
    const GridPtr g = dyadic(depth);
    std::mt19937_64 rng(17);
    for (double s : {0.2, 0.5}) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto [a, b] = random_interval(rng, depth);
            const RegularityReport r = interval_regular_decompose(a, b, *g, 1.0 - s);
            CHECK(r.tiles);
            CHECK(r.passed);
            CHECK(r.c == doctest::Approx(std::pow(2.0, s - 1.0)));
            double covered = 0.0;
            std::vector<int> hits(1 << depth, 0);
            for (const auto& level : r.families)
                for (const CellId id : level) {
                    covered += g->cell(id).measure;
                    const IndexRange leaves = g->descendants(id, depth);
                    for (int i = leaves.begin; i < leaves.end; ++i) ++hits[i];
                }
            CHECK(covered == doctest::Approx(b - a).epsilon(1e-12));
            for (int i = 0; i < (1 << depth); ++i) {
                const double mid = (i + 0.5) / (1 << depth);
                CHECK(hits[i] == (mid > a && mid < b ? 1 : 0));
            }
        }
    }
}

TEST_CASE("indicator norm bound") {
    const GridPtr g = dyadic(8);
    const BesovParams bp = params(0.3, 1.0, Exponent(1.0));
    const RegularityReport half = interval_regular_decompose(0.0, 0.5, *g, 0.7);
    CHECK(indicator_norm_bound(half, bp) == doctest::Approx(3.2025).epsilon(1e-4));
    CHECK(indicator_norm_bound(half, bp) ==
          doctest::Approx(2.0 / (1.0 - std::pow(2.0, -0.7)) * std::pow(0.5, 0.7)).epsilon(1e-14));

    const RegularityReport whole = interval_regular_decompose(0.0, 1.0, *g, 0.7);
    CHECK(whole.k0 == 0);
    const BesovParams b2 = params(0.3, 2.0, Exponent(3.0));
    CHECK(indicator_norm_bound(whole, b2) ==
          doctest::Approx(std::sqrt(2.0) / std::cbrt(1.0 - std::pow(std::pow(2.0, -0.7), 1.5))));
    CHECK(indicator_norm_bound(whole, params(0.3, 2.0, Exponent::infinity())) == doctest::Approx(std::sqrt(2.0)));

    const RegularityReport flat = interval_regular_decompose(0.0, 0.5, *g, 0.7, 2.0, 1.0);
    CHECK_THROWS_AS(indicator_norm_bound(flat, bp), ParameterError);
}

TEST_CASE("indicator bracket stays below the regular-domain bound") {
    const int depth = 8;
    const GridPtr g = dyadic(depth);
    const GridGeometry geo = validate_good(*g);
    const HaarSystem h = build_haar(g);
    std::mt19937_64 rng(23);
    for (double s : {0.2, 0.5}) {
        const BesovParams bp = params(s, 1.0, Exponent(1.0));
        const ConstantsReport c = equivalence_constants(geo, bp);
        for (int trial = 0; trial < 100; ++trial) {
            const auto [a, b] = random_interval(rng, depth);
            const RegularityReport r = interval_regular_decompose(a, b, *g, 1.0 - s);
            const LeafFunction ind = indicator(g, depth, a, b);
            CHECK(bracket_lower(ind, bp, c) <= indicator_norm_bound(r, bp));
        }
    }
}

TEST_CASE("interval representations") {
    const int depth = 7;
    const GridPtr g = dyadic(depth);
    const BesovParams bp = params(0.4, 1.0, Exponent(1.0));

    const IntervalRepCost one = interval_rep_cost({{1.0, 0.0, 0.5}}, g, bp);
    CHECK(one.cost == 1.0);
    CHECK(one.souza_cost == doctest::Approx(1.0));

    const IntervalRepCost none = interval_rep_cost({}, g, bp);
    CHECK(none.cost == 0.0);
    CHECK(none.souza.synthesize(depth).values().cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<IntervalTerm> terms;
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(1 << depth);
        for (int t = 0; t < 4; ++t) {
            const auto [a, b] = random_interval(rng, depth);
            const double c = u(rng);
            terms.push_back({c, a, b});
            const LeafFunction ind = indicator(g, depth, a, b);
            expected += c * ind.values() / std::pow(b - a, 1.0 - bp.s);
        }
        const IntervalRepCost r = interval_rep_cost(terms, g, bp);
        CHECK((r.souza.synthesize(depth).values() - expected).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(r.souza_cost <= r.constant * r.cost * (1 + 1e-12));

        AtomicRepresentation rep = AtomicRepresentation::zero(g, bp);
        for (int k = 0; k <= depth; ++k)
            for (int i = 0; i < rep.coeffs[k].size(); ++i)
                if (u(rng) > 0.5) rep.coeffs[k][i] = u(rng);
        const std::vector<IntervalTerm> back = souza_as_interval_terms(rep);
        const IntervalRepCost again = interval_rep_cost(back, g, bp);
        CHECK(again.cost == doctest::Approx(rep.cost()).epsilon(1e-13));
        CHECK(again.souza_cost == doctest::Approx(rep.cost()).epsilon(1e-13));
    }
    CHECK_THROWS_AS(interval_rep_cost({}, g, params(0.4, 2.0, Exponent(1.0))), ParameterError);
}
