#include "doctest.h"

#include <cmath>

#include "besov/errors.hpp"
#include "besov/grid.hpp"

using namespace besov;

TEST_CASE("dyadic grid shapes") {
    const Grid g = build_dyadic(2);
    CHECK(g.depth() == 2);
    CHECK(g.level_size(0) == 1);
    CHECK(g.level_size(1) == 2);
    CHECK(g.level_size(2) == 4);
    for (const Cell& c : g.level(2)) CHECK(c.measure == 0.25);

    const Grid g0 = build_dyadic(0);
    CHECK(g0.depth() == 0);
    CHECK(g0.root().measure == 1.0);
    CHECK_FALSE(validate_good(g0).has_ratios);
}

TEST_CASE("dyadic geometry") {
    for (int depth : {3, 4}) {
        const GridGeometry geo = validate_good(build_dyadic(depth));
        CHECK(geo.lambda_min == 0.5);
        CHECK(geo.lambda_max == 0.5);
        CHECK(geo.overlap_bound == 1);
        for (int k = 0; k <= depth; ++k) CHECK(geo.level_max_measure[k] == std::ldexp(1.0, -k));
    }
}

TEST_CASE("dyadic intervals and descendants") {
    const Grid g = build_dyadic(3);
    const Cell& c = g.cell({2, 1});
    CHECK(c.interval->lo == 0.25);
    CHECK(c.interval->hi == 0.5);
    const IndexRange r = g.descendants({1, 1}, 3);
    CHECK(r.begin == 4);
    CHECK(r.end == 8);
    CHECK(g.ancestor({3, 5}, 1) == CellId{1, 1});
    CHECK(g.contains({1, 0}, {3, 3}));
    CHECK_FALSE(g.contains({1, 0}, {3, 4}));
    CHECK(decode_cell_id(encode({3, 5})) == CellId{3, 5});
}

TEST_CASE("random good grid respects the requested ratios") {
    RandomGridOptions o;
    o.min_children = 2;
    o.max_children = 3;
    o.lambda = 0.2;
    o.Lambda = 0.8;
    o.depth = 4;
    o.seed = 7;
    const Grid g = build_random_good(o);
    const GridGeometry geo = validate_good(g);
    CHECK(geo.lambda_min >= 0.2 - 1e-12);
    CHECK(geo.lambda_max <= 0.8 + 1e-12);

    double lo = 1.0;
    double hi = 0.0;
    for (int k = 0; k < g.depth(); ++k) {
        for (const Cell& c : g.level(k)) {
            double sum = 0.0;
            for (const Cell& ch : g.children(c)) {
                lo = std::min(lo, ch.measure / c.measure);
                hi = std::max(hi, ch.measure / c.measure);
                sum += ch.measure;
            }
            CHECK(std::abs(sum - c.measure) <= 1e-12 * c.measure);
        }
    }
    CHECK(geo.lambda_min == lo);
    CHECK(geo.lambda_max == hi);
    for (int k = 1; k <= g.depth(); ++k)
        CHECK(geo.level_max_measure[k] <= std::pow(geo.lambda_max, k) * (1 + 1e-12));
}

TEST_CASE("random grid is reproducible and forced ratios give dyadic measures") {
    RandomGridOptions o;
    o.lambda = 0.5;
    o.Lambda = 0.5;
    o.depth = 3;
    o.seed = 12345;
    const Grid g = build_random_good(o);
    for (const Cell& c : g.level(3)) CHECK(c.measure == 0.125);

    o.lambda = 0.3;
    o.Lambda = 0.7;
    o.seed = 99;
    const Grid a = build_random_good(o);
    const Grid b = build_random_good(o);
    for (int k = 0; k <= a.depth(); ++k)
        for (int i = 0; i < a.level_size(k); ++i) CHECK(a.level(k)[i].measure == b.level(k)[i].measure);
}

TEST_CASE("infeasible ratio bounds are rejected") {
    RandomGridOptions o;
    o.lambda = 0.6;
    o.Lambda = 0.7;
    CHECK_THROWS_AS(build_random_good(o), ParameterError);
}

TEST_CASE("single child cell is reported") {
    std::vector<std::vector<Cell>> levels(2);
    Cell root;
    root.id = {0, 0};
    root.measure = 1.0;
    root.first_child = 0;
    root.child_count = 1;
    levels[0].push_back(root);
    Cell child;
    child.id = {1, 0};
    child.parent = CellId{0, 0};
    child.measure = 1.0;
    levels[1].push_back(child);
    const Grid g(GridKind::explicit_tree, levels);
    try {
        validate_good(g);
        FAIL("expected a violation");
    } catch (const GridViolation& e) {
        CHECK(e.condition() == "needs >= 2 children");
        CHECK(e.cell().find("level 0") != std::string::npos);
    }
}

TEST_CASE("children not summing to the parent is a G3 violation") {
    Grid base = build_dyadic(1);
    std::vector<std::vector<Cell>> levels{{base.level(0).begin(), base.level(0).end()},
                                          {base.level(1).begin(), base.level(1).end()}};
    levels[1][1].measure = 0.4;
    const Grid g(GridKind::explicit_tree, levels);
    try {
        validate_good(g);
        FAIL("expected a violation");
    } catch (const GridViolation& e) {
        CHECK(e.condition() == "G3");
    }
}

TEST_CASE("induced grid") {
    const Grid g = build_dyadic(4);
    const Grid sub = induced_grid(g, {2, 3});
    CHECK(sub.depth() == 2);
    CHECK(sub.root().measure == 0.25);
    CHECK(sub.level_size(2) == 4);
    CHECK(sub.level(2)[0].interval->lo == 0.75);
    const GridGeometry geo = validate_good(sub);
    CHECK(geo.lambda_min == 0.5);
}
