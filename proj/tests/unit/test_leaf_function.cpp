#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "besov/errors.hpp"
#include "besov/leaf_function.hpp"

using namespace besov;

namespace {

GridPtr dyadic(int depth) { return std::make_shared<const Grid>(build_dyadic(depth)); }

}  // namespace

TEST_CASE("sampling builtins") {
    const GridPtr g = dyadic(3);
    const LeafFunction one = sample(g, 3, Generator::parse("constant(1)"));
    for (int i = 0; i < 8; ++i) CHECK(one.value(i) == 1.0);

    const LeafFunction ind = sample(g, 3, Generator::parse("indicator(0,0.5)"));
    for (int i = 0; i < 4; ++i) CHECK(ind.value(i) == 1.0);
    for (int i = 4; i < 8; ++i) CHECK(ind.value(i) == 0.0);

    const LeafFunction r1 = sample(g, 3, Generator::parse("random_leaf(1)"));
    const LeafFunction r2 = sample(g, 3, Generator::parse("random_leaf(1)"));
    CHECK(r1.values() == r2.values());
    CHECK(r1.values().cwiseAbs().maxCoeff() <= 1.0);

    const LeafFunction lin = sample(g, 1, Generator::parse("linear"));
    CHECK(lin.value(0) == 0.25);
    CHECK(sample(g, 1, Generator::parse("power(2)")).value(1) == doctest::Approx(0.5625));
    CHECK_THROWS_AS(sample(g, 1, Generator::parse("bogus")), ParameterError);
}

TEST_CASE("interval builtin on a non-interval grid") {
    std::vector<std::vector<Cell>> levels(1);
    Cell root;
    root.measure = 1.0;
    levels[0].push_back(root);
    const auto g = std::make_shared<const Grid>(GridKind::explicit_tree, levels);
    CHECK_THROWS_AS(sample(g, 0, Generator::parse("indicator(0,0.5)")), ParameterError);
    CHECK_NOTHROW(sample(g, 0, Generator::parse("constant(2)")));
}

TEST_CASE("lp norms") {
    const GridPtr g = dyadic(3);
    const LeafFunction one = sample(g, 3, Generator::parse("constant(1)"));
    for (double p : {1.0, 1.5, 2.0, 7.0}) CHECK(lp_norm(one, p) == doctest::Approx(1.0).epsilon(1e-14));
    const LeafFunction ind = sample(g, 3, Generator::parse("indicator(0,0.5)"));
    CHECK(lp_norm(ind, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(lp_norm(ind, Exponent::infinity()) == 1.0);
    const LeafFunction r = sample(g, 3, Generator::parse("random_leaf(4)"));
    CHECK(lp_norm(r * -3.0, 1.5) == doctest::Approx(3.0 * lp_norm(r, 1.5)).epsilon(1e-13));
}

TEST_CASE("refine preserves norms and integrals") {
    RandomGridOptions o;
    o.min_children = 2;
    o.max_children = 4;
    o.lambda = 0.1;
    o.Lambda = 0.7;
    o.depth = 5;
    o.seed = 3;
    const auto g = std::make_shared<const Grid>(build_random_good(o));
    for (int t = 0; t < 50; ++t) {
        const int K = t % 5;
        Generator gen = Generator::parse("random_leaf");
        gen.seed = static_cast<std::uint64_t>(t);
        const LeafFunction f = sample(g, K, gen);
        const LeafFunction fr = refine(f, K + 1);
        // independent recomputation of the refined norm from the parent values
        for (double p : {1.0, 2.0, 3.5}) {
            double acc = 0.0;
            for (const Cell& c : g->level(K + 1))
                acc += std::pow(std::abs(f.value(c.parent->index)), p) * c.measure;
            CHECK(lp_norm(fr, p) == doctest::Approx(std::pow(acc, 1.0 / p)).epsilon(1e-12));
            CHECK(lp_norm(fr, p) == doctest::Approx(lp_norm(f, p)).epsilon(1e-12));
        }
        for (int k = 0; k <= K; ++k)
            CHECK((fr.level_integrals(k) - f.level_integrals(k)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    const LeafFunction f = sample(g, 2, Generator::parse("random_leaf(9)"));
    CHECK(refine(f, 2).values() == f.values());
    CHECK_THROWS_AS(refine(f, 6), ParameterError);
}

TEST_CASE("integration is exact and linear") {
    const GridPtr g = dyadic(4);
    const LeafFunction f = sample(g, 4, Generator::parse("random_leaf(1)"));
    const LeafFunction h = sample(g, 4, Generator::parse("random_leaf(2)"));
    const double a = 0.3;
    const double b = -1.7;
    const double lhs = (f * a + h * b).integral();
    const double rhs = a * f.integral() + b * h.integral();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    double manual = 0.0;
    for (int i = 4; i < 8; ++i) manual += f.value(i) / 16.0;
    CHECK(f.cell_integral({2, 1}) == doctest::Approx(manual).epsilon(1e-14));
    CHECK(f.level_integrals(0)[0] == doctest::Approx(f.integral()).epsilon(1e-14));
}
