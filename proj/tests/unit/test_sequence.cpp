#include "doctest.h"

#include <cmath>
#include <random>

#include "besov/sequence.hpp"

using namespace besov;

namespace {

LevelCoefficients levels(std::initializer_list<std::vector<double>> rows) {
    LevelCoefficients x;
    for (const auto& r : rows) x.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
    return x;
}

}  // namespace

TEST_CASE("mixed norm examples") {
    const LevelCoefficients x = levels({{1.0}, {1.0, 1.0}});
    CHECK(lq_lp_cost(x, Exponent(1), Exponent(1)) == 3.0);
    CHECK(lq_lp_cost(x, Exponent(2), Exponent::infinity()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(lq_lp_cost(levels({{0.0}, {0.0, 0.0}}), Exponent(2), Exponent(3)) == 0.0);
}

TEST_CASE("mixed norm is a norm") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        LevelCoefficients x;
        LevelCoefficients y;
        for (int k = 0; k < 4; ++k) {
            x.push_back(Eigen::VectorXd::NullaryExpr(1 << k, [&] { return n(rng); }));
            y.push_back(Eigen::VectorXd::NullaryExpr(1 << k, [&] { return n(rng); }));
        }
        const Exponent p(1.0 + (t % 5) * 0.5);
        const Exponent q = t % 3 == 0 ? Exponent::infinity() : Exponent(1.0 + (t % 4));
        LevelCoefficients sum = x;
        LevelCoefficients scaled = x;
        for (int k = 0; k < 4; ++k) {
            sum[k] += y[k];
            scaled[k] *= -2.5;
        }
        const double nx = lq_lp_cost(x, p, q);
        CHECK(lq_lp_cost(sum, p, q) <= (nx + lq_lp_cost(y, p, q)) * (1 + 1e-10));
        CHECK(std::abs(lq_lp_cost(scaled, p, q) - 2.5 * nx) <= 1e-10 * nx);
        LevelCoefficients bigger = x;
        bigger[2][1] = std::abs(bigger[2][1]) + 1.0;
        CHECK(lq_lp_cost(bigger, p, q) >= nx);
    }
}

TEST_CASE("Holder trick constants") {
    const NonnegSequence half = NonnegSequence::geometric(1.0, 0.5);
    const TrickConstant a1 = holder_trick_constant(1.0, Exponent(1.0), half);
    CHECK(a1.value == 1.0);
    CHECK(a1.case_tag == 'A');
    const TrickConstant a2 = holder_trick_constant(2.0, Exponent(2.0), NonnegSequence::geometric(1.0, 0.25));
    CHECK(a2.value == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-14));
    CHECK(holder_trick_constant(1.5, Exponent(2.0), NonnegSequence::finite({0, 0, 0})).value == 0.0);
    CHECK(holder_trick_constant(2.0, Exponent(0.5), half).case_tag == 'B');
    CHECK(holder_trick_constant(0.5, Exponent(2.0), half).case_tag == 'C');
    CHECK(holder_trick_constant(0.5, Exponent(0.5), half).case_tag == 'C');
    CHECK(holder_trick_constant(0.5, Exponent(0.25), half).case_tag == 'D');
    // case C, t=0.5, q=1: (q/t)' = 2, constant (sum b^2)^(1/(0.5*2)) = 4/3
    CHECK(holder_trick_constant(0.5, Exponent(1.0), half).value == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(holder_trick_constant(1.0, Exponent(2.0), NonnegSequence::geometric(1.0, 1.0)).infinite());
}

TEST_CASE("convolution trick constants") {
    TwoSidedSequence b;
    b.values = NonnegSequence::geometric(1.0, 0.5);
    CHECK(convolution_trick_constant(1.0, Exponent(1.0), b).value == doctest::Approx(2.0).epsilon(1e-15));
    TwoSidedSequence b4;
    b4.values = NonnegSequence::geometric(1.0, 0.25);
    const TrickConstant cb = convolution_trick_constant(2.0, Exponent(1.0), b4);
    CHECK(cb.value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(convolution_trick_constant(2.0, Exponent(0.5), b4).case_tag == 'B');
    CHECK(convolution_trick_constant(0.5, Exponent(1.0), b4).case_tag == 'C');
    CHECK(convolution_trick_constant(0.5, Exponent(0.25), b4).case_tag == 'D');
    TwoSidedSequence zero;
    zero.values = NonnegSequence::finite({0.0, 0.0});
    CHECK(convolution_trick_constant(1.5, Exponent(2.0), zero).value == 0.0);
    TwoSidedSequence flat;
    flat.values = NonnegSequence::geometric(1.0, 1.0);
    CHECK(convolution_trick_constant(1.0, Exponent(1.0), flat).infinite());
}

TEST_CASE("trick conclusions on random premise-saturating triples") {
    const TrickReport r = verify_tricks(500, 11);
    CHECK(r.passed());
    CHECK(r.checks == 500 * 36 * 2);
    CHECK(r.max_slack <= 1e-12);
}

TEST_CASE("trick degenerate and tight cases") {
    const auto zero = holder_trick_sides(1.5, Exponent(2.0), 1.0, {0.0}, {0.0}, {0.0});
    CHECK(zero.first <= zero.second);
    const auto zc = convolution_trick_sides(1.5, Exponent(2.0), 1.0, {0.0}, {0.0}, {0.0});
    CHECK(zc.first <= zc.second);
    // a single spike saturates case A with q = 1
    const double C = 1.3;
    for (double t : {1.0, 2.0, 3.0}) {
        const std::vector<double> b{0.0, 0.7, 0.0};
        const std::vector<double> c{0.0, 2.0, 0.0};
        const std::vector<double> a{0.0, C * 0.7 * 2.0, 0.0};
        const auto [lhs, rhs] = holder_trick_sides(t, Exponent(1.0), C, a, b, c);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
    }
}
