#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "besov/atoms.hpp"
#include "besov/errors.hpp"

using namespace besov;

namespace {

GridPtr dyadic(int depth) { return std::make_shared<const Grid>(build_dyadic(depth)); }

GridPtr random_grid(std::uint64_t seed, int depth) {
    RandomGridOptions o;
    o.min_children = 2;
    o.max_children = 4;
    o.lambda = 0.15;
    o.Lambda = 0.7;
    o.depth = depth;
    o.seed = seed;
    return std::make_shared<const Grid>(build_random_good(o));
}

BesovParams params(double s, double p, Exponent q) {
    BesovParams b;
    b.s = s;
    b.p = p;
    b.q = q;
    return b;
}

// Exhaustive sup over all index subsequences of length >= 2.
double variation_bruteforce(const std::vector<double>& v, double beta) {
    const int n = static_cast<int>(v.size());
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double acc = 0.0;
        int last = -1;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            if (last >= 0) acc += std::pow(std::abs(v[i] - v[last]), 1.0 / beta);
            last = i;
        }
        best = std::max(best, acc);
    }
    return std::pow(best, beta);
}

// Leaf minimum of f over a cell by a direct scan of the leaf intervals it contains.
double cell_min_scan(const LeafFunction& f, const Cell& c) {
    double m = 1e300;
    for (const Cell& leaf : f.grid().level(f.level()))
        if (leaf.interval->lo >= c.interval->lo && leaf.interval->hi <= c.interval->hi)
            m = std::min(m, f.value(leaf.id.index));
    return m;
}

LeafFunction random_monotone(const GridPtr& g, int level, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd v(g->level_size(level));
    std::vector<std::pair<double, int>> order;
    for (const Cell& c : g->level(level)) order.emplace_back(c.interval->lo, c.id.index);
    std::sort(order.begin(), order.end());
    double acc = 0.0;
    for (const auto& [lo, i] : order) v[i] = (acc += u(rng));
    return LeafFunction(g, level, v);
}

}  // namespace

TEST_CASE("Souza atom membership") {
    const GridPtr g = dyadic(4);
    const CellId q{2, 1};
    const LeafFunction a = canonical_souza_atom(g, q, 0.3, 2.0, 4);
    CHECK(souza_check(a, q, 0.3, 2.0));
    CHECK_FALSE(souza_check(a * 2.0, q, 0.3, 2.0));
    Eigen::VectorXd v = a.values();
    v[0] = 1.0;
    CHECK_FALSE(souza_check(LeafFunction(g, 4, v), q, 0.3, 2.0));
    CHECK(souza_check(LeafFunction::zero(g, 4), q, 0.3, 2.0));
}

TEST_CASE("Hölder to Souza examples") {
    const GridPtr g = dyadic(6);
    const BesovParams bp = params(0.2, 1.5, Exponent(2.0));
    const double beta = 0.5;
    const double e = 1.0 / bp.p - beta;

    const AtomicRepresentation rc = holder_to_souza(sample(g, 6, Generator::parse("constant(0.7)")), {0, 0}, bp, beta);
    CHECK(rc.coefficient({0, 0}) == doctest::Approx(0.7));
    for (int k = 1; k <= 6; ++k) CHECK(rc.coeffs[k].cwiseAbs().maxCoeff() == 0.0);
    CHECK(rc.positive);

    const LeafFunction lin = sample(g, 6, Generator::parse("linear"));
    const AtomicRepresentation rl = holder_to_souza(lin, {0, 0}, bp, beta);
    CHECK(rl.coefficient({0, 0}) == doctest::Approx(std::pow(2.0, -7)));
    for (int k = 1; k <= 6; ++k) {
        for (const Cell& c : g->level(k)) {
            const double half_parent = std::pow(2.0, -k);
            const double expected = c.ordinal == 1 ? half_parent * std::pow(c.measure, e) : 0.0;
            CHECK(rl.coefficient(c.id) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    CHECK(rl.params.s == beta);
}

TEST_CASE("Hölder to Souza partial sums are running minima and reconstruct exactly") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const GridPtr g = trial % 2 ? dyadic(6) : random_grid(100 + trial, 4);
        const int K = g->depth();
        LeafFunction phi = random_monotone(g, K, rng);
        if (trial % 3 == 0) phi = phi * -1.0;
        const BesovParams bp = params(0.2, 2.0, Exponent(1.0));
        const HolderSouzaParts parts = holder_to_souza_parts(phi, {0, 0}, bp, 0.4);
        const AtomicRepresentation rep = parts.combined();
        CHECK((rep.synthesize(K).values() - phi.values()).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(parts.positive.all_nonnegative());
        CHECK(parts.negative.all_nonnegative());

        const LeafFunction plus(g, K, phi.values().cwiseMax(0.0));
        for (int N = 0; N < K; ++N) {
            AtomicRepresentation trunc = parts.positive;
            for (int k = N + 1; k <= K; ++k) trunc.coeffs[k].setZero();
            const LeafFunction partial = trunc.synthesize(N);
            for (const Cell& c : g->level(N))
                CHECK(partial.value(c.id.index) == doctest::Approx(cell_min_scan(plus, c)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Hölder to Souza on a subcell and sign handling") {
    const GridPtr g = dyadic(5);
    const BesovParams bp = params(0.2, 1.0, Exponent(1.0));
    const CellId q{2, 3};
    LeafFunction f = canonical_souza_atom(g, q, 0.2, 1.0, 5) * 0.5;
    Eigen::VectorXd v = f.values();
    v[g->descendants(q, 5).begin] = -0.1;
    const LeafFunction signed_f(g, 5, v);
    CHECK_THROWS_AS(holder_to_souza(signed_f, q, bp, 0.4, false), ParameterError);
    const AtomicRepresentation r = holder_to_souza(signed_f, q, bp, 0.4);
    CHECK_FALSE(r.positive);
    CHECK((r.synthesize(5).values() - v).cwiseAbs().maxCoeff() <= 1e-12);
    for (int k = 0; k < 2; ++k) CHECK(r.coeffs[k].cwiseAbs().maxCoeff() == 0.0);

    v[0] = 1.0;
    CHECK_THROWS_AS(holder_to_souza(LeafFunction(g, 5, v), q, bp, 0.4), ParameterError);
}

TEST_CASE("Hölder to Souza per-level decay") {
    for (int depth : {8, 10}) {
        const GridPtr g = dyadic(depth);
        const GridGeometry geo = validate_good(*g);
        for (const auto& [name, gamma] : {std::pair{"linear", 1.0}, std::pair{"power(0.6)", 0.6}}) {
            for (double p : {1.0, 2.0}) {
                const BesovParams bp = params(0.1, p, Exponent(1.0));
                const double beta = 0.5;
                const LeafFunction phi = sample(g, depth, Generator::parse(name));
                const AtomicRepresentation rep = holder_to_souza(phi, {0, 0}, bp, beta);
                const HolderDecayCheck chk = holder_decay_check(rep, {0, 0}, 1.0, gamma, geo);
                CHECK(chk.passed);
                CHECK(chk.observed.size() == static_cast<std::size_t>(depth));
            }
        }
    }
    const GridPtr g = random_grid(5, 5);
    const GridGeometry geo = validate_good(*g);
    const LeafFunction phi = sample(g, 5, Generator::parse("power(0.6)"));
    const AtomicRepresentation rep = holder_to_souza(phi, {0, 0}, params(0.1, 1.0, Exponent(1.0)), 0.3);
    CHECK(holder_decay_check(rep, {0, 0}, 1.0, 0.6, geo).passed);
}

TEST_CASE("p-variation") {
    const GridPtr g = dyadic(4);
    CHECK(bv_variation(sample(g, 4, Generator::parse("constant(3)")), 0.5) == 0.0);
    const LeafFunction jump = sample(g, 4, Generator::parse("indicator(0.5,1)"));
    for (double beta : {1.0, 0.7, 0.5, 0.25}) CHECK(bv_variation(jump, beta) == doctest::Approx(1.0));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> len(0, 13);
    const std::vector<double> betas{1.0, 0.8, 0.5, 1.0 / 3.0};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(len(rng));
        for (double& x : v) x = u(rng);
        const double beta = betas[trial % betas.size()];
        CHECK(sequence_variation(v, beta) == doctest::Approx(variation_bruteforce(v, beta)).epsilon(1e-13));

        if (v.size() >= 2) {
            const std::size_t cut = v.size() / 2;
            const std::vector<double> a(v.begin(), v.begin() + cut + 1);
            const std::vector<double> b(v.begin() + cut, v.end());
            const double r = 1.0 / beta;
            CHECK(std::pow(sequence_variation(v, beta), r) >=
                  (std::pow(sequence_variation(a, beta), r) + std::pow(sequence_variation(b, beta), r)) * (1 - 1e-12));
        }
    }
    CHECK_THROWS_AS(sequence_variation({1.0, 2.0}, 1.5), ParameterError);
}

TEST_CASE("bounded-variation atoms and the interval requirement") {
    const GridPtr g = dyadic(5);
    const CellId q{1, 0};
    const LeafFunction a = canonical_souza_atom(g, q, 0.3, 1.0, 5);
    CHECK(bv_atom_check(a, q, 0.3, 1.0, 0.5));
    CHECK_FALSE(bv_atom_check(a * 1.5, q, 0.3, 1.0, 0.5));
    Eigen::VectorXd v = a.values();
    v[1] = 0.0;
    v[3] = 0.0;
    CHECK_FALSE(bv_atom_check(LeafFunction(g, 5, v), q, 0.3, 1.0, 1.0));

    std::vector<std::vector<Cell>> levels(2);
    levels[0].push_back(Cell{{0, 0}, 1.0, std::nullopt, 0, 2, 0, std::nullopt});
    levels[1].push_back(Cell{{1, 0}, 0.5, CellId{0, 0}, 0, 0, 0, std::nullopt});
    levels[1].push_back(Cell{{1, 1}, 0.5, CellId{0, 0}, 0, 0, 1, std::nullopt});
    const GridPtr abstract = std::make_shared<const Grid>(GridKind::explicit_tree, levels);
    Eigen::VectorXd w(2);
    w << 0.0, 1.0;
    CHECK_THROWS_AS(bv_variation(LeafFunction(abstract, 1, w), 0.5), ParameterError);
}

TEST_CASE("Besov atom verdicts") {
    const GridPtr g = dyadic(6);
    const GridGeometry geo = validate_good(*g);
    const CellId q{2, 1};
    const double s = 0.3;
    const double beta = 0.45;
    const LeafFunction a = canonical_souza_atom(g, q, s, 1.0, 6);

    const BesovAtomReport r = besov_atom_check(a, q, s, beta, 1.0, Exponent::infinity(), geo);
    CHECK(r.upper == doctest::Approx(std::pow(0.25, s - beta)).epsilon(1e-12));
    CHECK(r.c_ba == 1.0);
    CHECK(r.verdict == AtomVerdict::certified);

    CHECK(besov_atom_check(LeafFunction::zero(g, 6), q, s, beta, 1.0, Exponent(2.0), geo).verdict ==
          AtomVerdict::certified);
    const BesovAtomReport big = besov_atom_check(a * 1e4, q, s, beta, 1.0, Exponent(2.0), geo);
    CHECK(big.verdict == AtomVerdict::refuted);
    CHECK(big.lower == doctest::Approx(1e4 * besov_atom_check(a, q, s, beta, 1.0, Exponent(2.0), geo).lower));

    const BesovAtomReport fin = besov_atom_check(a, q, s, beta, 1.0, Exponent(2.0), geo);
    CHECK(fin.c_ba == doctest::Approx(std::sqrt(1.0 / (1.0 - std::pow(0.5, 2 * beta)))));
    CHECK(fin.verdict == AtomVerdict::inconclusive);

    Eigen::VectorXd v = a.values();
    v[0] = 1.0;
    CHECK(besov_atom_check(LeafFunction(g, 6, v), q, s, beta, 1.0, Exponent::infinity(), geo).verdict ==
          AtomVerdict::refuted);
}

TEST_CASE("restriction") {
    const GridPtr g = dyadic(5);
    const BesovParams bp = params(0.3, 1.5, Exponent(2.0));
    const double e = 1.0 / bp.p - bp.s;

    AtomicRepresentation root = AtomicRepresentation::zero(g, bp);
    root.set({0, 0}, 1.0);
    const AtomicRepresentation r1 = restrict(root, {1, 1});
    CHECK(r1.coefficient({1, 1}) == doctest::Approx(std::pow(0.5, e)));
    CHECK(r1.cost() == doctest::Approx(std::pow(0.5, e)));

    AtomicRepresentation local = AtomicRepresentation::zero(g, bp);
    local.set({2, 0}, 2.0);
    local.set({3, 1}, -1.0);
    CHECK(restrict(local, {1, 1}).cost() == 0.0);
    const AtomicRepresentation same = restrict(local, {0, 0});
    for (int k = 0; k <= 5; ++k) CHECK(same.coeffs[k] == local.coeffs[k]);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        AtomicRepresentation r = AtomicRepresentation::zero(g, bp);
        for (int k = 0; k <= 5; ++k)
            for (int i = 0; i < r.coeffs[k].size(); ++i) r.coeffs[k][i] = u(rng);
        const CellId w{1 + trial % 4, trial % 2};
        const AtomicRepresentation out = restrict(r, w);
        CHECK(out.cost() <= incint_constant(bp.s, bp.p, 0.5) * r.cost() * (1 + 1e-12));
        const LeafFunction f = r.synthesize(5);
        const LeafFunction h = out.synthesize(5);
        const IndexRange in = g->descendants(w, 5);
        for (int i = 0; i < f.values().size(); ++i)
            CHECK(h.value(i) == doctest::Approx(i >= in.begin && i < in.end ? f.value(i) : 0.0).epsilon(1e-12));
    }

    AtomicRepresentation pos = AtomicRepresentation::zero(g, bp);
    pos.positive = true;
    pos.set({2, 3}, 1.0);
    pos.set({4, 13}, 0.5);
    const AtomicRepresentation rp = restrict(pos, {1, 1});
    CHECK(rp.positive);
    for (int k = 0; k <= 5; ++k)
        for (int i = 0; i < rp.coeffs[k].size(); ++i)
            if (rp.coeffs[k][i] != 0.0) CHECK((g->contains({2, 3}, {k, i}) || g->contains({4, 13}, {k, i})));
}

TEST_CASE("transmutation: identity and restriction rules") {
    const GridPtr g = random_grid(21, 5);
    const GridGeometry geo = validate_good(*g);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const BesovParams& bp : {params(0.3, 1.0, Exponent(1.0)), params(0.2, 2.0, Exponent::infinity())}) {
        AtomicRepresentation rep = AtomicRepresentation::zero(g, bp);
        rep.positive = true;
        for (int k = 0; k <= g->depth(); ++k)
            for (int i = 0; i < rep.coeffs[k].size(); ++i)
                if (u(rng) < 0.4) rep.coeffs[k][i] = u(rng);

        const TransmutationResult id = transmute(rep, identity_rule(0.5));
        CHECK(id.report.output_cost == doctest::Approx(id.report.input_cost).epsilon(1e-14));
        CHECK(id.report.bound_holds);
        CHECK(id.report.synthesis_error <= 1e-12);
        CHECK(id.report.positive);

        for (const CellId w : {CellId{1, 0}, CellId{2, 2}, CellId{0, 0}}) {
            const TransmutationResult tr = transmute(rep, restriction_rule(g, w, bp.s, bp.p, geo.lambda_max));
            const AtomicRepresentation direct = restrict(rep, w);
            for (int k = 0; k <= g->depth(); ++k)
                CHECK((tr.output.coeffs[k] - direct.coeffs[k]).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(tr.report.bound_holds);
            CHECK(tr.report.positive);
        }
    }
}

TEST_CASE("transmutation: Hölder atoms and rejected rules") {
    const GridPtr g = dyadic(7);
    const GridGeometry geo = validate_good(*g);
    const double gamma = 0.6;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double p : {1.0, 2.0}) {
        const BesovParams bp = params(0.25, p, Exponent(2.0));
        AtomicRepresentation rep = AtomicRepresentation::zero(g, bp);
        rep.kind = AtomKind::attached;
        rep.positive = true;
        for (const CellId q : {CellId{0, 0}, CellId{1, 1}, CellId{2, 0}, CellId{3, 5}, CellId{4, 9}}) {
            const Cell& c = g->cell(q);
            const double theta = u(rng);
            const double scale = theta * std::pow(c.measure, bp.s - 1.0 / p - gamma);
            Eigen::VectorXd v = Eigen::VectorXd::Zero(g->level_size(7));
            const IndexRange r = g->descendants(q, 7);
            for (int i = r.begin; i < r.end; ++i) {
                const Interval iv = *g->cell({7, i}).interval;
                v[i] = scale * std::pow(0.5 * (iv.lo + iv.hi) - c.interval->lo, gamma);
            }
            rep.set(q, u(rng));
            rep.atoms.emplace(q, LeafFunction(g, 7, v));
        }
        const TransmutationResult tr = transmute(rep, holder_rule(bp, gamma, geo, false));
        CHECK(tr.report.bound_holds);
        CHECK(tr.report.output_cost <= tr.report.bound);
        CHECK(tr.report.synthesis_error <= 1e-9);
        CHECK(tr.report.positive);
        CHECK(tr.output.kind == AtomKind::souza);
    }

    const BesovParams bp = params(0.3, 1.0, Exponent(1.0));
    AtomicRepresentation rep = AtomicRepresentation::zero(g, bp);
    rep.set({1, 0}, 1.0);
    TransmutationRule greedy = identity_rule(0.5);
    greedy.name = "greedy";
    greedy.expand = [&](CellId q, const LeafFunction&) {
        std::vector<ExpansionTerm> t;
        const IndexRange r = g->descendants(q, q.level + 1);
        for (int i = r.begin; i < r.end; ++i) t.push_back({CellId{q.level + 1, i}, 1.0, std::nullopt});
        return t;
    };
    try {
        transmute(rep, greedy);
        FAIL("expected a decay violation");
    } catch (const DecayViolation& e) {
        CHECK(std::string(e.what()).find("(level 1, index 0)") != std::string::npos);
        CHECK(std::string(e.what()).find("level 2") != std::string::npos);
    }
}

TEST_CASE("transmutation merges attached atoms into convex combinations") {
    const GridPtr g = dyadic(3);
    const BesovParams bp = params(0.3, 1.0, Exponent(1.0));
    AtomicRepresentation rep = AtomicRepresentation::zero(g, bp);
    rep.set({0, 0}, 1.0);
    rep.set({1, 0}, -0.5);
    TransmutationRule rule = identity_rule(0.5);
    rule.name = "split-to-children";
    rule.lambda = std::pow(0.5, 1.0 - bp.s);
    rule.c_rf = 8.0;
    rule.expand = [&](CellId q, const LeafFunction& atom) {
        std::vector<ExpansionTerm> t;
        const IndexRange r = g->descendants(q, 2);
        for (int i = r.begin; i < r.end; ++i) {
            const CellId p{2, i};
            const double w = std::pow(g->cell(p).measure / g->cell(q).measure, 1.0 / bp.p - bp.s);
            Eigen::VectorXd v = Eigen::VectorXd::Zero(g->level_size(atom.level()));
            const IndexRange pr = g->descendants(p, atom.level());
            v.segment(pr.begin, pr.size()) = atom.values().segment(pr.begin, pr.size()) / w;
            t.push_back({p, w, LeafFunction(g, atom.level(), v)});
        }
        return t;
    };
    rep.kind = AtomKind::attached;
    rep.atoms.emplace(CellId{0, 0}, canonical_souza_atom(g, {0, 0}, bp.s, bp.p, 3));
    rep.atoms.emplace(CellId{1, 0}, canonical_souza_atom(g, {1, 0}, bp.s, bp.p, 3));
    const TransmutationResult tr = transmute(rep, rule);
    CHECK(tr.output.kind == AtomKind::attached);
    CHECK(tr.report.synthesis_error <= 1e-12);
    CHECK(tr.report.bound_holds);
    for (const auto& [id, atom] : tr.output.atoms) {
        const double bound = std::pow(g->cell(id).measure, bp.s - 1.0 / bp.p);
        CHECK(atom.values().cwiseAbs().maxCoeff() <= bound * (1 + 1e-12));
    }
    CHECK_FALSE(tr.report.positive);
}
