#include "besov/operators.hpp"

#include <cmath>

namespace besov {

namespace {

constexpr double kSlack = 1e-9;

double sup_norm(const LeafFunction& f) { return f.values().size() ? f.values().cwiseAbs().maxCoeff() : 0.0; }

LeafFunction leafwise(const LeafFunction& f, const std::function<double(double)>& fn) {
    Eigen::VectorXd v = f.values();
    for (double& x : v) x = fn(x);
    return LeafFunction(f.grid_ptr(), f.level(), std::move(v));
}

}  // namespace

MultiplierReport pointwise_multiply(const LeafFunction& f, const LeafFunction& g, const BesovParams& params,
                                    const HaarSystem& system, const GridGeometry& geometry) {
    params.require_besov_range();
    const int level = common_level(f, g);
    const LeafFunction fr = refine(f, level);
    const LeafFunction gr = refine(g, level);
    MultiplierReport r{LeafFunction(fr.grid_ptr(), level, fr.values().cwiseProduct(gr.values()))};

    const ConstantsReport c = equivalence_constants(geometry, params);
    BesovParams critical = params;
    critical.s = 1.0 / params.p;
    critical.q = Exponent::infinity();
    const ConstantsReport cc = equivalence_constants(geometry, critical);

    r.f_st = n_st(standard_representation(fr, params, system));
    r.g_st = n_st(standard_representation(gr, params, system));
    r.g_st_critical = n_st(standard_representation(gr, critical, system));
    r.f_sup = sup_norm(fr);
    r.g_sup = sup_norm(gr);
    r.product_sup = sup_norm(r.product);
    r.observed_lower = bracket_lower(r.product, params, c);

    const double decay = 1.0 - std::pow(geometry.lambda_max, 1.0 / params.p - params.s);
    r.ii_constant = c.c_no * (cc.c_e * cc.c_no * r.g_st_critical / decay + r.g_sup);
    r.ii_bound = r.ii_constant * r.f_st;
    r.ii_pass = r.observed_lower <= r.ii_bound * (1.0 + kSlack);

    r.iii_observed = r.observed_lower + r.product_sup;
    r.iii_bound = c.c_e * c.c_no * (r.f_st + r.f_sup) * (r.g_st + r.g_sup);
    r.iii_pass = r.iii_observed <= r.iii_bound * (1.0 + kSlack);
    return r;
}

LipschitzMap LipschitzMap::custom(std::string name, double K, std::function<double(double)> fn) {
    if (fn(0.0) != 0.0) throw ParameterError("left composition needs g(0) = 0, got g(0) = " + std::to_string(fn(0.0)));
    if (!(K >= 0.0)) throw ParameterError("Lipschitz constant must be nonnegative");
    return LipschitzMap{std::move(name), K, std::move(fn)};
}

LipschitzMap LipschitzMap::builtin(const std::string& spec) {
    const Generator g = Generator::parse(spec);
    auto arg = [&](std::size_t n) {
        if (g.args.size() != n) throw ParameterError(g.name + " takes " + std::to_string(n) + " argument(s)");
        return n ? g.args[0] : 0.0;
    };
    if (g.name == "identity") {
        arg(0);
        return custom("identity", 1.0, [](double x) { return x; });
    }
    if (g.name == "abs") {
        arg(0);
        return custom("abs", 1.0, [](double x) { return std::abs(x); });
    }
    if (g.name == "clamp") {
        const double M = arg(1);
        if (!(M > 0.0)) throw ParameterError("clamp needs M > 0");
        return custom(spec, 1.0, [M](double x) { return std::clamp(x, -M, M); });
    }
    if (g.name == "scaled") {
        const double a = arg(1);
        return custom(spec, std::abs(a), [a](double x) { return a * x; });
    }
    if (g.name == "soft_threshold") {
        const double t = arg(1);
        if (!(t >= 0.0)) throw ParameterError("soft_threshold needs tau >= 0");
        return custom(spec, 1.0, [t](double x) { return std::copysign(std::max(std::abs(x) - t, 0.0), x); });
    }
    throw ParameterError("unknown Lipschitz builtin: " + g.name);
}

std::vector<std::string> lipschitz_builtin_names() {
    return {"identity", "abs", "clamp(0.5)", "scaled(-2.5)", "soft_threshold(0.3)"};
}

CompositionReport left_compose(const LipschitzMap& g, const LeafFunction& f, const BesovParams& params) {
    params.require_valid();
    CompositionReport r{leafwise(f, g.fn)};
    const Exponent p(params.p);
    r.lhs = lp_norm(r.composed, p) + osc_seminorm(r.composed, params);
    r.rhs = g.K * (lp_norm(f, p) + osc_seminorm(f, params));
    r.pass = r.lhs <= r.rhs * (1.0 + kSlack) + 1e-15;
    const Grid& grid = f.grid();
    for (int k = 0; k < f.level(); ++k) {
        for (const Cell& c : grid.level(k)) {
            const double lhs = osc_p(r.composed, c.id, p);
            const double rhs = g.K * osc_p(f, c.id, p);
            ++r.cells_checked;
            if (rhs > 0.0) r.max_cell_ratio = std::max(r.max_cell_ratio, lhs / rhs);
            if (lhs > rhs * (1.0 + kSlack) + 1e-15) ++r.cell_violations;
        }
    }
    return r;
}

}  // namespace besov
