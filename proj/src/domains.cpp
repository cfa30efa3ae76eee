#include "besov/domains.hpp"

#include <cmath>

namespace besov {

namespace {

constexpr double kTileTolerance = 1e-12;

void collect_tiles(const Grid& grid, CellId id, double a, double b, std::vector<std::vector<CellId>>& families) {
    const Cell& c = grid.cell(id);
    const Interval iv = *c.interval;
    if (iv.hi <= a || iv.lo >= b) return;
    if (iv.lo >= a && iv.hi <= b) {
        if (static_cast<int>(families.size()) <= id.level) families.resize(id.level + 1);
        families[id.level].push_back(id);
        return;
    }
    if (c.is_leaf())
        throw ParameterError("interval endpoints are not aligned with the leaves of the grid (cell " + to_string(id) + ")");
    for (const Cell& child : grid.children(c)) collect_tiles(grid, child.id, a, b, families);
}

}  // namespace

RegularityReport interval_regular_decompose(double a, double b, const Grid& grid, double alpha) {
    return interval_regular_decompose(a, b, grid, alpha, 2.0, std::pow(2.0, -alpha));
}

RegularityReport interval_regular_decompose(double a, double b, const Grid& grid, double alpha, double K, double c) {
    if (!(a < b)) throw ParameterError("degenerate interval: need a < b");
    if (!grid.has_intervals()) throw ParameterError("interval decomposition needs an interval grid");
    const Interval whole = *grid.root().interval;
    if (a < whole.lo || b > whole.hi) throw ParameterError("interval outside the grid domain");

    RegularityReport r;
    r.a = a;
    r.b = b;
    r.alpha = alpha;
    r.K = K;
    r.c = c;
    r.measure = b - a;
    collect_tiles(grid, grid.root().id, a, b, r.families);

    double covered = 0.0;
    r.k0 = -1;
    r.level_sums.assign(r.families.size(), 0.0);
    r.allowed.assign(r.families.size(), 0.0);
    for (int k = 0; k < static_cast<int>(r.families.size()); ++k) {
        for (const CellId id : r.families[k]) {
            const double m = grid.cell(id).measure;
            covered += m;
            r.level_sums[k] += std::pow(m, alpha);
        }
        if (r.k0 < 0 && !r.families[k].empty()) r.k0 = k;
    }
    r.tiles = std::abs(covered - r.measure) <= kTileTolerance;
    r.passed = r.tiles;
    for (int k = std::max(r.k0, 0); k < static_cast<int>(r.families.size()); ++k) {
        r.allowed[k] = K * std::pow(c, k - r.k0) * std::pow(r.measure, alpha);
        if (r.level_sums[k] > r.allowed[k] * (1.0 + kTileTolerance)) r.passed = false;
    }
    return r;
}

double indicator_norm_bound(const RegularityReport& report, const BesovParams& params) {
    if (!report.passed) throw ParameterError("regularity report did not pass");
    const double p = params.p;
    const double scale = std::pow(report.K, 1.0 / p) * std::pow(report.measure, 1.0 / p - params.s);
    if (params.q.is_infinite()) {
        if (!(report.c < 1.0)) throw ParameterError("regularity ratio c must be below 1");
        return scale;
    }
    const double q = params.q.value();
    const double cq = std::pow(report.c, q / p);
    if (cq >= 1.0) throw ParameterError("c^(q/p) >= 1: the bound diverges");
    return scale / std::pow(1.0 - cq, 1.0 / q);
}

IntervalRepCost interval_rep_cost(const std::vector<IntervalTerm>& terms, GridPtr grid, const BesovParams& params) {
    if (params.p != 1.0 || !(params.q == Exponent(1.0))) throw ParameterError("interval representations need p = q = 1");
    IntervalRepCost out;
    out.souza = AtomicRepresentation::zero(grid, params);
    const double alpha = 1.0 - params.s;
    for (const IntervalTerm& t : terms) {
        out.cost += std::abs(t.c);
        const RegularityReport reg = interval_regular_decompose(t.a, t.b, *grid, alpha);
        out.constant = std::max(out.constant, reg.K / (1.0 - reg.c));
        for (const auto& level : reg.families)
            for (const CellId id : level)
                out.souza.coeffs[id.level][id.index] += t.c * std::pow(grid->cell(id).measure / reg.measure, alpha);
    }
    if (terms.empty()) out.constant = 2.0 / (1.0 - std::pow(2.0, -alpha));
    out.souza.positive = out.souza.all_nonnegative();
    out.souza_cost = out.souza.cost();
    return out;
}

std::vector<IntervalTerm> souza_as_interval_terms(const AtomicRepresentation& rep) {
    if (rep.kind != AtomKind::souza || rep.params.p != 1.0) throw ParameterError("needs a canonical Souza representation with p = 1");
    std::vector<IntervalTerm> out;
    for (int k = 0; k < static_cast<int>(rep.coeffs.size()); ++k)
        for (int i = 0; i < rep.coeffs[k].size(); ++i)
            if (rep.coeffs[k][i] != 0.0) {
                const Interval iv = *rep.grid->cell({k, i}).interval;
                out.push_back({rep.coeffs[k][i], iv.lo, iv.hi});
            }
    return out;
}

}  // namespace besov
