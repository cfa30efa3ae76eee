#include "besov/representation.hpp"

#include <cmath>

namespace besov {

AtomicRepresentation AtomicRepresentation::zero(GridPtr grid, const BesovParams& params) {
    AtomicRepresentation r;
    r.params = params;
    for (int k = 0; k <= grid->depth(); ++k) r.coeffs.push_back(Eigen::VectorXd::Zero(grid->level_size(k)));
    r.grid = std::move(grid);
    return r;
}

double AtomicRepresentation::cost() const { return lq_lp_cost(coeffs, Exponent(params.p), params.q); }

int AtomicRepresentation::resolution() const {
    int level = 0;
    for (int k = 0; k < static_cast<int>(coeffs.size()); ++k)
        if (coeffs[k].size() > 0 && coeffs[k].cwiseAbs().maxCoeff() > 0.0) level = k;
    for (const auto& [id, atom] : atoms) level = std::max(level, atom.level());
    return level;
}

LeafFunction AtomicRepresentation::synthesize(int level) const {
    if (level < 0 || level > grid->depth()) throw ParameterError("synthesis level out of range");
    if (kind == AtomKind::souza) {
        Eigen::VectorXd acc(1);
        acc[0] = 0.0;
        for (int k = 0; k <= level; ++k) {
            if (k > 0) {
                Eigen::VectorXd next(grid->level_size(k));
                for (const Cell& c : grid->level(k - 1))
                    next.segment(c.first_child, c.child_count).setConstant(acc[c.id.index]);
                acc = std::move(next);
            }
            for (const Cell& c : grid->level(k)) {
                const double ck = coeffs[k][c.id.index];
                if (ck != 0.0) acc[c.id.index] += ck * std::pow(c.measure, params.s - 1.0 / params.p);
            }
        }
        for (int k = level + 1; k < static_cast<int>(coeffs.size()); ++k)
            if (coeffs[k].size() > 0 && coeffs[k].cwiseAbs().maxCoeff() > 0.0)
                throw ParameterError("representation has coefficients below the synthesis level");
        return LeafFunction(grid, level, std::move(acc));
    }
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid->level_size(level));
    for (int k = 0; k < static_cast<int>(coeffs.size()); ++k) {
        for (int i = 0; i < coeffs[k].size(); ++i) {
            const double ck = coeffs[k][i];
            if (ck == 0.0) continue;
            const auto it = atoms.find(CellId{k, i});
            if (it == atoms.end()) throw ParameterError("missing attached atom on cell " + to_string(CellId{k, i}));
            if (it->second.level() > level) throw ParameterError("attached atom is finer than the synthesis level");
            acc += ck * refine(it->second, level).values();
        }
    }
    return LeafFunction(grid, level, std::move(acc));
}

bool AtomicRepresentation::all_nonnegative() const {
    for (const auto& level : coeffs)
        if (level.size() > 0 && level.minCoeff() < 0.0) return false;
    for (const auto& [id, atom] : atoms)
        if (atom.values().size() > 0 && atom.values().minCoeff() < 0.0) return false;
    return true;
}

LeafFunction canonical_souza_atom(GridPtr grid, CellId cell, double s, double p, int level) {
    const Cell& c = grid->cell(cell);
    if (level < cell.level) throw ParameterError("atom resolution above its cell");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid->level_size(level));
    const IndexRange r = grid->descendants(cell, level);
    v.segment(r.begin, r.size()).setConstant(std::pow(c.measure, s - 1.0 / p));
    return LeafFunction(std::move(grid), level, std::move(v));
}

}  // namespace besov
