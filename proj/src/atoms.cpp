#include "besov/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "besov/haar.hpp"
#include "besov/norms.hpp"

namespace besov {

namespace {

constexpr double kBoundSlack = 1e-12;
constexpr double kDecaySlack = 1e-9;

bool vanishes_outside(const LeafFunction& f, IndexRange inside) {
    const Eigen::VectorXd& v = f.values();
    for (int i = 0; i < v.size(); ++i)
        if ((i < inside.begin || i >= inside.end) && v[i] != 0.0) return false;
    return true;
}

LeafFunction at_least(const LeafFunction& f, int level) { return f.level() < level ? refine(f, level) : f; }

AtomicRepresentation decompose_nonnegative(const GridPtr& grid, int K, const Eigen::VectorXd& values, CellId cell,
                                           const BesovParams& params) {
    AtomicRepresentation rep = AtomicRepresentation::zero(grid, params);
    rep.positive = true;
    const int j = cell.level;
    std::vector<Eigen::VectorXd> mins(K + 1);
    mins[K] = values;
    for (int k = K - 1; k >= j; --k) {
        mins[k] = Eigen::VectorXd::Zero(grid->level_size(k));
        const IndexRange r = grid->descendants(cell, k);
        for (int i = r.begin; i < r.end; ++i) {
            const Cell& c = grid->cell({k, i});
            mins[k][i] = mins[k + 1].segment(c.first_child, c.child_count).minCoeff();
        }
    }
    const double e = 1.0 / params.p - params.s;
    rep.set(cell, mins[j][cell.index] * std::pow(grid->cell(cell).measure, e));
    for (int k = j + 1; k <= K; ++k) {
        const IndexRange r = grid->descendants(cell, k);
        for (int i = r.begin; i < r.end; ++i) {
            const Cell& c = grid->cell({k, i});
            const double jump = mins[k][i] - mins[k - 1][c.parent->index];
            if (jump != 0.0) rep.coeffs[k][i] = jump * std::pow(c.measure, e);
        }
    }
    return rep;
}

}  // namespace

bool souza_check(const LeafFunction& f, CellId cell, double s, double p) {
    const Grid& grid = f.grid();
    const double bound = std::pow(grid.cell(cell).measure, s - 1.0 / p);
    if (f.level() < cell.level) return f.values().isZero(0.0);
    const IndexRange r = grid.descendants(cell, f.level());
    if (!vanishes_outside(f, r)) return false;
    const Eigen::VectorXd inside = f.values().segment(r.begin, r.size());
    const double v = inside[0];
    if ((inside.array() != v).any()) return false;
    return std::abs(v) <= bound * (1.0 + kBoundSlack);
}

AtomicRepresentation HolderSouzaParts::combined() const {
    AtomicRepresentation r = positive;
    for (std::size_t k = 0; k < r.coeffs.size(); ++k) r.coeffs[k] -= negative.coeffs[k];
    r.positive = negative.cost() == 0.0;
    return r;
}

HolderSouzaParts holder_to_souza_parts(const LeafFunction& phi, CellId cell, const BesovParams& params, double beta,
                                       bool split) {
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    const LeafFunction f = at_least(phi, cell.level);
    const GridPtr& grid = f.grid_ptr();
    const IndexRange r = grid->descendants(cell, f.level());
    if (!vanishes_outside(f, r)) throw ParameterError("function is not supported on cell " + to_string(cell));
    const Eigen::VectorXd& v = f.values();
    if (!split && v.size() > 0 && v.minCoeff() < 0.0)
        throw ParameterError("negative values without split: pass split = true");
    BesovParams atom_params = params;
    atom_params.s = beta;
    HolderSouzaParts parts{
        decompose_nonnegative(grid, f.level(), v.cwiseMax(0.0), cell, atom_params),
        decompose_nonnegative(grid, f.level(), (-v).cwiseMax(0.0), cell, atom_params)};
    return parts;
}

AtomicRepresentation holder_to_souza(const LeafFunction& phi, CellId cell, const BesovParams& params, double beta,
                                     bool split) {
    return holder_to_souza_parts(phi, cell, params, beta, split).combined();
}

HolderDecayCheck holder_decay_check(const AtomicRepresentation& rep, CellId cell, double H, double gamma,
                                    const GridGeometry& geometry) {
    const double beta = rep.params.s;
    const double p = rep.params.p;
    if (gamma < beta) throw ParameterError("Hölder exponent below the atom regularity");
    if (!geometry.has_ratios) throw ParameterError("geometry without ratio bounds");
    const Grid& grid = *rep.grid;
    const double q_measure = grid.cell(cell).measure;
    const double front = std::pow(H, p) * std::pow(geometry.lambda_min, -gamma * p) *
                         std::pow(q_measure, 1.0 + (gamma - beta) * p);
    HolderDecayCheck out;
    for (int L = cell.level + 1; L <= grid.depth(); ++L) {
        const IndexRange r = grid.descendants(cell, L);
        const double mass = rep.coeffs[L].segment(r.begin, r.size()).array().abs().pow(p).sum();
        const double bound = front * std::pow(geometry.lambda_max, (L - cell.level) * (gamma - beta) * p);
        out.observed.push_back(mass);
        out.bound.push_back(bound);
        if (mass > bound * (1.0 + kDecaySlack)) out.passed = false;
    }
    return out;
}

double sequence_variation(const std::vector<double>& values, double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("variation needs 1/beta >= 1");
    const double r = 1.0 / beta;
    const std::size_t n = values.size();
    std::vector<double> best(n, 0.0);
    double top = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i)
            best[j] = std::max(best[j], best[i] + std::pow(std::abs(values[j] - values[i]), r));
        top = std::max(top, best[j]);
    }
    return std::pow(top, beta);
}

double bv_variation(const LeafFunction& f, CellId cell, double beta) {
    const Grid& grid = f.grid();
    if (!grid.has_intervals()) throw ParameterError("p-variation needs an interval grid");
    if (f.level() <= cell.level) return sequence_variation({}, beta);
    const IndexRange r = grid.descendants(cell, f.level());
    std::vector<std::pair<double, double>> points;
    points.reserve(r.size());
    for (int i = r.begin; i < r.end; ++i) points.emplace_back(grid.cell({f.level(), i}).interval->lo, f.value(i));
    std::sort(points.begin(), points.end());
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& pt : points) v.push_back(pt.second);
    return sequence_variation(v, beta);
}

double bv_variation(const LeafFunction& f, double beta) { return bv_variation(f, f.grid().root().id, beta); }

bool bv_atom_check(const LeafFunction& f, CellId cell, double s, double p, double beta) {
    const LeafFunction g = at_least(f, cell.level);
    const IndexRange r = g.grid().descendants(cell, g.level());
    if (!vanishes_outside(g, r)) return false;
    const double bound = std::pow(g.grid().cell(cell).measure, s - 1.0 / p) * (1.0 + kBoundSlack);
    const double sup = r.size() > 0 ? g.values().segment(r.begin, r.size()).cwiseAbs().maxCoeff() : 0.0;
    return sup <= bound && bv_variation(g, cell, beta) <= bound;
}

std::string to_string(AtomVerdict verdict) {
    switch (verdict) {
        case AtomVerdict::certified: return "certified";
        case AtomVerdict::refuted: return "refuted";
        case AtomVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

BesovAtomReport besov_atom_check(const LeafFunction& g, CellId cell, double s, double beta, double p, Exponent q_tilde,
                                 const GridGeometry& geometry) {
    const LeafFunction f = at_least(g, cell.level);
    const Grid& grid = f.grid();
    const IndexRange r = grid.descendants(cell, f.level());
    BesovAtomReport rep;
    rep.supported = vanishes_outside(f, r);

    auto sub = std::make_shared<const Grid>(induced_grid(grid, cell));
    const GridGeometry sub_geo = induced_geometry(grid, geometry, cell);
    const LeafFunction h(sub, f.level() - cell.level, f.values().segment(r.begin, r.size()));
    BesovParams params;
    params.s = beta;
    params.p = p;
    params.q = q_tilde;
    const HaarSystem system(sub);
    const NormReport norms = norm_report(h, params, system, sub_geo);
    rep.lower = norms.bracket_lower;
    rep.upper = norms.n_st;

    if (q_tilde.is_finite()) {
        const double t = q_tilde.value();
        rep.c_ba = std::pow(1.0 / (1.0 - std::pow(geometry.lambda_max, beta * t)), 1.0 / t);
    }
    rep.bound = std::pow(grid.cell(cell).measure, s - beta) / rep.c_ba;
    const double slack = rep.bound * (1.0 + kBoundSlack);
    if (!rep.supported || rep.lower > slack)
        rep.verdict = AtomVerdict::refuted;
    else if (rep.upper <= slack)
        rep.verdict = AtomVerdict::certified;
    else
        rep.verdict = AtomVerdict::inconclusive;
    return rep;
}

AtomicRepresentation restrict(const AtomicRepresentation& rep, CellId w) {
    if (rep.kind != AtomKind::souza) throw ParameterError("restrict needs a canonical Souza representation");
    const Grid& grid = *rep.grid;
    AtomicRepresentation out = AtomicRepresentation::zero(rep.grid, rep.params);
    const double e = 1.0 / rep.params.p - rep.params.s;
    const double w_measure = grid.cell(w).measure;
    for (int k = 0; k < static_cast<int>(rep.coeffs.size()); ++k) {
        if (k <= w.level) {
            const CellId q = grid.ancestor(w, k);
            const double c = rep.coeffs[k][q.index];
            if (c != 0.0) out.coeffs[w.level][w.index] += c * std::pow(w_measure / grid.cell(q).measure, e);
        } else {
            const IndexRange r = grid.descendants(w, k);
            out.coeffs[k].segment(r.begin, r.size()) = rep.coeffs[k].segment(r.begin, r.size());
        }
    }
    out.positive = rep.positive;
    return out;
}

double incint_constant(double s, double p, double Lambda) {
    const double e = 1.0 / p - s;
    if (!(e > 0.0)) throw ParameterError("restriction constant needs s < 1/p");
    return 1.0 / (1.0 - std::pow(Lambda, e));
}

TransmutationRule identity_rule(double lambda) {
    TransmutationRule rule;
    rule.name = "identity";
    rule.lambda = lambda;
    rule.c_rf = 1.0;
    rule.positive = true;
    rule.expand = [](CellId q, const LeafFunction& atom) {
        return std::vector<ExpansionTerm>{{q, 1.0, atom}};
    };
    return rule;
}

TransmutationRule restriction_rule(GridPtr grid, CellId w, double s, double p, double Lambda) {
    TransmutationRule rule;
    rule.name = "restriction";
    rule.lambda = std::pow(Lambda, 1.0 - s * p);
    rule.c_rf = 1.0;
    rule.positive = true;
    const double e = 1.0 / p - s;
    rule.expand = [grid, w, e](CellId q, const LeafFunction&) {
        std::vector<ExpansionTerm> terms;
        if (grid->contains(q, w))
            terms.push_back({w, std::pow(grid->cell(w).measure / grid->cell(q).measure, e), std::nullopt});
        else if (grid->contains(w, q))
            terms.push_back({q, 1.0, std::nullopt});
        return terms;
    };
    return rule;
}

TransmutationRule holder_rule(const BesovParams& params, double gamma, const GridGeometry& geometry,
                              bool signed_atoms) {
    if (!(gamma > params.s)) throw ParameterError("Hölder rule needs gamma > s");
    TransmutationRule rule;
    rule.name = "holder";
    rule.lambda = std::pow(geometry.lambda_max, (gamma - params.s) * params.p);
    rule.c_rf = std::max(1.0, std::pow(geometry.lambda_min, -gamma * params.p));
    if (signed_atoms) rule.c_rf *= std::pow(2.0, params.p);
    rule.positive = !signed_atoms;
    rule.expand = [params](CellId q, const LeafFunction& atom) {
        const AtomicRepresentation r = holder_to_souza(atom, q, params, params.s, true);
        const Grid& grid = *r.grid;
        std::vector<ExpansionTerm> terms;
        for (int k = q.level; k < static_cast<int>(r.coeffs.size()); ++k) {
            const IndexRange range = grid.descendants(q, k);
            for (int i = range.begin; i < range.end; ++i)
                if (r.coeffs[k][i] != 0.0) terms.push_back({CellId{k, i}, r.coeffs[k][i], std::nullopt});
        }
        return terms;
    };
    return rule;
}

TransmutationResult transmute(const AtomicRepresentation& rep, const TransmutationRule& rule) {
    const GridPtr& grid = rep.grid;
    const double p = rep.params.p;
    const double s = rep.params.s;
    TransmutationResult result;
    AtomicRepresentation canon = AtomicRepresentation::zero(grid, rep.params);
    result.mass = canon.coeffs;
    std::map<CellId, LeafFunction> attached;

    for (int k = 0; k < static_cast<int>(rep.coeffs.size()); ++k) {
        for (int i = 0; i < rep.coeffs[k].size(); ++i) {
            const double c = rep.coeffs[k][i];
            if (c == 0.0) continue;
            const CellId q{k, i};
            const LeafFunction atom =
                rep.kind == AtomKind::souza ? canonical_souza_atom(grid, q, s, p, k) : rep.atoms.at(q);
            const std::vector<ExpansionTerm> terms = rule.expand(q, atom);
            std::map<int, double> level_mass;
            for (const ExpansionTerm& t : terms) {
                if (t.cell.level < k || !grid->contains(q, t.cell))
                    throw DecayViolation("rule " + rule.name + ": atom on " + to_string(q) +
                                         " expands outside its cell at level " + std::to_string(t.cell.level));
                level_mass[t.cell.level] += std::pow(std::abs(t.weight), p);
            }
            for (const auto& [level, mass] : level_mass) {
                const double allowed = rule.c_rf * std::pow(rule.lambda, level - k);
                if (mass > allowed * (1.0 + kDecaySlack))
                    throw DecayViolation("rule " + rule.name + ": atom on " + to_string(q) + " exceeds its decay at level " +
                                         std::to_string(level) + " (mass " + std::to_string(mass) + " > " +
                                         std::to_string(allowed) + ")");
            }
            for (const ExpansionTerm& t : terms) {
                const double cw = c * t.weight;
                result.mass[t.cell.level][t.cell.index] += std::abs(cw);
                if (!t.atom) {
                    canon.coeffs[t.cell.level][t.cell.index] += cw;
                    continue;
                }
                auto it = attached.find(t.cell);
                if (it == attached.end()) {
                    attached.emplace(t.cell, *t.atom * cw);
                } else {
                    const int level = common_level(it->second, *t.atom);
                    it->second = refine(it->second, level) + refine(*t.atom, level) * cw;
                }
            }
        }
    }

    if (attached.empty()) {
        result.output = std::move(canon);
    } else {
        int level = 0;
        for (const auto& [id, f] : attached) level = std::max({level, f.level(), id.level});
        for (int k = 0; k < static_cast<int>(canon.coeffs.size()); ++k)
            for (int i = 0; i < canon.coeffs[k].size(); ++i)
                if (canon.coeffs[k][i] != 0.0) level = std::max(level, k);
        AtomicRepresentation out = AtomicRepresentation::zero(grid, rep.params);
        out.kind = AtomKind::attached;
        for (int k = 0; k < static_cast<int>(result.mass.size()); ++k) {
            for (int i = 0; i < result.mass[k].size(); ++i) {
                const double m = result.mass[k][i];
                if (m == 0.0) continue;
                const CellId id{k, i};
                LeafFunction numer = canonical_souza_atom(grid, id, s, p, level) * canon.coeffs[k][i];
                if (auto it = attached.find(id); it != attached.end()) numer = numer + refine(it->second, level);
                out.coeffs[k][i] = m;
                out.atoms.emplace(id, numer * (1.0 / m));
            }
        }
        result.output = std::move(out);
    }
    result.output.positive = rep.positive && rule.positive && result.output.all_nonnegative();

    TransmutationReport& report = result.report;
    report.input_cost = rep.cost();
    report.output_cost = lq_lp_cost(result.mass, Exponent(p), rep.params.q);
    report.c_co2 = convolution_trick_constant(p, rep.params.q, TwoSidedSequence{0, NonnegSequence::geometric(1.0, rule.lambda)})
                       .value;
    report.bound = std::pow(rule.c_rf, 1.0 / p) * report.c_co2 * report.input_cost;
    report.bound_holds = report.output_cost <= report.bound * (1.0 + kDecaySlack);
    const int level = std::max(rep.resolution(), result.output.resolution());
    report.synthesis_error =
        (result.output.synthesize(level).values() - rep.synthesize(level).values()).cwiseAbs().maxCoeff();
    report.positive = result.output.positive;
    return result;
}

}  // namespace besov
