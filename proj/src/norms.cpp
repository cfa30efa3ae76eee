#include "besov/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace besov {

AtomicRepresentation StandardRepresentation::to_atomic(GridPtr grid) const {
    AtomicRepresentation r = AtomicRepresentation::zero(std::move(grid), params);
    for (std::size_t j = 0; j < k.size() && j < r.coeffs.size(); ++j) r.coeffs[j] = k[j];
    return r;
}

StandardRepresentation standard_representation(const HaarCoefficients& coeffs, const BesovParams& params,
                                               const HaarSystem& system, int level) {
    const Grid& g = system.grid();
    const double p = params.p;
    const double s = params.s;
    StandardRepresentation rep;
    rep.params = params;
    rep.k_root = std::pow(g.root().measure, 1.0 / p - s - 0.5) * coeffs.d_root;
    rep.k.push_back(Eigen::VectorXd::Constant(1, rep.k_root));
    for (int j = 1; j <= g.depth(); ++j) rep.k.push_back(Eigen::VectorXd::Zero(g.level_size(j)));
    for (int k = 0; k < std::min(level, g.depth()); ++k) {
        for (const Cell& q : g.level(k)) {
            const IndexRange r = system.pairs_of(q.id);
            const auto children = g.children(q);
            for (int j = 0; j < q.child_count; ++j) {
                double detail = 0.0;
                for (int i = r.begin; i < r.end; ++i) detail += coeffs.d[i] * system.pair(i).value_on_child(j);
                rep.k[k + 1][q.first_child + j] = std::pow(children[j].measure, 1.0 / p - s) * detail;
            }
        }
    }
    return rep;
}

StandardRepresentation standard_representation(const LeafFunction& f, const BesovParams& params,
                                               const HaarSystem& system) {
    return standard_representation(analyze(f, system), params, system, f.level());
}

Eigen::VectorXd haar_level_terms(const HaarCoefficients& coeffs, const BesovParams& params, const HaarSystem& system) {
    const Grid& g = system.grid();
    const double p = params.p;
    const double s = params.s;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(g.depth() + 1);
    for (int k = 0; k < g.depth(); ++k) {
        double level = 0.0;
        for (const Cell& q : g.level(k)) {
            const IndexRange r = system.pairs_of(q.id);
            double inner = 0.0;
            for (int i = r.begin; i < r.end; ++i) inner += std::pow(std::abs(coeffs.d[i]), p);
            if (inner > 0.0) level += std::pow(q.measure, 1.0 - s * p - p / 2.0) * inner;
        }
        out[k] = std::pow(level, 1.0 / p);
    }
    return out;
}

double n_haar(const HaarCoefficients& coeffs, const BesovParams& params, const HaarSystem& system) {
    const Eigen::VectorXd t = haar_level_terms(coeffs, params, system);
    const double head = std::pow(system.grid().root().measure, 1.0 / params.p - params.s - 0.5) * std::abs(coeffs.d_root);
    return head + lq_norm(std::vector<double>(t.data(), t.data() + t.size()), params.q);
}

namespace {

Eigen::VectorXd st_level_terms(const StandardRepresentation& rep) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rep.k.size()));
    for (std::size_t j = 1; j < rep.k.size(); ++j)
        out[static_cast<Eigen::Index>(j)] = std::pow(rep.k[j].cwiseAbs().array().pow(rep.params.p).sum(), 1.0 / rep.params.p);
    return out;
}

}  // namespace

double n_st(const StandardRepresentation& rep) {
    const Eigen::VectorXd t = st_level_terms(rep);
    return std::abs(rep.k_root) + lq_norm(std::vector<double>(t.data() + 1, t.data() + t.size()), rep.params.q);
}

namespace {

struct Weighted {
    double value;
    double weight;
};

double golden_section(const std::vector<Weighted>& pts, double p, double lo, double hi) {
    auto F = [&](double c) {
        double acc = 0.0;
        for (const auto& w : pts) acc += w.weight * std::pow(std::abs(w.value - c), p);
        return acc;
    };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = F(x1);
    double f2 = F(x2);
    for (int it = 0; it < 300 && (b - a) > 1e-12 * std::max(std::abs(a) + std::abs(b), 1e-300); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = F(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = F(x2);
        }
    }
    return std::min({F(0.5 * (a + b)), f1, f2, F(lo), F(hi)});
}

}  // namespace

double osc_p(const LeafFunction& f, CellId cell, Exponent p) {
    if (cell.level >= f.level()) return 0.0;
    const Grid& g = f.grid();
    const IndexRange r = g.descendants(cell, f.level());
    const auto leaves = g.level(f.level());
    std::vector<Weighted> pts;
    pts.reserve(static_cast<std::size_t>(r.size()));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = r.begin; i < r.end; ++i) {
        pts.push_back({f.value(i), leaves[i].measure});
        lo = std::min(lo, f.value(i));
        hi = std::max(hi, f.value(i));
    }
    if (hi == lo) return 0.0;
    if (p.is_infinite()) return 0.5 * (hi - lo);
    const double pv = p.value();
    if (pv == 1.0) {
        std::sort(pts.begin(), pts.end(), [](const Weighted& a, const Weighted& b) { return a.value < b.value; });
        double total = 0.0;
        for (const auto& w : pts) total += w.weight;
        double run = 0.0;
        double median = pts.back().value;
        for (const auto& w : pts) {
            run += w.weight;
            if (run >= 0.5 * total) {
                median = w.value;
                break;
            }
        }
        double acc = 0.0;
        for (const auto& w : pts) acc += w.weight * std::abs(w.value - median);
        return acc;
    }
    if (pv == 2.0) {
        double total = 0.0;
        double mean = 0.0;
        for (const auto& w : pts) {
            total += w.weight;
            mean += w.weight * w.value;
        }
        mean /= total;
        double acc = 0.0;
        for (const auto& w : pts) acc += w.weight * (w.value - mean) * (w.value - mean);
        return std::sqrt(acc);
    }
    return std::pow(golden_section(pts, pv, lo, hi), 1.0 / pv);
}

Eigen::VectorXd osc_level_terms(const LeafFunction& f, const BesovParams& params) {
    const Grid& g = f.grid();
    const double p = params.p;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(g.depth() + 1);
    for (int k = 0; k < f.level(); ++k) {
        double level = 0.0;
        for (const Cell& q : g.level(k)) {
            const double o = osc_p(f, q.id, Exponent(p));
            if (o > 0.0) level += std::pow(q.measure, -params.s * p) * std::pow(o, p);
        }
        out[k] = std::pow(level, 1.0 / p);
    }
    return out;
}

double osc_seminorm(const LeafFunction& f, const BesovParams& params) {
    const Eigen::VectorXd t = osc_level_terms(f, params);
    return lq_norm(std::vector<double>(t.data(), t.data() + t.size()), params.q);
}

double n_osc(const LeafFunction& f, const BesovParams& params) {
    return std::pow(f.grid().root().measure, -params.s) * lp_norm(f, params.p) + osc_seminorm(f, params);
}

ConstantsReport equivalence_constants(const GridGeometry& geo, const BesovParams& params) {
    params.require_valid();
    if (!geo.has_ratios) throw ParameterError("equivalence constants need a grid of depth >= 1");
    const double lambda = geo.lambda_min;
    const double Lambda = geo.lambda_max;
    if (!(Lambda < 1.0) || !(lambda > 0.0)) throw ParameterError("degenerate ratio bounds");
    const double s = params.s;
    const double p = params.p;
    ConstantsReport c;
    c.lambda = lambda;
    c.Lambda = Lambda;
    c.params = params;
    c.level_max_measure = geo.level_max_measure;
    c.root_measure = geo.root_measure;
    const AmplitudeConstants a = amplitude_constants(lambda, Lambda);
    c.c1 = a.c1;
    c.c2 = a.c2;
    c.c_e = 1.0 + a.c2 * std::max(std::pow(Lambda, 1.0 / p - s), std::pow(lambda, 1.0 / p - s)) *
                      std::pow(lambda, -2.0 - 1.0 / p);

    NonnegSequence b;
    for (double m : geo.level_max_measure) b.head.push_back(std::pow(m, s * p));
    b.tail_start = std::pow(geo.level_max_measure.back() * Lambda, s * p);
    b.tail_ratio = std::pow(Lambda, s * p);
    const double m1 = std::pow(static_cast<double>(geo.overlap_bound), 1.0 + 1.0 / p);
    c.c_co = holder_trick_constant(p, params.q, b).value;
    if (!std::isfinite(c.c_co)) throw ParameterError("level-measure series diverges");
    c.c_kt = m1 * c.c_co;
    c.c_no = m1 * c.c_co * std::pow(geo.root_measure, -s) + 1.0 / (1.0 - std::pow(Lambda, s));
    return c;
}

std::string ChainCheck::first_failure() const {
    if (!st_le_haar) return "N_st <= C_e * N_haar";
    if (!haar_le_osc) return "N_haar <= C_c2 * N_osc";
    if (!osc_le_st) return "N_osc <= C_no * N_st";
    if (!embedding) return "|f|_p <= C_kt * N_st";
    return "";
}

namespace {

bool holds(double lhs, double rhs) { return lhs <= rhs * (1.0 + kChainTolerance) + 1e-300; }

double ratio(double lhs, double rhs) { return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0); }

}  // namespace

double bracket_lower(const LeafFunction& f, const BesovParams& params, const ConstantsReport& constants) {
    return n_osc(f, params) / constants.c_no;
}

NormReport norm_report(const LeafFunction& f, const BesovParams& params, const HaarSystem& system,
                       const GridGeometry& geometry) {
    params.require_valid();
    NormReport r;
    r.constants = equivalence_constants(geometry, params);
    const HaarCoefficients d = analyze(f, system);
    const StandardRepresentation st = standard_representation(d, params, system, f.level());
    r.haar_levels = haar_level_terms(d, params, system);
    r.st_levels = st_level_terms(st);
    r.osc_levels = osc_level_terms(f, params);
    r.n_haar = n_haar(d, params, system);
    r.n_st = n_st(st);
    r.lp = lp_norm(f, params.p);
    r.n_osc = std::pow(system.grid().root().measure, -params.s) * r.lp +
              lq_norm(std::vector<double>(r.osc_levels.data(), r.osc_levels.data() + r.osc_levels.size()), params.q);
    r.bracket_lower = r.n_osc / r.constants.c_no;
    r.bracket_upper = r.n_st;

    const ConstantsReport& c = r.constants;
    r.chain.st_le_haar = holds(r.n_st, c.c_e * r.n_haar);
    r.chain.haar_le_osc = holds(r.n_haar, c.c2 * r.n_osc);
    r.chain.osc_le_st = holds(r.n_osc, c.c_no * r.n_st);
    r.chain.embedding = holds(r.lp, c.c_kt * r.n_st);
    r.chain.ratio_st_haar = ratio(r.n_st, c.c_e * r.n_haar);
    r.chain.ratio_haar_osc = ratio(r.n_haar, c.c2 * r.n_osc);
    r.chain.ratio_osc_st = ratio(r.n_osc, c.c_no * r.n_st);
    r.chain.ratio_embedding = ratio(r.lp, c.c_kt * r.n_st);
    return r;
}

NormReport besov_bracket(const LeafFunction& f, const BesovParams& params, const HaarSystem& system,
                         const GridGeometry& geometry) {
    NormReport r = norm_report(f, params, system, geometry);
    if (!r.chain.passed()) {
        std::ostringstream msg;
        msg << "chain inequality violated: " << r.chain.first_failure() << " (params " << params.to_string()
            << ", N_haar=" << r.n_haar << ", N_st=" << r.n_st << ", N_osc=" << r.n_osc << ")";
        throw ChainViolation(msg.str());
    }
    return r;
}

}  // namespace besov
