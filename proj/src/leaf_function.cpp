#include "besov/leaf_function.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace besov {

LeafFunction::LeafFunction(GridPtr grid, int level, Eigen::VectorXd values)
    : grid_(std::move(grid)), level_(level), values_(std::move(values)) {
    if (!grid_) throw ParameterError("leaf function needs a grid");
    if (level_ < 0 || level_ > grid_->depth()) throw ParameterError("resolution level exceeds grid depth");
    if (values_.size() != grid_->level_size(level_))
        throw ParameterError("expected " + std::to_string(grid_->level_size(level_)) + " values at level " +
                             std::to_string(level_) + ", got " + std::to_string(values_.size()));
}

LeafFunction LeafFunction::zero(GridPtr grid, int level) {
    const int n = grid->level_size(level);
    return LeafFunction(std::move(grid), level, Eigen::VectorXd::Zero(n));
}

Eigen::VectorXd level_measures(const Grid& grid, int level) {
    const auto cells = grid.level(level);
    Eigen::VectorXd m(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) m[static_cast<Eigen::Index>(i)] = cells[i].measure;
    return m;
}

Eigen::VectorXd LeafFunction::level_integrals(int k) const {
    if (k < 0 || k > grid_->depth()) throw ParameterError("level out of range");
    if (k >= level_) {
        const auto cells = grid_->level(k);
        Eigen::VectorXd out(static_cast<Eigen::Index>(cells.size()));
        for (std::size_t i = 0; i < cells.size(); ++i)
            out[static_cast<Eigen::Index>(i)] = cells[i].measure * value_on(cells[i].id);
        return out;
    }
    Eigen::VectorXd current = values_.cwiseProduct(level_measures(*grid_, level_));
    for (int j = level_ - 1; j >= k; --j) {
        const auto cells = grid_->level(j);
        Eigen::VectorXd up(static_cast<Eigen::Index>(cells.size()));
        for (std::size_t i = 0; i < cells.size(); ++i)
            up[static_cast<Eigen::Index>(i)] = current.segment(cells[i].first_child, cells[i].child_count).sum();
        current = std::move(up);
    }
    return current;
}

Eigen::VectorXd LeafFunction::level_averages(int k) const {
    return level_integrals(k).cwiseQuotient(level_measures(*grid_, k));
}

double LeafFunction::integral() const { return values_.dot(level_measures(*grid_, level_)); }

double LeafFunction::cell_integral(CellId id) const {
    if (id.level >= level_) return grid_->cell(id).measure * value_on(id);
    const IndexRange r = grid_->descendants(id, level_);
    return values_.segment(r.begin, r.size()).dot(level_measures(*grid_, level_).segment(r.begin, r.size()));
}

double LeafFunction::value_on(CellId id) const {
    if (id.level < level_) throw ParameterError("function is not constant on cells above its resolution level");
    return values_[grid_->ancestor(id, level_).index];
}

int common_level(const LeafFunction& f, const LeafFunction& g) {
    if (&f.grid() != &g.grid()) throw ParameterError("functions live on different grids");
    return std::max(f.level(), g.level());
}

LeafFunction LeafFunction::operator+(const LeafFunction& other) const {
    const int k = common_level(*this, other);
    return LeafFunction(grid_, k, refine(*this, k).values() + refine(other, k).values());
}

LeafFunction LeafFunction::operator-(const LeafFunction& other) const {
    const int k = common_level(*this, other);
    return LeafFunction(grid_, k, refine(*this, k).values() - refine(other, k).values());
}

LeafFunction LeafFunction::operator*(double t) const { return LeafFunction(grid_, level_, values_ * t); }

double lp_norm(const LeafFunction& f, Exponent p) {
    if (p.is_infinite()) return f.values().size() == 0 ? 0.0 : f.values().cwiseAbs().maxCoeff();
    return lp_norm(f, p.value());
}

double lp_norm(const LeafFunction& f, double p) {
    if (std::isinf(p)) return lp_norm(f, Exponent::infinity());
    if (!(p > 0.0)) throw ParameterError("p must be positive");
    const Eigen::VectorXd m = level_measures(f.grid(), f.level());
    return std::pow(f.values().cwiseAbs().array().pow(p).matrix().dot(m), 1.0 / p);
}

LeafFunction refine(const LeafFunction& f, int level) {
    if (level > f.grid().depth()) throw ParameterError("refine level exceeds grid depth");
    if (level < f.level()) throw ParameterError("refine cannot coarsen");
    Eigen::VectorXd v = f.values();
    for (int k = f.level(); k < level; ++k) {
        const auto cells = f.grid().level(k);
        Eigen::VectorXd next(f.grid().level_size(k + 1));
        for (std::size_t i = 0; i < cells.size(); ++i)
            next.segment(cells[i].first_child, cells[i].child_count).setConstant(v[static_cast<Eigen::Index>(i)]);
        v = std::move(next);
    }
    return LeafFunction(f.grid_ptr(), level, std::move(v));
}

Generator Generator::parse(const std::string& text) {
    Generator g;
    const auto open = text.find('(');
    g.name = text.substr(0, open);
    if (open != std::string::npos) {
        const auto close = text.rfind(')');
        if (close == std::string::npos || close < open) throw ParameterError("unbalanced parentheses in '" + text + "'");
        std::stringstream inner(text.substr(open + 1, close - open - 1));
        std::string item;
        while (std::getline(inner, item, ',')) {
            try {
                std::size_t used = 0;
                g.args.push_back(std::stod(item, &used));
            } catch (const std::exception&) {
                throw ParameterError("bad generator argument '" + item + "'");
            }
        }
    }
    if (g.name == "random_leaf") {
        if (g.args.size() > 1) throw ParameterError("random_leaf takes one seed");
        g.seed = g.args.empty() ? 0 : static_cast<std::uint64_t>(g.args[0]);
    }
    return g;
}

std::string Generator::to_string() const {
    std::ostringstream out;
    out << name;
    if (!args.empty()) {
        out << '(';
        for (std::size_t i = 0; i < args.size(); ++i) out << (i ? "," : "") << args[i];
        out << ')';
    }
    return out.str();
}

LeafFunction sample(GridPtr grid, int level, const Generator& gen) {
    if (level < 0 || level > grid->depth()) throw ParameterError("sampling level out of range");
    const auto cells = grid->level(level);
    const auto n = static_cast<Eigen::Index>(cells.size());
    Eigen::VectorXd v(n);
    auto need_args = [&](std::size_t count) {
        if (gen.args.size() != count)
            throw ParameterError(gen.name + " expects " + std::to_string(count) + " argument(s)");
    };
    auto need_intervals = [&] {
        if (!grid->has_intervals()) throw ParameterError(gen.name + " needs a grid with interval metadata");
    };
    auto midpoint = [&](Eigen::Index i) { return 0.5 * (cells[i].interval->lo + cells[i].interval->hi); };

    if (gen.name == "constant") {
        need_args(1);
        v.setConstant(gen.args[0]);
    } else if (gen.name == "random_leaf") {
        std::mt19937_64 rng(gen.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
    } else if (gen.name == "indicator") {
        need_args(2);
        need_intervals();
        const double a = gen.args[0];
        const double b = gen.args[1];
        for (Eigen::Index i = 0; i < n; ++i) {
            const Interval& I = *cells[i].interval;
            const double overlap = std::max(0.0, std::min(b, I.hi) - std::max(a, I.lo));
            v[i] = overlap / I.length();
        }
    } else if (gen.name == "linear") {
        need_args(0);
        need_intervals();
        for (Eigen::Index i = 0; i < n; ++i) v[i] = midpoint(i);
    } else if (gen.name == "power") {
        need_args(1);
        need_intervals();
        for (Eigen::Index i = 0; i < n; ++i) v[i] = std::pow(midpoint(i), gen.args[0]);
    } else if (gen.name == "sine") {
        need_args(1);
        need_intervals();
        for (Eigen::Index i = 0; i < n; ++i) v[i] = std::sin(gen.args[0] * midpoint(i));
    } else {
        throw ParameterError("unknown generator '" + gen.name + "'");
    }
    return LeafFunction(std::move(grid), level, std::move(v));
}

}  // namespace besov
