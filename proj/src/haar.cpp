#include "besov/haar.hpp"

#include <cmath>
#include <deque>

namespace besov {

double SplitPair::value_on_child(int ordinal) const {
    if (ordinal >= first && ordinal < mid) return value1;
    if (ordinal >= mid && ordinal < last) return value2;
    return 0.0;
}

AmplitudeConstants amplitude_constants(double lambda, double Lambda) {
    AmplitudeConstants c;
    c.c1 = std::pow(lambda, 1.5) / (std::sqrt(2.0) * Lambda);
    c.c2 = std::sqrt(Lambda) / (std::sqrt(2.0) * std::pow(lambda, 1.5)) + 1.0;
    return c;
}

HaarSystem::HaarSystem(GridPtr grid) : grid_(std::move(grid)) {
    const Grid& g = *grid_;
    owner_begin_.assign(g.cell_count() + 1, 0);
    std::size_t flat = 0;
    for (int k = 0; k <= g.depth(); ++k) {
        for (const Cell& c : g.level(k)) {
            owner_begin_[flat] = static_cast<int>(pairs_.size());
            ++flat;
            if (c.child_count == 0) continue;
            if (c.child_count < 2)
                throw GridViolation("needs >= 2 children", to_string(c.id), "cannot split a single child");
            const auto children = g.children(c);
            struct Range {
                int first, last, depth;
            };
            std::deque<Range> queue{{0, c.child_count, 0}};
            int index = 0;
            while (!queue.empty()) {
                const Range r = queue.front();
                queue.pop_front();
                SplitPair s;
                s.id = PairId{c.id, index++};
                s.depth_in_tree = r.depth;
                s.first = r.first;
                s.mid = r.first + (r.last - r.first) / 2;
                s.last = r.last;
                for (int j = s.first; j < s.mid; ++j) s.mass1 += children[j].measure;
                for (int j = s.mid; j < s.last; ++j) s.mass2 += children[j].measure;
                s.m = std::sqrt(1.0 / s.mass1 + 1.0 / s.mass2);
                s.value1 = 1.0 / (s.m * s.mass1);
                s.value2 = -1.0 / (s.m * s.mass2);
                pairs_.push_back(s);
                if (s.mid - s.first >= 2) queue.push_back({s.first, s.mid, r.depth + 1});
                if (s.last - s.mid >= 2) queue.push_back({s.mid, s.last, r.depth + 1});
            }
        }
    }
    owner_begin_[flat] = static_cast<int>(pairs_.size());
}

IndexRange HaarSystem::pairs_of(CellId owner) const {
    const std::size_t f = grid_->flat_index(owner);
    return IndexRange{owner_begin_[f], owner_begin_[f + 1]};
}

int HaarSystem::global_index(PairId id) const {
    const IndexRange r = pairs_of(id.owner);
    if (id.index < 0 || id.index >= r.size()) throw ParameterError("unknown pair index");
    return r.begin + id.index;
}

int HaarSystem::pairs_above_level(int k) const {
    if (k > grid_->depth()) return pair_count();
    return owner_begin_[grid_->flat_index(CellId{k, 0})];
}

double HaarSystem::root_value() const { return 1.0 / std::sqrt(grid_->root().measure); }

LeafFunction HaarSystem::wavelet(int global) const {
    const SplitPair& s = pairs_.at(global);
    const Cell& owner = grid_->cell(s.id.owner);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid_->level_size(owner.id.level + 1));
    for (int j = s.first; j < s.last; ++j) v[owner.first_child + j] = s.value_on_child(j);
    return LeafFunction(grid_, owner.id.level + 1, std::move(v));
}

HaarSystem build_haar(GridPtr grid) { return HaarSystem(std::move(grid)); }

HaarCoefficients analyze(const LeafFunction& f, const HaarSystem& system) {
    if (&f.grid() != &system.grid()) throw ParameterError("function and Haar system use different grids");
    const Grid& g = system.grid();
    HaarCoefficients out;
    out.d = Eigen::VectorXd::Zero(system.pair_count());
    out.d_root = f.integral() * system.root_value();
    for (int k = 0; k < f.level(); ++k) {
        const Eigen::VectorXd child_integrals = f.level_integrals(k + 1);
        for (const Cell& c : g.level(k)) {
            const IndexRange r = system.pairs_of(c.id);
            for (int i = r.begin; i < r.end; ++i) {
                const SplitPair& s = system.pair(i);
                double a = 0.0;
                double b = 0.0;
                for (int j = s.first; j < s.mid; ++j) a += child_integrals[c.first_child + j];
                for (int j = s.mid; j < s.last; ++j) b += child_integrals[c.first_child + j];
                out.d[i] = s.value1 * a + s.value2 * b;
            }
        }
    }
    return out;
}

namespace {

LeafFunction synthesize_upto(const HaarCoefficients& coeffs, const HaarSystem& system, int level) {
    const Grid& g = system.grid();
    if (level < 0 || level > g.depth()) throw ParameterError("synthesis level out of range");
    if (coeffs.d.size() != system.pair_count()) throw ParameterError("coefficient count does not match the system");
    Eigen::VectorXd v(1);
    v[0] = coeffs.d_root * system.root_value();
    for (int k = 0; k < level; ++k) {
        Eigen::VectorXd next(g.level_size(k + 1));
        for (const Cell& c : g.level(k)) {
            next.segment(c.first_child, c.child_count).setConstant(v[c.id.index]);
            const IndexRange r = system.pairs_of(c.id);
            for (int i = r.begin; i < r.end; ++i) {
                const SplitPair& s = system.pair(i);
                const double d = coeffs.d[i];
                if (d == 0.0) continue;
                for (int j = s.first; j < s.mid; ++j) next[c.first_child + j] += d * s.value1;
                for (int j = s.mid; j < s.last; ++j) next[c.first_child + j] += d * s.value2;
            }
        }
        v = std::move(next);
    }
    return LeafFunction(system.grid_ptr(), level, std::move(v));
}

}  // namespace

LeafFunction synthesize(const HaarCoefficients& coeffs, const HaarSystem& system, int level) {
    if (coeffs.d.size() != system.pair_count()) throw ParameterError("coefficient count does not match the system");
    const int deep = system.pairs_above_level(level);
    for (int i = deep; i < system.pair_count(); ++i)
        if (coeffs.d[i] != 0.0)
            throw ParameterError("coefficient on pair owned by " + to_string(system.pair(i).id.owner) +
                                 " needs resolution level > " + std::to_string(level));
    return synthesize_upto(coeffs, system, level);
}

LeafFunction dirac_truncate(const HaarCoefficients& coeffs, const HaarSystem& system, int k0) {
    return synthesize_upto(coeffs, system, k0);
}

}  // namespace besov
