#include "besov/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "besov/errors.hpp"

namespace besov {

std::uint64_t encode(CellId id) {
    return (static_cast<std::uint64_t>(id.level) << 32) | static_cast<std::uint32_t>(id.index);
}

CellId decode_cell_id(std::uint64_t code) {
    return CellId{static_cast<int>(code >> 32), static_cast<int>(code & 0xffffffffu)};
}

std::string to_string(CellId id) {
    return std::to_string(encode(id)) + " (level " + std::to_string(id.level) + ", index " +
           std::to_string(id.index) + ")";
}

Grid::Grid(GridKind kind, std::vector<std::vector<Cell>> levels) : kind_(kind), levels_(std::move(levels)) {
    if (levels_.empty() || levels_.front().empty()) throw ParameterError("grid has no root level");
    level_offset_.assign(levels_.size() + 1, 0);
    has_intervals_ = true;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        level_offset_[k + 1] = level_offset_[k] + levels_[k].size();
        int expected_child = 0;
        for (std::size_t i = 0; i < levels_[k].size(); ++i) {
            const Cell& c = levels_[k][i];
            const std::string where = to_string(CellId{static_cast<int>(k), static_cast<int>(i)});
            if (c.id.level != static_cast<int>(k) || c.id.index != static_cast<int>(i))
                throw GridViolation("G5", where, "cell id does not match its position");
            if (!c.interval) has_intervals_ = false;
            if (k == 0) {
                if (c.parent) throw GridViolation("G5", where, "level-0 cell has a parent");
            } else if (!c.parent || c.parent->level != static_cast<int>(k) - 1) {
                throw GridViolation("G5", where, "non-root cell lacks a parent at the previous level");
            }
            if (c.child_count < 0) throw GridViolation("G5", where, "negative child count");
            if (c.child_count > 0) {
                if (k + 1 >= levels_.size() || c.first_child != expected_child ||
                    c.first_child + c.child_count > static_cast<int>(levels_[k + 1].size()))
                    throw GridViolation("G5", where, "children are not a contiguous range of the next level");
                for (int j = 0; j < c.child_count; ++j) {
                    const Cell& ch = levels_[k + 1][c.first_child + j];
                    if (!ch.parent || ch.parent->index != static_cast<int>(i) || ch.ordinal != j)
                        throw GridViolation("G5", to_string(ch.id), "parent/child links disagree");
                }
                expected_child += c.child_count;
            }
        }
        if (k + 1 < levels_.size() && expected_child != static_cast<int>(levels_[k + 1].size()))
            throw GridViolation("G5", to_string(CellId{static_cast<int>(k) + 1, expected_child}),
                                "cell is not a child of any cell at the previous level");
    }
}

const Cell& Grid::cell(CellId id) const {
    if (id.level < 0 || id.level > depth() || id.index < 0 || id.index >= level_size(id.level))
        throw ParameterError("unknown cell " + to_string(id));
    return levels_[id.level][id.index];
}

std::span<const Cell> Grid::children(const Cell& c) const {
    if (c.child_count == 0) return {};
    return std::span<const Cell>(levels_[c.id.level + 1]).subspan(c.first_child, c.child_count);
}

double Grid::root_measure() const {
    double total = 0.0;
    for (const Cell& c : levels_.front()) total += c.measure;
    return total;
}

CellId Grid::from_flat(std::size_t flat) const {
    for (std::size_t k = 0; k + 1 < level_offset_.size(); ++k)
        if (flat < level_offset_[k + 1])
            return CellId{static_cast<int>(k), static_cast<int>(flat - level_offset_[k])};
    throw ParameterError("flat cell index out of range");
}

IndexRange Grid::descendants(CellId id, int level) const {
    if (level < id.level || level > depth()) throw ParameterError("descendant level out of range");
    IndexRange r{id.index, id.index + 1};
    for (int k = id.level; k < level; ++k) {
        const auto& row = levels_[k];
        int begin = -1;
        int end = -1;
        for (int i = r.begin; i < r.end; ++i) {
            if (row[i].child_count == 0) continue;
            if (begin < 0) begin = row[i].first_child;
            end = row[i].first_child + row[i].child_count;
        }
        if (begin < 0) return IndexRange{0, 0};
        r = IndexRange{begin, end};
    }
    return r;
}

CellId Grid::ancestor(CellId id, int level) const {
    if (level > id.level || level < 0) throw ParameterError("ancestor level out of range");
    while (id.level > level) id = *cell(id).parent;
    return id;
}

bool Grid::contains(CellId outer, CellId inner) const {
    if (inner.level < outer.level) return false;
    return ancestor(inner, outer.level) == outer;
}

namespace {

// Appends `n` children to `parent`, splitting its measure (and interval, if any) by `fractions`.
void append_children(std::vector<std::vector<Cell>>& levels, int k, int parent_index,
                     const std::vector<double>& fractions) {
    if (static_cast<int>(levels.size()) <= k + 1) levels.emplace_back();
    Cell& parent = levels[k][parent_index];
    auto& next = levels[k + 1];
    parent.first_child = static_cast<int>(next.size());
    parent.child_count = static_cast<int>(fractions.size());
    double used = 0.0;
    double lo = parent.interval ? parent.interval->lo : 0.0;
    for (std::size_t j = 0; j < fractions.size(); ++j) {
        Cell c;
        c.id = CellId{k + 1, static_cast<int>(next.size())};
        c.parent = parent.id;
        c.ordinal = static_cast<int>(j);
        const bool last = j + 1 == fractions.size();
        c.measure = last ? parent.measure - used : parent.measure * fractions[j];
        used += c.measure;
        if (parent.interval) {
            const double hi = last ? parent.interval->hi : lo + c.measure * parent.interval->length() / parent.measure;
            c.interval = Interval{lo, hi};
            lo = hi;
        }
        next.push_back(c);
    }
}

Cell make_root() {
    Cell root;
    root.id = CellId{0, 0};
    root.measure = 1.0;
    root.interval = Interval{0.0, 1.0};
    return root;
}

}  // namespace

Grid build_dyadic(int depth) {
    if (depth < 0) throw ParameterError("depth must be nonnegative");
    if (depth > 30) throw ParameterError("dyadic depth above 30 is not supported");
    std::vector<std::vector<Cell>> levels{{make_root()}};
    for (int k = 0; k < depth; ++k) {
        levels.emplace_back();
        levels[k + 1].reserve(levels[k].size() * 2);
        const double h = std::ldexp(1.0, -(k + 1));
        for (int i = 0; i < static_cast<int>(levels[k].size()); ++i) {
            Cell& parent = levels[k][i];
            parent.first_child = 2 * i;
            parent.child_count = 2;
            for (int j = 0; j < 2; ++j) {
                Cell c;
                c.id = CellId{k + 1, 2 * i + j};
                c.parent = parent.id;
                c.ordinal = j;
                c.measure = h;
                c.interval = Interval{(2 * i + j) * h, (2 * i + j + 1) * h};
                levels[k + 1].push_back(c);
            }
        }
    }
    return Grid(GridKind::dyadic, std::move(levels));
}

Grid build_random_good(const RandomGridOptions& o) {
    if (o.depth < 0) throw ParameterError("depth must be nonnegative");
    if (o.min_children < 2 || o.max_children < o.min_children)
        throw ParameterError("child range must satisfy 2 <= min <= max");
    if (!(o.lambda > 0.0) || !(o.lambda <= o.Lambda) || !(o.Lambda < 1.0))
        throw ParameterError("ratio bounds must satisfy 0 < lambda <= Lambda < 1");
    for (int n = o.min_children; n <= o.max_children; ++n) {
        if (n * o.lambda > 1.0 + 1e-12 || n * o.Lambda < 1.0 - 1e-12)
            throw ParameterError("infeasible ratio bounds for " + std::to_string(n) +
                                 " children: need n*lambda <= 1 <= n*Lambda");
    }
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<int> count(o.min_children, o.max_children);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double slack = 1e-12;

    std::vector<std::vector<Cell>> levels{{make_root()}};
    std::vector<double> fractions;
    for (int k = 0; k < o.depth; ++k) {
        levels.emplace_back();
        for (int i = 0; i < static_cast<int>(levels[k].size()); ++i) {
            const int n = count(rng);
            fractions.assign(n, 1.0 / n);
            if (o.lambda < o.Lambda) {
                bool accepted = false;
                for (int attempt = 0; attempt < 10000 && !accepted; ++attempt) {
                    double total = 0.0;
                    for (double& f : fractions) {
                        f = -std::log1p(-unit(rng));
                        total += f;
                    }
                    accepted = true;
                    for (double& f : fractions) {
                        f /= total;
                        if (f < o.lambda - slack || f > o.Lambda + slack) accepted = false;
                    }
                }
                if (!accepted)
                    throw ParameterError("random grid: no admissible split found in 10000 attempts");
            }
            append_children(levels, k, i, fractions);
        }
    }
    return Grid(GridKind::explicit_tree, std::move(levels));
}

Grid induced_grid(const Grid& grid, CellId root) {
    (void)grid.cell(root);
    std::vector<std::vector<Cell>> levels;
    for (int k = root.level; k <= grid.depth(); ++k) {
        const IndexRange r = grid.descendants(root, k);
        if (r.size() == 0) break;
        const int child_base = k < grid.depth() ? grid.descendants(root, k + 1).begin : 0;
        std::vector<Cell> row;
        row.reserve(r.size());
        for (int i = r.begin; i < r.end; ++i) {
            Cell c = grid.level(k)[i];
            c.id = CellId{k - root.level, i - r.begin};
            if (k == root.level) {
                c.parent.reset();
                c.ordinal = 0;
            } else {
                const IndexRange pr = grid.descendants(root, k - 1);
                c.parent = CellId{k - 1 - root.level, c.parent->index - pr.begin};
            }
            if (c.child_count > 0) c.first_child -= child_base;
            row.push_back(c);
        }
        levels.push_back(std::move(row));
    }
    return Grid(GridKind::explicit_tree, std::move(levels));
}

namespace {

constexpr double kRelTol = 1e-12;

bool close_rel(double a, double b) { return std::abs(a - b) <= kRelTol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

GridGeometry validate_good(const Grid& grid) {
    if (grid.level_size(0) != 1)
        throw GridViolation("G1", to_string(CellId{0, 1}), "level 0 must contain exactly one cell");
    GridGeometry g;
    g.root_measure = grid.root().measure;
    g.lambda_min = 1.0;
    g.lambda_max = 0.0;
    for (int k = 0; k <= grid.depth(); ++k) {
        double total = 0.0;
        double level_max = 0.0;
        for (const Cell& c : grid.level(k)) {
            if (!(c.measure > 0.0) || !std::isfinite(c.measure))
                throw GridViolation("G2", to_string(c.id), "cell measure must be positive");
            total += c.measure;
            level_max = std::max(level_max, c.measure);
            if (c.child_count == 1)
                throw GridViolation("needs >= 2 children", to_string(c.id), "cell has a single child");
            if (c.child_count > 0) {
                g.max_children = std::max(g.max_children, c.child_count);
                double child_total = 0.0;
                for (const Cell& ch : grid.children(c)) {
                    if (!(ch.measure > 0.0))
                        throw GridViolation("G2", to_string(ch.id), "cell measure must be positive");
                    child_total += ch.measure;
                    const double ratio = ch.measure / c.measure;
                    g.lambda_min = std::min(g.lambda_min, ratio);
                    g.lambda_max = std::max(g.lambda_max, ratio);
                }
                if (!close_rel(child_total, c.measure))
                    throw GridViolation("G3", to_string(c.id), "children measures do not sum to the parent measure");
            } else if (k < grid.depth()) {
                throw GridViolation("G3", to_string(c.id), "leaf above the finest level leaves part of the next level uncovered");
            }
        }
        if (!close_rel(total, g.root_measure))
            throw GridViolation("G3", to_string(CellId{k, 0}), "level does not partition the root measure");
        g.level_max_measure.push_back(level_max);
    }
    if (grid.depth() == 0) {
        g.has_ratios = false;
        g.lambda_min = std::numeric_limits<double>::quiet_NaN();
        g.lambda_max = std::numeric_limits<double>::quiet_NaN();
        return g;
    }
    g.has_ratios = true;
    if (!(g.lambda_max < 1.0)) throw GridViolation("G6", to_string(CellId{1, 0}), "maximum child ratio must be < 1");
    for (int k = 1; k <= grid.depth(); ++k) {
        if (!(g.level_max_measure[k] < g.level_max_measure[k - 1]))
            throw GridViolation("G6", to_string(CellId{k, 0}), "level maximum measure does not decrease");
    }
    return g;
}

GridGeometry induced_geometry(const Grid& grid, const GridGeometry& parent, CellId root) {
    const Grid sub = induced_grid(grid, root);
    GridGeometry g;
    g.has_ratios = parent.has_ratios;
    g.lambda_min = parent.lambda_min;
    g.lambda_max = parent.lambda_max;
    g.overlap_bound = parent.overlap_bound;
    g.root_measure = sub.root().measure;
    for (int k = 0; k <= sub.depth(); ++k) {
        double m = 0.0;
        for (const Cell& c : sub.level(k)) m = std::max(m, c.measure);
        g.level_max_measure.push_back(m);
        if (k < sub.depth())
            for (const Cell& c : sub.level(k)) g.max_children = std::max(g.max_children, c.child_count);
    }
    return g;
}

}  // namespace besov
