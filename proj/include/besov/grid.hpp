#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace besov {

/// Stable cell identifier: level plus position within the level.
///
/// Levels are stored in canonical breadth-first order (children of earlier
/// parents first, siblings by ordinal), so the descendants of a cell at any
/// finer level form a contiguous index range.
struct CellId {
    int level = 0;
    int index = 0;

    friend auto operator<=>(const CellId&, const CellId&) = default;
};

/// Level-prefixed integer form used in serialized files: (level << 32) | index.
std::uint64_t encode(CellId id);
CellId decode_cell_id(std::uint64_t code);
std::string to_string(CellId id);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
};

struct Cell {
    CellId id;
    double measure = 0.0;
    std::optional<CellId> parent;
    int first_child = 0;  ///< index of the first child at level + 1
    int child_count = 0;
    int ordinal = 0;      ///< position among siblings
    std::optional<Interval> interval;

    bool is_leaf() const { return child_count == 0; }
};

enum class GridKind { dyadic, explicit_tree };

struct IndexRange {
    int begin = 0;
    int end = 0;
    int size() const { return end - begin; }
};

/// Finite-depth nested partition tree with per-cell measures.
///
/// Immutable after construction. Structural consistency (parent and child
/// references agree, canonical ordering) is enforced here; the measure
/// conditions of a good grid are checked by validate_good().
class Grid {
public:
    Grid(GridKind kind, std::vector<std::vector<Cell>> levels);

    GridKind kind() const { return kind_; }
    int depth() const { return static_cast<int>(levels_.size()) - 1; }
    int level_size(int level) const { return static_cast<int>(levels_.at(level).size()); }
    std::span<const Cell> level(int level) const { return levels_.at(level); }
    const Cell& cell(CellId id) const;
    const Cell& root() const { return levels_.front().front(); }
    std::span<const Cell> children(const Cell& c) const;
    double root_measure() const;

    std::size_t cell_count() const { return level_offset_.back(); }
    std::size_t flat_index(CellId id) const { return level_offset_[id.level] + id.index; }
    CellId from_flat(std::size_t flat) const;

    bool has_intervals() const { return has_intervals_; }

    /// Descendants of `id` at `level` (>= id.level) as an index range of that level.
    IndexRange descendants(CellId id, int level) const;

    /// The unique ancestor of `id` at `level` (<= id.level).
    CellId ancestor(CellId id, int level) const;

    /// True when `inner` is `outer` or one of its descendants.
    bool contains(CellId outer, CellId inner) const;

private:
    GridKind kind_;
    std::vector<std::vector<Cell>> levels_;
    std::vector<std::size_t> level_offset_;
    bool has_intervals_ = false;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Dyadic grid of [0,1): level k holds the 2^k intervals [i/2^k, (i+1)/2^k).
Grid build_dyadic(int depth);

struct RandomGridOptions {
    int min_children = 2;
    int max_children = 2;
    double lambda = 0.5;  ///< lower bound on child/parent measure ratio
    double Lambda = 0.5;  ///< upper bound on child/parent measure ratio
    int depth = 3;
    std::uint64_t seed = 0;
};

/// Random good grid on [0,1) with child/parent ratios pinched in [lambda, Lambda].
///
/// Child fractions are flat simplex samples accepted only when every
/// fraction lies in the bounds; at most 10,000 draws per cell. The last
/// child absorbs rounding so children sum exactly to the parent.
Grid build_random_good(const RandomGridOptions& options);

/// The grid induced on the subtree under `root`, re-rooted at level 0.
///
/// Induced cell (i, j) corresponds to original cell
/// (root.level + i, descendants(root, root.level + i).begin + j).
Grid induced_grid(const Grid& grid, CellId root);

/// Observed geometry of a good grid.
struct GridGeometry {
    bool has_ratios = false;  ///< false for a depth-0 grid
    double lambda_min = 0.0;  ///< minimum child/parent measure ratio
    double lambda_max = 0.0;  ///< maximum child/parent measure ratio
    std::vector<double> level_max_measure;
    int overlap_bound = 1;  ///< C_m1; partitions have Omega_Q = {Q}
    double root_measure = 1.0;
    int max_children = 0;
};

/// Checks the good-grid conditions and returns the observed geometry.
///
/// Throws GridViolation tagged G1..G6 (or "needs >= 2 children") naming the
/// offending cell.
GridGeometry validate_good(const Grid& grid);

/// Geometry of the induced grid under `root`, keeping the parent's ratio bounds.
GridGeometry induced_geometry(const Grid& grid, const GridGeometry& parent, CellId root);

}  // namespace besov
