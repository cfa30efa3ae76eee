#pragma once

#include <Eigen/Dense>
#include <vector>

#include "besov/grid.hpp"
#include "besov/leaf_function.hpp"

namespace besov {

/// Pair identifier: owner cell plus position within H_Q.
struct PairId {
    CellId owner;
    int index = 0;

    friend auto operator<=>(const PairId&, const PairId&) = default;
};

/// One split S = (S1, S2) of the children of a cell.
///
/// Splits are always contiguous in sibling order, so S1 is the child ordinal
/// range [first, mid) and S2 is [mid, last).
struct SplitPair {
    PairId id;
    int depth_in_tree = 0;
    int first = 0;
    int mid = 0;
    int last = 0;
    double mass1 = 0.0;  ///< sum of |P| over S1
    double mass2 = 0.0;  ///< sum of |R| over S2
    double m = 0.0;      ///< (1/mass1 + 1/mass2)^(1/2)
    double value1 = 0.0; ///< phi_S on S1 cells:  1/(m mass1)
    double value2 = 0.0; ///< phi_S on S2 cells: -1/(m mass2)

    int size() const { return last - first; }
    /// phi_S on the child with the given ordinal (0 outside S1 and S2).
    double value_on_child(int ordinal) const;
};

/// Amplitude bounds C1, C2 of the normalized wavelets for ratio bounds (lambda, Lambda).
struct AmplitudeConstants {
    double c1 = 0.0;
    double c2 = 0.0;
};
AmplitudeConstants amplitude_constants(double lambda, double Lambda);

/// The unbalanced Haar system of a grid: phi_I plus the pairs H_Q of every cell.
///
/// Pairs are stored in one array ordered by owner (level, index) and, within
/// an owner, by recursion depth then position, so H_Q is a contiguous range.
class HaarSystem {
public:
    explicit HaarSystem(GridPtr grid);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    int pair_count() const { return static_cast<int>(pairs_.size()); }
    const SplitPair& pair(int global) const { return pairs_[global]; }
    const std::vector<SplitPair>& pairs() const { return pairs_; }

    /// Global index range of H_Q.
    IndexRange pairs_of(CellId owner) const;
    int global_index(PairId id) const;

    /// Global index range of the pairs owned by cells of levels < k.
    int pairs_above_level(int k) const;

    /// phi_I value, 1/|I|^(1/2).
    double root_value() const;

    /// phi_S as a function resolved at the owner's child level.
    LeafFunction wavelet(int global) const;

private:
    GridPtr grid_;
    std::vector<SplitPair> pairs_;
    std::vector<int> owner_begin_;  ///< indexed by flat cell index, size cell_count + 1
};

HaarSystem build_haar(GridPtr grid);

/// d_I and d_S = integral of f phi_S, with d indexed by global pair index.
struct HaarCoefficients {
    double d_root = 0.0;
    Eigen::VectorXd d;
};

HaarCoefficients analyze(const LeafFunction& f, const HaarSystem& system);

/// Finite synthesis d_I phi_I + sum d_S phi_S, resolved at `level`.
///
/// Throws ParameterError when a pair owned by a cell of level >= `level` has a
/// nonzero coefficient.
LeafFunction synthesize(const HaarCoefficients& coeffs, const HaarSystem& system, int level);

/// Truncation keeping phi_I and the pairs owned by levels < k0, resolved at k0.
LeafFunction dirac_truncate(const HaarCoefficients& coeffs, const HaarSystem& system, int k0);

}  // namespace besov
