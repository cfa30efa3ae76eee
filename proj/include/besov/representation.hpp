#pragma once

#include <map>

#include "besov/grid.hpp"
#include "besov/leaf_function.hpp"
#include "besov/params.hpp"
#include "besov/sequence.hpp"

namespace besov {

enum class AtomKind { souza, attached };

/// f = sum_Q c_Q a_Q over grid cells.
///
/// For `souza` the atoms are canonical: a_Q = |Q|^(s - 1/p) on Q. For
/// `attached` every nonzero coefficient has an explicit atom in `atoms`.
struct AtomicRepresentation {
    GridPtr grid;
    BesovParams params;
    LevelCoefficients coeffs;  ///< coeffs[k][i] is c_Q for Q = (k, i); one vector per grid level
    AtomKind kind = AtomKind::souza;
    std::map<CellId, LeafFunction> atoms;
    bool positive = false;

    static AtomicRepresentation zero(GridPtr grid, const BesovParams& params);

    double coefficient(CellId id) const { return coeffs[id.level][id.index]; }
    void set(CellId id, double value) { coeffs[id.level][id.index] = value; }

    /// l_q(l_p) cost of the coefficients.
    double cost() const;

    /// Deepest level carrying a nonzero coefficient (or an attached atom's resolution); 0 if none.
    int resolution() const;

    /// Sum of c_Q a_Q resolved at `level`.
    LeafFunction synthesize(int level) const;

    /// True when every coefficient and every attached atom is nonnegative.
    bool all_nonnegative() const;
};

/// The canonical Souza atom |Q|^(s - 1/p) 1_Q resolved at `level`.
LeafFunction canonical_souza_atom(GridPtr grid, CellId cell, double s, double p, int level);

}  // namespace besov
