#pragma once

#include <vector>

#include "besov/representation.hpp"

namespace besov {

/// Maximal-cell tiling of an interval [a, b) and the per-level check
///   sum_{Q in F^k} |Q|^alpha <= K c^(k - k0) |Omega|^alpha,  k >= k0,
/// where k0 is the shallowest level holding a tile.
struct RegularityReport {
    double a = 0.0;
    double b = 0.0;
    double alpha = 1.0;
    double K = 2.0;
    double c = 0.5;
    int k0 = 0;
    double measure = 0.0;
    std::vector<std::vector<CellId>> families;  ///< tiles by level, index = level
    std::vector<double> level_sums;             ///< sum |Q|^alpha per level
    std::vector<double> allowed;                ///< K c^(k-k0) |Omega|^alpha (0 above k0)
    bool tiles = false;                         ///< tile measures add up to b - a within 1e-12
    bool passed = false;
};

/// Tiles [a, b) by maximal grid cells contained in it. Endpoints must fall on
/// leaf boundaries of the grid (multiples of 2^-depth on a dyadic grid).
/// Claimed (K, c) default to (2, 2^-alpha), i.e. (2, 2^(s-1)) for alpha = 1 - s.
RegularityReport interval_regular_decompose(double a, double b, const Grid& grid, double alpha);
RegularityReport interval_regular_decompose(double a, double b, const Grid& grid, double alpha, double K, double c);

/// K^(1/p) / (1 - c^(q/p))^(1/q) |Omega|^(1/p - s); K^(1/p) |Omega|^(1/p - s) for q = inf.
double indicator_norm_bound(const RegularityReport& report, const BesovParams& params);

struct IntervalTerm {
    double c = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct IntervalRepCost {
    double cost = 0.0;             ///< sum |c_i|
    AtomicRepresentation souza;    ///< induced canonical Souza representation (p = q = 1)
    double souza_cost = 0.0;
    double constant = 0.0;         ///< K / (1 - c) over the tilings used
};

/// f = sum_i c_i 1_[a_i, b_i) / |[a_i, b_i)|^(1-s), rewritten over canonical Souza atoms by tiling each interval.
IntervalRepCost interval_rep_cost(const std::vector<IntervalTerm>& terms, GridPtr grid, const BesovParams& params);

/// A canonical Souza representation read as interval terms: c_Q a_Q = c_Q 1_Q / |Q|^(1-s).
std::vector<IntervalTerm> souza_as_interval_terms(const AtomicRepresentation& rep);

}  // namespace besov
