#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "besov/representation.hpp"

namespace besov {

/// True iff f vanishes off `cell`, is constant on it and |f| <= |Q|^(s-1/p) (1e-12 relative slack).
bool souza_check(const LeafFunction& f, CellId cell, double s, double p);

/// Positive and negative parts of a Hölder-to-Souza decomposition.
struct HolderSouzaParts {
    AtomicRepresentation positive;
    AtomicRepresentation negative;
    AtomicRepresentation combined() const;
};

/// Decomposes phi (supported on `cell`) into canonical (beta, p) Souza atoms.
///
/// c_Q = min phi(Q) |Q|^(1/p-beta) and c_P = (min phi(P) - min phi(W)) |P|^(1/p-beta)
/// for P a child of W, both inside Q. Minima are taken over the leaf values
/// of phi. With `split` the positive and negative parts are decomposed
/// separately; without it negative values are an error.
HolderSouzaParts holder_to_souza_parts(const LeafFunction& phi, CellId cell, const BesovParams& params, double beta,
                                       bool split = true);
AtomicRepresentation holder_to_souza(const LeafFunction& phi, CellId cell, const BesovParams& params, double beta,
                                     bool split = true);

/// Per-level mass check for a Hölder-to-Souza output on an interval grid.
///
/// For phi with |phi(x) - phi(y)| <= H |x - y|^gamma (gamma >= beta) the
/// mass at level L > level(Q) obeys
///   sum_{P in P^L, P in Q} |c_P|^p <= H^p lambda^(-gamma p) |Q|^(1 + (gamma-beta) p) Lambda^((L-j)(gamma-beta) p).
struct HolderDecayCheck {
    std::vector<double> observed;  ///< indexed by L - level(Q), L = level(Q)+1 .. depth
    std::vector<double> bound;
    bool passed = true;
};
HolderDecayCheck holder_decay_check(const AtomicRepresentation& rep, CellId cell, double H, double gamma,
                                    const GridGeometry& geometry);

/// sup over increasing index chains of (sum |v_{i+1} - v_i|^(1/beta))^beta, by O(n^2) dynamic programming.
double sequence_variation(const std::vector<double>& values, double beta);

/// 1/beta-variation of f restricted to `cell` (leaf values in interval order). Requires intervals.
double bv_variation(const LeafFunction& f, CellId cell, double beta);
double bv_variation(const LeafFunction& f, double beta);

/// Bounded-variation atom: vanishes off Q, |a|_inf <= |Q|^(s-1/p) and var_(1/beta)(a, Q) <= |Q|^(s-1/p).
bool bv_atom_check(const LeafFunction& f, CellId cell, double s, double p, double beta);

enum class AtomVerdict { certified, refuted, inconclusive };
std::string to_string(AtomVerdict verdict);

struct BesovAtomReport {
    bool supported = true;  ///< g vanishes off Q
    double lower = 0.0;     ///< bracket_lower on the induced subtree
    double upper = 0.0;     ///< N_st on the induced subtree
    double c_ba = 1.0;
    double bound = 0.0;     ///< |Q|^(s-beta) / C_ba
    AtomVerdict verdict = AtomVerdict::inconclusive;
};

/// Brackets |g|_(B^beta_(p, q~)) on the subtree under Q against |Q|^(s-beta) / C_ba,
/// C_ba = (sum_(k>=0) Lambda^(k beta q~))^(1/q~) (1 for q~ = inf).
BesovAtomReport besov_atom_check(const LeafFunction& g, CellId cell, double s, double beta, double p, Exponent q_tilde,
                                 const GridGeometry& geometry);

/// Representation of 1_W f for a canonical Souza representation.
///
/// Ancestors Q of W contribute c_Q (|W|/|Q|)^(1/p-s) on W, cells inside W
/// keep their coefficient, all others drop. The result lives on the same grid.
AtomicRepresentation restrict(const AtomicRepresentation& rep, CellId w);

/// 1 / (1 - Lambda^(1/p-s)), the cost factor of restrict.
double incint_constant(double s, double p, double Lambda);

/// One term of an atom expansion. A missing atom means the canonical Souza atom on `cell`.
struct ExpansionTerm {
    CellId cell;
    double weight = 0.0;
    std::optional<LeafFunction> atom;
};

/// Same-grid transmutation rule (k_i = i).
///
/// Every expansion of an atom on Q must satisfy
///   sum_{P in P^k, P in Q} |s_(P,Q)|^p <= c_rf lambda^(k - level(Q)),  s = 0 above level(Q).
struct TransmutationRule {
    std::string name;
    double lambda = 0.5;
    double c_rf = 1.0;
    bool positive = false;
    std::function<std::vector<ExpansionTerm>(CellId, const LeafFunction&)> expand;
};

TransmutationRule identity_rule(double lambda);
/// 1_W a_Q expansion; lambda = Lambda^(1-sp), c_rf = 1.
TransmutationRule restriction_rule(GridPtr grid, CellId w, double s, double p, double Lambda);
/// Hölder atoms (Hölder exponent gamma, constant |Q|^(s-1/p-gamma), interval grids) to canonical (s, p) Souza atoms.
/// lambda = Lambda^((gamma-s) p), c_rf = max(1, lambda_min^(-gamma p)), times 2^p when atoms may change sign.
TransmutationRule holder_rule(const BesovParams& params, double gamma, const GridGeometry& geometry,
                              bool signed_atoms);

struct TransmutationReport {
    double input_cost = 0.0;
    double output_cost = 0.0;  ///< l_q(l_p) cost of m_P
    double c_co2 = 0.0;
    double bound = 0.0;        ///< c_rf^(1/p) C_co2(p, q, (lambda^n)_(n>=0)) input_cost
    bool bound_holds = true;
    double synthesis_error = 0.0;
    bool positive = false;
};

struct TransmutationResult {
    /// Souza kind (signed coefficients sum_Q c_Q s_(P,Q)) when every produced atom is canonical,
    /// otherwise attached kind with coefficients m_P and convex-combination atoms d_P.
    AtomicRepresentation output;
    LevelCoefficients mass;  ///< m_P = sum_Q |c_Q s_(P,Q)|
    TransmutationReport report;
};

/// Expands every atom through the rule and merges per target cell.
/// Throws DecayViolation naming (Q, k) when an expansion exceeds the declared decay.
TransmutationResult transmute(const AtomicRepresentation& rep, const TransmutationRule& rule);

}  // namespace besov
