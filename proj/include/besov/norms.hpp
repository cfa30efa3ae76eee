#pragma once

#include <string>

#include "besov/haar.hpp"
#include "besov/representation.hpp"

namespace besov {

/// Standard atomic representation: f = k_I a_I + sum_P k_P a_P with canonical Souza atoms.
struct StandardRepresentation {
    double k_root = 0.0;
    LevelCoefficients k;  ///< k[0] = {k_root}; k[j][i] for cell (j, i), j >= 1
    BesovParams params;

    AtomicRepresentation to_atomic(GridPtr grid) const;
};

/// k_I = |I|^(1/p-s-1/2) d_I and k_P = |P|^(1/p-s) sum_{S in H_Q} d_S phi_S(P) for P a child of Q.
StandardRepresentation standard_representation(const HaarCoefficients& coeffs, const BesovParams& params,
                                               const HaarSystem& system, int level);
StandardRepresentation standard_representation(const LeafFunction& f, const BesovParams& params,
                                               const HaarSystem& system);

/// Per-level terms (sum_Q |Q|^(1-sp-p/2) sum_S |d_S|^p)^(1/p), k = 0..depth.
Eigen::VectorXd haar_level_terms(const HaarCoefficients& coeffs, const BesovParams& params, const HaarSystem& system);
double n_haar(const HaarCoefficients& coeffs, const BesovParams& params, const HaarSystem& system);

double n_st(const StandardRepresentation& rep);

/// inf_c ||f - c||_{L^p(Q)}: weighted median (p = 1), weighted mean (p = 2),
/// golden-section search on [min, max] otherwise; (max - min)/2 for p = inf.
double osc_p(const LeafFunction& f, CellId cell, Exponent p);

/// Per-level terms (sum_Q |Q|^(-sp) osc_p(f,Q)^p)^(1/p), k = 0..depth.
Eigen::VectorXd osc_level_terms(const LeafFunction& f, const BesovParams& params);
double osc_seminorm(const LeafFunction& f, const BesovParams& params);
double n_osc(const LeafFunction& f, const BesovParams& params);

struct ConstantsReport {
    double lambda = 0.0;
    double Lambda = 0.0;
    BesovParams params;
    std::vector<double> level_max_measure;
    double root_measure = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c_e = 0.0;
    double c_no = 0.0;
    double c_kt = 0.0;
    double c_co = 0.0;  ///< Hölder-trick constant on (|P^k|^(sp))_k
};

/// Grid-derived constants of the norm equivalence.
///
/// The sequence (|P^k|^(sp))_k uses the observed level maxima up to the grid
/// depth and continues with the geometric bound |P^(K+j)| <= |P^K| Lambda^j
/// beyond it, so the constants hold for every refinement of the grid.
ConstantsReport equivalence_constants(const GridGeometry& geometry, const BesovParams& params);

struct ChainCheck {
    bool st_le_haar = true;   ///< N_st <= C_e N_haar
    bool haar_le_osc = true;  ///< N_haar <= C_c2 N_osc
    bool osc_le_st = true;    ///< N_osc <= C_no N_st
    bool embedding = true;    ///< |f|_p <= C_kt N_st
    double ratio_st_haar = 0.0;   ///< N_st / (C_e N_haar)
    double ratio_haar_osc = 0.0;  ///< N_haar / (C_c2 N_osc)
    double ratio_osc_st = 0.0;    ///< N_osc / (C_no N_st)
    double ratio_embedding = 0.0; ///< |f|_p / (C_kt N_st)
    bool passed() const { return st_le_haar && haar_le_osc && osc_le_st && embedding; }
    std::string first_failure() const;
};

struct NormReport {
    double n_haar = 0.0;
    double n_st = 0.0;
    double n_osc = 0.0;
    double lp = 0.0;
    double bracket_lower = 0.0;
    double bracket_upper = 0.0;
    Eigen::VectorXd haar_levels;
    Eigen::VectorXd st_levels;
    Eigen::VectorXd osc_levels;
    ConstantsReport constants;
    ChainCheck chain;
};

/// All three norms, the bracket [N_osc / C_no, N_st] and the chain checks. Never throws on a failed chain.
NormReport norm_report(const LeafFunction& f, const BesovParams& params, const HaarSystem& system,
                       const GridGeometry& geometry);

/// norm_report, throwing ChainViolation when any chain inequality fails.
NormReport besov_bracket(const LeafFunction& f, const BesovParams& params, const HaarSystem& system,
                         const GridGeometry& geometry);

/// Lower end of the bracket only: N_osc / C_no.
double bracket_lower(const LeafFunction& f, const BesovParams& params, const ConstantsReport& constants);

/// Relative slack used by every chain comparison.
inline constexpr double kChainTolerance = 1e-9;

}  // namespace besov
