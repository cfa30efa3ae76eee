#pragma once

#include <functional>
#include <string>

#include "besov/haar.hpp"
#include "besov/norms.hpp"

namespace besov {

/// Product f g with the two multiplier bound checks.
///
/// (II)  bracket_lower(fg) <= C_no (C_e' C_no' N_st'(g) / (1 - Lambda^(1/p-s)) + |g|_inf) N_st(f),
///       primed quantities at (1/p, p, inf).
/// (III) bracket_lower(fg) + |fg|_inf <= C_e C_no (N_st(f) + |f|_inf)(N_st(g) + |g|_inf).
struct MultiplierReport {
    LeafFunction product;
    double f_st = 0.0;
    double g_st = 0.0;
    double g_st_critical = 0.0;  ///< N_st of g at (1/p, p, inf)
    double f_sup = 0.0;
    double g_sup = 0.0;
    double product_sup = 0.0;
    double observed_lower = 0.0;  ///< bracket_lower(fg)
    double ii_constant = 0.0;
    double ii_bound = 0.0;
    bool ii_pass = false;
    double iii_observed = 0.0;
    double iii_bound = 0.0;
    bool iii_pass = false;
    bool passed() const { return ii_pass && iii_pass; }
};

/// Requires 0 < s < 1/p; f and g are brought to a common level.
MultiplierReport pointwise_multiply(const LeafFunction& f, const LeafFunction& g, const BesovParams& params,
                                    const HaarSystem& system, const GridGeometry& geometry);

/// Lipschitz map with g(0) = 0 and constant K.
struct LipschitzMap {
    std::string name;
    double K = 1.0;
    std::function<double(double)> fn;

    /// identity, abs, clamp(M), scaled(a), soft_threshold(tau).
    static LipschitzMap builtin(const std::string& spec);
    /// Caller-certified constant; throws when fn(0) != 0.
    static LipschitzMap custom(std::string name, double K, std::function<double(double)> fn);
};

std::vector<std::string> lipschitz_builtin_names();

struct CompositionReport {
    LeafFunction composed;
    double lhs = 0.0;  ///< |g o f|_p + osc(g o f)
    double rhs = 0.0;  ///< K (|f|_p + osc(f))
    bool pass = false;
    int cells_checked = 0;
    int cell_violations = 0;  ///< cells with osc_p(g o f, Q) > K osc_p(f, Q)
    double max_cell_ratio = 0.0;
    bool passed() const { return pass && cell_violations == 0; }
};

CompositionReport left_compose(const LipschitzMap& g, const LeafFunction& f, const BesovParams& params);

}  // namespace besov
