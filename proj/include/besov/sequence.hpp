#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "besov/params.hpp"

namespace besov {

/// Per-level coefficient vectors (x_P) for P in P^0, P^1, ...
using LevelCoefficients = std::vector<Eigen::VectorXd>;

/// (sum_k (sum_P |x_P|^p)^(q/p))^(1/q); sup over k of the level l_p norm for q = inf.
double lq_lp_cost(const LevelCoefficients& x, Exponent p, Exponent q);

/// l_q norm of a nonnegative finite sequence.
double lq_norm(const std::vector<double>& x, Exponent q);

/// Nonnegative one-sided sequence: explicit head terms b_0..b_{n-1} followed by
/// the geometric tail b_{n+j} = tail_start * tail_ratio^j.
struct NonnegSequence {
    std::vector<double> head;
    double tail_start = 0.0;
    double tail_ratio = 0.0;

    static NonnegSequence geometric(double first, double ratio);
    static NonnegSequence finite(std::vector<double> values);

    /// sum_k b_k^e (inf when the tail diverges).
    double power_sum(double e) const;
    /// sup_k b_k^e.
    double power_sup(double e) const;
    double term(std::size_t k) const;
    bool is_zero() const;
};

/// Two-sided sequence b_k, k in Z: zero below `first_index`.
struct TwoSidedSequence {
    int first_index = 0;
    NonnegSequence values;

    double term(int k) const;
};

/// Value of a trick constant plus the case of the case list it came from.
struct TrickConstant {
    double value = 0.0;
    char case_tag = 'A';
    bool infinite() const;
};

/// Constant of the Hölder-like trick, cases A-D.
///
/// t in (0, inf), q in (0, inf]. q = inf extends case A (sum b^(1/t)) and
/// case C ((sum b)^(1/t)) by the same Hölder pairing.
TrickConstant holder_trick_constant(double t, Exponent q, const NonnegSequence& b);

/// Constant of the convolution trick, cases A-D, for p in (0, inf), q in (0, inf].
TrickConstant convolution_trick_constant(double p, Exponent q, const TwoSidedSequence& b);

struct TrickViolation {
    std::string trick;
    int trial = 0;
    double t_or_p = 0.0;
    std::string q;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct TrickReport {
    int trials = 0;
    int checks = 0;
    /// max over checks of (lhs - rhs) / rhs; negative or ~0 when every check holds.
    double max_slack = -1.0;
    std::vector<TrickViolation> violations;
    std::map<std::string, int> case_checks;  ///< "holder:A" .. "convolution:D"
    bool passed() const { return violations.empty(); }
};

/// Both conclusions evaluated on premise-saturating random triples.
///
/// Hölder trick: a_k = C b_k c_k. Convolution trick: a_k^(1/p^) = C^(1/p^) sum_i b_{k-i}^(1/p^) c_i^(1/p^).
TrickReport verify_tricks(int trials, std::uint64_t seed);

/// Left and right sides of the Hölder-trick conclusion for finite a, b, c.
std::pair<double, double> holder_trick_sides(double t, Exponent q, double C, const std::vector<double>& a,
                                             const std::vector<double>& b, const std::vector<double>& c);

/// Left and right sides of the convolution-trick conclusion for finite a, b, c.
std::pair<double, double> convolution_trick_sides(double p, Exponent q, double C, const std::vector<double>& a,
                                                  const std::vector<double>& b, const std::vector<double>& c);

}  // namespace besov
