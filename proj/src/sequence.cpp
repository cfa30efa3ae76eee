#include "besov/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace besov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_pow(const std::vector<double>& x, double e) {
    double s = 0.0;
    for (double v : x) s += std::pow(v, e);
    return s;
}

double sup_pow(const std::vector<double>& x, double e) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::pow(v, e));
    return s;
}

}  // namespace

double lq_norm(const std::vector<double>& x, Exponent q) {
    if (q.is_infinite()) return sup_pow(x, 1.0);
    return std::pow(sum_pow(x, q.value()), 1.0 / q.value());
}

double lq_lp_cost(const LevelCoefficients& x, Exponent p, Exponent q) {
    std::vector<double> level_norms;
    level_norms.reserve(x.size());
    for (const Eigen::VectorXd& level : x) {
        if (level.size() == 0) {
            level_norms.push_back(0.0);
        } else if (p.is_infinite()) {
            level_norms.push_back(level.cwiseAbs().maxCoeff());
        } else {
            level_norms.push_back(std::pow(level.cwiseAbs().array().pow(p.value()).sum(), 1.0 / p.value()));
        }
    }
    return lq_norm(level_norms, q);
}

NonnegSequence NonnegSequence::geometric(double first, double ratio) {
    NonnegSequence s;
    s.tail_start = first;
    s.tail_ratio = ratio;
    return s;
}

NonnegSequence NonnegSequence::finite(std::vector<double> values) {
    NonnegSequence s;
    s.head = std::move(values);
    return s;
}

double NonnegSequence::power_sum(double e) const {
    double s = sum_pow(head, e);
    if (tail_start > 0.0) {
        const double r = std::pow(tail_ratio, e);
        if (!(r < 1.0)) return kInf;
        s += std::pow(tail_start, e) / (1.0 - r);
    }
    return s;
}

double NonnegSequence::power_sup(double e) const {
    double s = sup_pow(head, e);
    if (tail_start > 0.0) {
        if (tail_ratio > 1.0) return kInf;
        s = std::max(s, std::pow(tail_start, e));
    }
    return s;
}

double NonnegSequence::term(std::size_t k) const {
    if (k < head.size()) return head[k];
    return tail_start * std::pow(tail_ratio, static_cast<double>(k - head.size()));
}

bool NonnegSequence::is_zero() const {
    return tail_start == 0.0 && std::all_of(head.begin(), head.end(), [](double v) { return v == 0.0; });
}

double TwoSidedSequence::term(int k) const {
    if (k < first_index) return 0.0;
    return values.term(static_cast<std::size_t>(k - first_index));
}

bool TrickConstant::infinite() const { return std::isinf(value); }

TrickConstant holder_trick_constant(double t, Exponent q, const NonnegSequence& b) {
    if (!(t > 0.0) || std::isinf(t)) throw ParameterError("t must lie in (0, inf)");
    if (q.is_finite() && !(q.value() > 0.0)) throw ParameterError("q must be positive");
    if (t >= 1.0) {
        if (q.is_infinite()) return {b.power_sum(1.0 / t), 'A'};
        const double qv = q.value();
        if (qv > 1.0) {
            const double qc = qv / (qv - 1.0);
            return {std::pow(b.power_sum(qc / t), 1.0 / qc), 'A'};
        }
        return {b.power_sup(1.0 / t), qv == 1.0 ? 'A' : 'B'};
    }
    if (q.is_infinite()) return {std::pow(b.power_sum(1.0), 1.0 / t), 'C'};
    const double r = q.value() / t;
    if (r > 1.0) {
        const double rc = r / (r - 1.0);
        return {std::pow(b.power_sum(rc), 1.0 / (t * rc)), 'C'};
    }
    return {b.power_sup(1.0 / t), r == 1.0 ? 'C' : 'D'};
}

TrickConstant convolution_trick_constant(double p, Exponent q, const TwoSidedSequence& b) {
    if (!(p > 0.0) || std::isinf(p)) throw ParameterError("p must lie in (0, inf)");
    if (q.is_finite() && !(q.value() > 0.0)) throw ParameterError("q must be positive");
    const NonnegSequence& v = b.values;
    if (p >= 1.0) {
        if (q.is_infinite() || q.value() >= 1.0) return {v.power_sum(1.0 / p), 'A'};
        return {std::pow(v.power_sum(q.value() / p), 1.0 / q.value()), 'B'};
    }
    if (q.is_infinite() || q.value() / p >= 1.0) return {std::pow(v.power_sum(1.0), 1.0 / p), 'C'};
    return {std::pow(v.power_sum(q.value() / p), 1.0 / q.value()), 'D'};
}

std::pair<double, double> holder_trick_sides(double t, Exponent q, double C, const std::vector<double>& a,
                                             const std::vector<double>& b, const std::vector<double>& c) {
    const double th = std::max(1.0, t);
    const double lhs = std::pow(sum_pow(a, 1.0 / th), th / t);
    const double k = holder_trick_constant(t, q, NonnegSequence::finite(b)).value;
    const double cterm = q.is_infinite() ? sup_pow(c, 1.0 / t) : std::pow(sum_pow(c, q.value() / t), 1.0 / q.value());
    return {lhs, std::pow(C, 1.0 / t) * k * cterm};
}

std::pair<double, double> convolution_trick_sides(double p, Exponent q, double C, const std::vector<double>& a,
                                                  const std::vector<double>& b, const std::vector<double>& c) {
    auto mixed = [&](const std::vector<double>& x) {
        return q.is_infinite() ? sup_pow(x, 1.0 / p) : std::pow(sum_pow(x, q.value() / p), 1.0 / q.value());
    };
    TwoSidedSequence bs;
    bs.values = NonnegSequence::finite(b);
    const double k = convolution_trick_constant(p, q, bs).value;
    return {mixed(a), std::pow(C, 1.0 / p) * k * mixed(c)};
}

TrickReport verify_tricks(int trials, std::uint64_t seed) {
    const std::vector<double> exps{0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
    const std::vector<Exponent> qs{Exponent(0.5), Exponent(1.0), Exponent(1.5), Exponent(2.0), Exponent(4.0),
                                   Exponent::infinity()};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> length(1, 8);
    auto draw = [&] {
        std::vector<double> x(length(rng));
        for (double& v : x) v = unit(rng) < 0.3 ? 0.0 : std::pow(unit(rng), 3.0) * 4.0;
        return x;
    };

    TrickReport report;
    report.trials = trials;
    auto record = [&](const char* trick, char tag, int trial, double e, Exponent q, std::pair<double, double> sides) {
        ++report.checks;
        ++report.case_checks[std::string(trick) + ":" + tag];
        const auto [lhs, rhs] = sides;
        if (rhs > 0.0) report.max_slack = std::max(report.max_slack, (lhs - rhs) / rhs);
        if (lhs > rhs * (1.0 + 1e-12) + 1e-300)
            report.violations.push_back({trick, trial, e, q.to_string(), lhs, rhs});
    };

    for (int trial = 0; trial < trials; ++trial) {
        const double C = 0.5 + 1.5 * unit(rng);
        const std::vector<double> b = draw();
        const std::vector<double> c = draw();
        for (double t : exps) {
            for (const Exponent& q : qs) {
                std::vector<double> bh(c.size());
                for (std::size_t k = 0; k < c.size(); ++k) bh[k] = k < b.size() ? b[k] : 0.0;
                std::vector<double> a(c.size());
                for (std::size_t k = 0; k < c.size(); ++k) a[k] = C * bh[k] * c[k];
                record("holder", holder_trick_constant(t, q, NonnegSequence::finite(bh)).case_tag, trial, t, q, holder_trick_sides(t, q, C, a, bh, c));

                const double ph = std::max(1.0, t);
                std::vector<double> conv(b.size() + c.size() - 1, 0.0);
                for (std::size_t i = 0; i < c.size(); ++i)
                    for (std::size_t j = 0; j < b.size(); ++j)
                        conv[i + j] += std::pow(b[j], 1.0 / ph) * std::pow(c[i], 1.0 / ph);
                for (double& v : conv) v = C * std::pow(v, ph);
                record("convolution", convolution_trick_constant(t, q, TwoSidedSequence{0, NonnegSequence::finite(b)}).case_tag,
                       trial, t, q, convolution_trick_sides(t, q, C, conv, b, c));
            }
        }
    }
    return report;
}

}  // namespace besov
