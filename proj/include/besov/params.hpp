#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "besov/errors.hpp"

namespace besov {

/// An exponent in (0, inf]. Infinity is a structural marker, never a sentinel float.
class Exponent {
public:
    constexpr Exponent() = default;
    constexpr explicit Exponent(double value) : value_(value) {}

    static constexpr Exponent infinity() {
        Exponent e;
        e.infinite_ = true;
        e.value_ = std::numeric_limits<double>::infinity();
        return e;
    }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }

    /// Finite value; infinity for the infinite marker.
    constexpr double value() const noexcept { return value_; }

    /// Hölder conjugate: 1/q + 1/q' = 1. Conjugate of 1 is infinity and vice versa.
    Exponent conjugate() const {
        if (infinite_) return Exponent(1.0);
        if (value_ == 1.0) return infinity();
        if (value_ < 1.0) throw ParameterError("conjugate exponent undefined below 1");
        return Exponent(value_ / (value_ - 1.0));
    }

    friend constexpr bool operator==(const Exponent& a, const Exponent& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    std::string to_string() const;

    /// Parses "2", "1.5", "inf" or "infinity".
    static Exponent parse(std::string_view text);

private:
    double value_ = 1.0;
    bool infinite_ = false;
};

/// Besov parameters (s, p, q) plus the atom integrability exponent u.
struct BesovParams {
    double s = 0.5;
    double p = 1.0;
    Exponent q{1.0};
    Exponent u = Exponent::infinity();

    /// min{1, p, q}; equals 1 whenever p, q >= 1.
    double rho() const { return std::min({1.0, p, q.value()}); }

    /// s > 0, p >= 1, q >= 1.
    void require_valid() const;

    /// Additionally 0 < s < 1/p.
    void require_besov_range() const;

    std::string to_string() const;

    /// Parses "s,p,q" with q possibly "inf".
    static BesovParams parse(std::string_view text);
};

}  // namespace besov
