#include "besov/params.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace besov {

namespace {

double parse_double(std::string_view text) {
    std::string owned(text);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(owned, &consumed);
    } catch (const std::exception&) {
        throw ParameterError("not a number: '" + owned + "'");
    }
    if (consumed != owned.size()) throw ParameterError("not a number: '" + owned + "'");
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string Exponent::to_string() const {
    if (infinite_) return "inf";
    std::ostringstream out;
    out << value_;
    return out.str();
}

Exponent Exponent::parse(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") return infinity();
    const double v = parse_double(text);
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("exponent must be positive");
    return Exponent(v);
}

void BesovParams::require_valid() const {
    if (!(s > 0.0)) throw ParameterError("Besov parameter s must be positive");
    if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("Besov parameter p must lie in [1, inf)");
    if (q.is_finite() && !(q.value() >= 1.0)) throw ParameterError("Besov parameter q must lie in [1, inf]");
}

void BesovParams::require_besov_range() const {
    require_valid();
    if (!(s < 1.0 / p)) throw ParameterError("operation requires 0 < s < 1/p");
}

std::string BesovParams::to_string() const {
    std::ostringstream out;
    out << s << ',' << p << ',' << q.to_string();
    return out.str();
}

BesovParams BesovParams::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (parts.size() != 3) throw ParameterError("params must have the form s,p,q");
    BesovParams params;
    params.s = parse_double(trim(parts[0]));
    params.p = parse_double(trim(parts[1]));
    params.q = Exponent::parse(parts[2]);
    params.require_valid();
    return params;
}

}  // namespace besov
