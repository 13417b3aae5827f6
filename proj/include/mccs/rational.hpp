#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mccs {

// All fractional quantities in this library (placement fractions, cache
// sizes, probabilities, rates) are exact rationals over arbitrary-precision
// integers. cpp_rational keeps values in lowest terms with a positive
// denominator, so equality checks are exact everywhere.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow10(int exponent) {
    return boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent));
}

/// Ceiling of a non-negative rational.
inline BigInt ceil_nonneg(const Rational& value) {
    if (value < 0) {
        throw std::domain_error("ceil_nonneg: negative argument");
    }
    const BigInt num = numerator(value);
    const BigInt den = denominator(value);
    return (num + den - 1) / den;
}

inline bool is_integer(const Rational& value) {
    return denominator(value) == 1;
}

/// Parses "7", "-7", "3/4" or a decimal string like "0.25" into an exact
/// rational. Decimal strings are converted by place value, never through
/// binary floating point.
inline Rational parse_rational(const std::string& text) {
    const auto fail = [&]() -> Rational {
        throw std::invalid_argument("parse_rational: cannot parse '" + text + "'");
    };

    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = (s[0] == '-');
        s = s.substr(1);
    }
    if (s.empty()) {
        return fail();
    }
    const auto all_digits = [](const std::string& part) {
        if (part.empty()) return false;
        for (char c : part) {
            if (c < '0' || c > '9') return false;
        }
        return true;
    };

    Rational magnitude;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return fail();
        const BigInt d(den);
        if (d == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
        magnitude = Rational(BigInt(num), d);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        const std::string whole = s.substr(0, dot);
        const std::string frac = s.substr(dot + 1);
        if (!whole.empty() && !all_digits(whole)) return fail();
        if (!all_digits(frac)) return fail();
        const BigInt scale = pow10(static_cast<int>(frac.size()));
        const BigInt whole_part = whole.empty() ? BigInt(0) : BigInt(whole);
        magnitude = Rational(whole_part * scale + BigInt(frac), scale);
    } else {
        if (!all_digits(s)) return fail();
        magnitude = Rational(BigInt(s));
    }
    return negative ? Rational(-magnitude) : magnitude;
}

/// Renders a rational as a fixed-point decimal string with `places` digits
/// after the point, rounding half-up (away from zero on ties).
inline std::string to_decimal(const Rational& value, int places = 3) {
    if (places < 0) {
        throw std::domain_error("to_decimal: places must be >= 0");
    }
    const bool negative = value < 0;
    const Rational magnitude = negative ? Rational(-value) : value;
    const BigInt scale = pow10(places);
    const BigInt num = numerator(magnitude) * scale;
    const BigInt den = denominator(magnitude);
    BigInt scaled = num / den;
    const BigInt remainder = num % den;
    if (2 * remainder >= den) {
        ++scaled;
    }
    const BigInt whole = scaled / scale;
    const BigInt frac = scaled % scale;
    std::string out = negative && scaled != 0 ? "-" : "";
    out += whole.str();
    if (places > 0) {
        std::string digits = frac.str();
        out += '.';
        out.append(static_cast<std::size_t>(places) - digits.size(), '0');
        out += digits;
    }
    return out;
}

/// Renders a rational as "p/q", or just "p" when the value is an integer.
inline std::string to_fraction(const Rational& value) {
    std::string out = numerator(value).str();
    if (denominator(value) != 1) {
        out += '/';
        out += denominator(value).str();
    }
    return out;
}

}  // namespace mccs
