#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "csergo/errors.hpp"

namespace csergo {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline std::string to_string(const Rational& q) { return q.str(); }

// Decimal digit accumulation; leading zeros must not trip the base-detecting
// cpp_int constructor.
inline BigInt parse_digits(const std::string& text) {
    if (text.empty()) throw ParseError("empty number");
    BigInt acc = 0;
    for (char ch : text) {
        if (ch < '0' || ch > '9') throw ParseError("malformed number " + text);
        acc = acc * 10 + (ch - '0');
    }
    return acc;
}

inline BigInt parse_integer(const std::string& text) {
    if (!text.empty() && text[0] == '-') return -parse_digits(text.substr(1));
    return parse_digits(text);
}

// Parses "7", "-3/4" or a finite decimal like "0.25" into an exact rational.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty number");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num = parse_integer(text.substr(0, slash));
        BigInt den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in " + text);
        return Rational(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_integer(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    bool neg = !digits.empty() && digits[0] == '-';
    if (neg) digits = digits.substr(1);
    BigInt num = parse_digits(digits);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    Rational q(num, den);
    return neg ? -q : q;
}

// Every finite double is a binary rational; the conversion is exact.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ParseError("non-finite number");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
    std::int64_t m = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational q(m);
    if (exp >= 0) {
        q *= Rational(BigInt(1) << exp);
    } else {
        q /= Rational(BigInt(1) << -exp);
    }
    return q;
}

}  // namespace csergo
