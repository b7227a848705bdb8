#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

#include "qpval/core/error.hpp"

namespace qpval {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "num/den", an integer, or a plain decimal such as "0.125" or "-1.5e-3" exactly.
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t first = 0;
    while (first < s.size() && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
    s = s.substr(first);
    if (s.empty()) throw InputError("empty rational literal");

    auto parse_int = [&](const std::string& digits) -> BigInt {
        if (digits.empty() || digits == "-" || digits == "+")
            throw InputError("malformed rational literal '" + s + "'");
        std::size_t i = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
        for (; i < digits.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(digits[i])))
                throw InputError("malformed rational literal '" + s + "'");
        return BigInt(digits[0] == '+' ? digits.substr(1) : digits);
    };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        BigInt num = parse_int(s.substr(0, slash));
        BigInt den = parse_int(s.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + s + "'");
        return Rational(num, den);
    }

    std::string mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mantissa = s.substr(0, e);
        try {
            exponent = std::stol(s.substr(e + 1));
        } catch (const std::exception&) {
            throw InputError("malformed exponent in '" + s + "'");
        }
    }
    if (auto dot = mantissa.find('.'); dot != std::string::npos) {
        std::string frac = mantissa.substr(dot + 1);
        mantissa = mantissa.substr(0, dot) + frac;
        exponent -= static_cast<long>(frac.size());
        if (mantissa == "-" || mantissa == "+" || mantissa.empty()) mantissa += "0";
    }
    Rational value(parse_int(mantissa));
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
    if (exponent < 0) value /= scale;
    else value *= scale;
    return value;
}

// Canonical "num/den" form; integers are printed without a denominator.
inline std::string to_string(const Rational& r)
{
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Exact decimal text when the denominator has no prime factors other than 2 and 5 ("0.05"),
// otherwise the "num/den" form.
inline std::string to_decimal_string(const Rational& r)
{
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt rest = den;
    unsigned twos = 0, fives = 0;
    while (rest % 2 == 0) {
        rest /= 2;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1) return to_string(r);
    const unsigned digits = std::max(twos, fives);
    const bool negative = num < 0;
    if (negative) num = -num;
    const BigInt scaled = num * boost::multiprecision::pow(BigInt(10), digits) / den;
    std::string text = scaled.str();
    if (digits > 0) {
        if (text.size() <= digits) text.insert(0, digits + 1 - text.size(), '0');
        text.insert(text.size() - digits, ".");
    }
    return negative ? "-" + text : text;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace qpval
