#pragma once

// Reference values for the three-state example market (h = k = l = 1/3 unless stated). Under the
// martingale measure with state masses (s, 1 - 2s, s), s in [0, 1/2], the composed measure,
// the value of the payment indicator X and of the hybrid claim Y are affine in s.

#include <array>

#include "qpval/core/rational.hpp"

namespace qpval::cli::reference {

// Complete case (h, k, l) = (1/2, 0, 1/2): the unique martingale measure is s = 1/2.
inline std::array<Rational, 6> complete_qp_measure()
{
    return {Rational(5, 100), Rational(45, 100), Rational(0), Rational(0), Rational(2, 10), Rational(3, 10)};
}
inline Rational complete_payment_value() { return Rational(1, 4); }

inline std::array<Rational, 6> incomplete_qp_measure(const Rational& s)
{
    const Rational mid = 1 - 2 * s;
    return {Rational(1, 10) * s, Rational(9, 10) * s, Rational(2, 10) * mid, Rational(8, 10) * mid, Rational(4, 10) * s,
            Rational(6, 10) * s};
}
inline Rational incomplete_payment_value(const Rational& s) { return Rational(2, 10) + Rational(1, 10) * s; }
inline Rational incomplete_hybrid_value(const Rational& s) { return Rational(6, 100) - Rational(4, 100) * s; }

} // namespace qpval::cli::reference
