#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace frozen_sl {

using Complex = std::complex<double>;
using Rational = mpq_class;

/// Coefficient-field traits for the two arithmetic backends: complex floating
/// point (`Complex`) and exact rationals (`Rational`).
template <class F>
struct Field;

template <>
struct Field<Complex> {
    static constexpr bool exact = false;
    /// Relative size below which a cancelled coefficient counts as zero.
    static constexpr double floor = 1e-12;

    static Complex from_double(double x) { return {x, 0.0}; }
    static Complex to_complex(const Complex& x) { return x; }
    static double magnitude(const Complex& x) { return std::abs(x); }
    static bool negligible(const Complex& x, double scale) {
        return x == Complex{} || std::abs(x) <= floor * scale;
    }
};

template <>
struct Field<Rational> {
    static constexpr bool exact = true;

    /// mpq_class(double) is exact: every finite double is a dyadic rational.
    static Rational from_double(double x) { return Rational(x); }
    static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
    static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
    static bool negligible(const Rational& x, double /*scale*/) { return sgn(x) == 0; }
};

/// "p/q" (or "p" when the denominator is 1).
inline std::string to_exact_string(const Rational& x) { return x.get_str(); }

}  // namespace frozen_sl
