#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <string>

namespace momsum {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::mpq_rational;

/// Arithmetic mode of a computation. Floating mode works on complex binary64
/// coefficients, exact mode on arbitrary precision rationals.
enum class Mode { floating, exact };

inline constexpr double kPi = 3.14159265358979323846;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
    static constexpr Mode mode = Mode::floating;
    static Complex from_double(double x) { return {x, 0.0}; }
    static double magnitude(const Complex& x) { return std::abs(x); }
    static Complex to_complex(const Complex& x) { return x; }
    static bool is_zero(const Complex& x) { return x == Complex{}; }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr Mode mode = Mode::exact;
    /// Exact binary value of the double; 0.5 becomes 1/2, 0.1 its dyadic value.
    static Rational from_double(double x) { return Rational(x); }
    static double magnitude(const Rational& x) { return std::abs(x.convert_to<double>()); }
    static Complex to_complex(const Rational& x) { return {x.convert_to<double>(), 0.0}; }
    static bool is_zero(const Rational& x) { return x == 0; }
};

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace momsum
