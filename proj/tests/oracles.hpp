#pragma once

// Reference values computed without the library's own evaluators.

#include "momsum/formal_series.hpp"
#include "momsum/scalar.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using momsum::Complex;
using momsum::Rational;

/// int_0^inf e^{-t} / (1 + z t) dt = (1/z) e^{1/z} E_1(1/z), z > 0.
inline double euler_integral(double z) {
    const double x = 1.0 / z;
    if (x < 40.0) return x * std::exp(x) * boost::math::expint(1, x);
    // x e^x E_1(x) ~ sum (-1)^k k! / x^k, truncated at its smallest term
    double term = 1.0, acc = 1.0;
    for (int k = 1; k < x && std::abs(term) > 1e-18; ++k) {
        term *= -k / x;
        acc += term;
    }
    return acc;
}

/// int_0^inf int_0^inf e^{-a-b} / (1 + z a b) da db, z > 0: the Borel-Laplace
/// sum of sum (-1)^p (p!)^2 z^p.
inline double double_euler_integral(double z) {
    boost::math::quadrature::exp_sinh<double> integrator;
    auto inner = [z](double a) {
        if (a == 0.0) return 1.0;
        return std::exp(-a) * euler_integral(z * a);
    };
    return integrator.integrate(inner, 1e-13);
}

/// Mittag-Leffler E_{1/2}(x) = exp(x^2) erfc(-x), x real.
inline double mittag_leffler_half(double x) { return std::exp(x * x) * std::erfc(-x); }

/// sum_p z^p / Gamma(1 + s p) with 50 significant digits, so that the
/// cancellation on the negative axis does not reach double precision.
inline Complex mittag_leffler_series(double s, Complex z, int terms = 4000) {
    using Real = boost::multiprecision::cpp_bin_float_50;
    using Cplx = boost::multiprecision::cpp_complex_50;
    Cplx acc = 0, zp = 1;
    const Cplx zl(Real(z.real()), Real(z.imag()));
    const Real sl(s);
    for (int p = 0; p < terms; ++p) {
        const Cplx term = zp / boost::multiprecision::tgamma(1 + sl * p);
        acc += term;
        zp *= zl;
        if (p > 10 && abs(term) < Real(1e-40) * abs(acc)) break;
    }
    return {acc.real().convert_to<double>(), acc.imag().convert_to<double>()};
}

inline Rational factorial(unsigned n) {
    Rational f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Random rational with numerator in [-50, 50] and denominator in [1, 20].
inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-50, 50), den(1, 20);
    return Rational(num(rng), den(rng));
}

inline momsum::Series<Rational> random_series(std::mt19937_64& rng, momsum::Var v, int N) {
    std::vector<Rational> c(static_cast<std::size_t>(N) + 1);
    for (auto& x : c) x = random_rational(rng);
    return momsum::Series<Rational>(v, std::move(c));
}

inline momsum::Bivariate<Rational> random_bivariate(std::mt19937_64& rng, momsum::Var outer, int No, int Nz,
                                                    int zero_rows = 0) {
    momsum::Bivariate<Rational> b(outer, No, Nz);
    for (int n = zero_rows; n <= No; ++n)
        for (int j = 0; j <= Nz; ++j) b(n, j) = random_rational(rng);
    return b;
}

/// Signed p! z^p coefficients (-1)^p (p!)^power.
inline std::vector<Complex> alternating_factorial_power(int N, int power) {
    std::vector<Complex> c(static_cast<std::size_t>(N) + 1);
    double f = 1.0;
    for (int p = 0; p <= N; ++p) {
        if (p > 0) f *= p;
        c[p] = (p % 2 ? -1.0 : 1.0) * std::pow(f, power);
    }
    return c;
}

}  // namespace oracle
