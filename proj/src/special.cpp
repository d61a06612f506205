#include "special.hpp"

#include "momsum/errors.hpp"

#include <array>
#include <cmath>

namespace momsum::detail {

namespace {

std::array<double, 171> make_factorials() {
    std::array<double, 171> f{};
    f[0] = 1.0;
    for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * static_cast<double>(i);
    return f;
}

const std::array<double, 171>& factorials() {
    static const auto table = make_factorials();
    return table;
}

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma_real(double x) {
    if (x >= 1.0 && x <= 171.0 && x == std::floor(x))
        return factorials()[static_cast<std::size_t>(x) - 1];
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
    return std::lgamma(x);
}

Complex gamma_complex(Complex z) {
    if (z.imag() == 0.0) return {gamma_real(z.real()), 0.0};
    if (z.real() < 0.5)
        return kPi / (std::sin(kPi * z) * gamma_complex(1.0 - z));
    z -= 1.0;
    Complex x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    Complex t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double log_q_gamma(double x, double q) {
    if (!(x > 0.0)) throw DomainError("log_q_gamma requires x > 0");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0,1)");
    // Gamma_q(x) = (1-q)^{1-x} prod_{n>=0} (1-q^{n+1}) / (1-q^{n+x})
    double acc = (1.0 - x) * std::log1p(-q);
    double qn = 1.0;  // q^n
    const double qx = std::pow(q, x);
    for (int n = 0; n < 1000000; ++n) {
        double a = qn * q, b = qn * qx;
        if (a < 1e-18 && b < 1e-18) break;
        acc += std::log1p(-a) - std::log1p(-b);
        qn *= q;
    }
    return acc;
}

}  // namespace momsum::detail
