#pragma once
// Quadrature of exponentially weighted integrals along [0, inf).

#include "momsum/scalar.hpp"

#include <functional>

namespace momsum::detail {

struct RayQuadOptions {
    double rel_tol = 1e-14;     ///< stop once two consecutive panels add less than this
    double panel_tol = 1e-13;   ///< relative tolerance inside each Gauss-Kronrod panel
    double first_panel = 0.5;
    double panel_growth = 1.3;
    int max_panels = 300;
};

struct RayQuadResult {
    Complex value{};
    double error = 0.0;
    int panels = 0;
};

/// int_0^inf c exp(-c v) g(v) dv for Re c > 0, on geometrically growing
/// Gauss-Kronrod panels. Throws AccuracyError when the panel contributions do
/// not die out (integrand growth beats the exponential weight).
RayQuadResult exp_weighted_integral(Complex c, const std::function<Complex(double)>& g,
                                    const RayQuadOptions& opt = {});

/// Branch of arg(z) + 2 pi k closest to `target`.
double arg_near(Complex z, double target);

}  // namespace momsum::detail
