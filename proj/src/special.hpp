#pragma once

#include "momsum/scalar.hpp"

namespace momsum::detail {

/// Gamma on the reals; integer arguments up to 171 come from an exact
/// factorial table so that Gamma(1+p) reproduces p! bit for bit.
double gamma_real(double x);

/// log Gamma for x > 0.
double log_gamma(double x);

/// Gamma on the complex plane (Lanczos, g = 7), with reflection for Re z < 1/2.
Complex gamma_complex(Complex z);

/// log of the q-Gamma function at x > 0, q in (0,1); Gamma_q(p+1) = [p]_q!.
double log_q_gamma(double x, double q);

}  // namespace momsum::detail
