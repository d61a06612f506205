#pragma once

#include "momsum/moment_sequence.hpp"
#include "momsum/scalar.hpp"

#include <vector>

namespace momsum {

/// Index range [first, last] of a fit, inclusive.
struct Window {
    int first = 20;
    int last = -1;  ///< -1: up to the last available index
};

struct GrowthFit {
    double s_est = 0.0;
    double logA = 0.0;
    double logC = 0.0;
    double residual = 0.0;  ///< root-mean-square residual of the log fit
    Window window;
    int used = 0;           ///< number of indices that entered the regression
};

/// Least-squares fit log|u_n| ~ logC + n logA + s log M_n over the window.
/// Non-positive magnitudes are skipped; fewer than 8 usable indices, or a
/// rank-deficient design (e.g. M_n constant), raise DegenerateInputError.
GrowthFit fit_growth(const std::vector<double>& mags, const MomentSequence& base, Window window = {});

/// Same with log-magnitudes; -inf entries are skipped.
GrowthFit fit_growth_log(const std::vector<double>& log_mags, const MomentSequence& base,
                         Window window = {});

struct RemainderSample {
    Complex z;
    Complex value;
    /// partial_sums[N] = sum_{p < N} f_p z^p for N = 0..size-1.
    std::vector<Complex> partial_sums;
};

struct RemainderFit {
    bool consistent = false;
    double C = 0.0;
    double A = 0.0;
    double logA_half = 0.0;  ///< fit restricted to the lower half of the orders
    int orders = 0;
    int samples = 0;
};

/// Fits the smallest (C, A) with
///   |f(z) - partial_sums[N]| <= C A^N M_N |z|^N
/// over every sample and order; consistent when A stays finite and does not
/// drift by more than a factor 2 between the lower half and all orders.
RemainderFit check_asymptotic_remainder(const std::vector<RemainderSample>& samples,
                                        const MomentSequence& M);

}  // namespace momsum
