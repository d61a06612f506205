#pragma once

#include "momsum/moment_sequence.hpp"

#include <vector>

namespace momsum::detail {

struct EnvelopeFit {
    bool ok = false;
    double logC = 0.0;
    double K = 0.0;
    double excess = 0.0;  ///< outer-range slack above the inner maximum at the chosen K
};

enum class EnvelopeKind {
    growth,    ///< y(r) <= log C + M(r/K); the largest admissible K is reported
    flatness,  ///< y(r) <= log C - M(r/K); the smallest admissible K is reported
};

/// Samples y_i = log|f(r_i)| on increasing radii. K is admissible when the
/// slack y - (+/-)M(r/K) on the last third of the radii exceeds its maximum on
/// the first two thirds by at most `tol`; K is scanned geometrically over
/// [1e-2, 1e2].
EnvelopeFit fit_envelope(const std::vector<double>& r, const std::vector<double>& y,
                         const MomentSequence& M, EnvelopeKind kind, double tol = 1.0);

}  // namespace momsum::detail
