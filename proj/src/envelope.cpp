#include "envelope.hpp"

#include "momsum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace momsum::detail {

EnvelopeFit fit_envelope(const std::vector<double>& r, const std::vector<double>& y,
                         const MomentSequence& M, EnvelopeKind kind, double tol) {
    if (r.size() != y.size() || r.size() < 6)
        throw DomainError("envelope fit needs at least 6 aligned samples");
    EnvelopeFit fit;
    for (double v : y)
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) return fit;

    const double sign = kind == EnvelopeKind::growth ? 1.0 : -1.0;
    const std::size_t split = (2 * r.size()) / 3;

    auto evaluate = [&](double K, EnvelopeFit& out) {
        double inner = -std::numeric_limits<double>::infinity(), outer = inner;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (y[i] == -std::numeric_limits<double>::infinity()) continue;  // f(r) = 0
            const double slack = y[i] - sign * associated_function_best(M, r[i] / K);
            if (i < split) inner = std::max(inner, slack);
            else outer = std::max(outer, slack);
        }
        out.K = K;
        out.logC = std::max(inner, outer);
        if (!std::isfinite(inner) && !std::isfinite(outer)) {
            // identically zero samples
            out.logC = -std::numeric_limits<double>::infinity();
            out.excess = 0.0;
            return true;
        }
        out.excess = std::isfinite(inner) ? outer - inner : 0.0;
        return !(outer > inner + tol);
    };

    constexpr int kSteps = 189;  // 1.05^189 ~ 1e4
    for (int i = 0; i <= kSteps; ++i) {
        const double K = kind == EnvelopeKind::growth ? 1e2 / std::pow(1.05, i) : 1e-2 * std::pow(1.05, i);
        EnvelopeFit trial;
        if (evaluate(K, trial)) {
            trial.ok = true;
            return trial;
        }
    }
    return fit;
}

}  // namespace momsum::detail
