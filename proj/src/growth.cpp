#include "momsum/growth.hpp"

#include "momsum/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace momsum {

GrowthFit fit_growth(const std::vector<double>& mags, const MomentSequence& base, Window window) {
    std::vector<double> logs(mags.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        if (std::isnan(mags[i])) throw DomainError("magnitude " + std::to_string(i) + " is NaN");
        logs[i] = mags[i] > 0.0 ? std::log(mags[i]) : -std::numeric_limits<double>::infinity();
    }
    return fit_growth_log(logs, base, window);
}

GrowthFit fit_growth_log(const std::vector<double>& log_mags, const MomentSequence& base, Window window) {
    const int last_available = static_cast<int>(log_mags.size()) - 1;
    if (window.last < 0) window.last = last_available;
    if (window.first < 0 || window.first > window.last)
        throw DomainError("empty fit window [" + std::to_string(window.first) + ", " +
                          std::to_string(window.last) + "]");
    if (window.last > last_available)
        throw ShapeError("fit window ends at " + std::to_string(window.last) + " but only " +
                         std::to_string(log_mags.size()) + " magnitudes were given");
    if (window.last - window.first + 1 < 8)
        throw DomainError("fit window must contain at least 8 indices");
    if (window.last > base.N())
        throw ShapeError("base sequence of length N = " + std::to_string(base.N()) +
                         " does not cover the fit window");

    std::vector<int> idx;
    for (int n = window.first; n <= window.last; ++n)
        if (std::isfinite(log_mags[n])) idx.push_back(n);
    if (idx.size() < 8)
        throw DegenerateInputError("only " + std::to_string(idx.size()) +
                                   " nonzero magnitudes in the fit window (need 8)");

    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd X(m, 3);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int n = idx[static_cast<std::size_t>(i)];
        X(i, 0) = 1.0;
        X(i, 1) = n;
        X(i, 2) = base.log_value(n);
        y(i) = log_mags[n];
    }
    // Column scaling keeps the rank decision independent of units.
    Eigen::Vector3d scale;
    for (int c = 0; c < 3; ++c) scale(c) = std::max(X.col(c).norm(), 1e-300);
    const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3)
        throw DegenerateInputError("regressors {1, n, log M_n} are collinear over the window (base " +
                                   base.description() + ")");
    const Eigen::Vector3d beta = qr.solve(y).cwiseQuotient(scale);

    GrowthFit fit;
    fit.logC = beta(0);
    fit.logA = beta(1);
    fit.s_est = beta(2);
    fit.residual = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(m));
    fit.window = window;
    fit.used = static_cast<int>(m);
    return fit;
}

namespace {

struct AFit {
    bool ok = false;
    double A = 0.0;
    double logC = 0.0;
};

// slack[i][N] = log|rem| - log M_N - N log|z|  (-inf where the remainder vanishes)
AFit smallest_A(const std::vector<std::vector<double>>& slack, int orders) {
    AFit out;
    if (orders < 2) {
        out.ok = true;
        out.A = 1.0;
        double c = -std::numeric_limits<double>::infinity();
        for (const auto& row : slack)
            if (!row.empty()) c = std::max(c, row[0]);
        out.logC = c;
        return out;
    }
    const int split = orders / 2;
    for (int k = 0; k <= 283; ++k) {  // A from 1e-3 to ~1e3
        const double logA = std::log(1e-3) + k * std::log(1.05);
        double lower = -std::numeric_limits<double>::infinity(), upper = lower;
        for (const auto& row : slack)
            for (int N = 0; N < orders; ++N) {
                const double v = row[N] - N * logA;
                if (N < split) lower = std::max(lower, v);
                else upper = std::max(upper, v);
            }
        if (!std::isfinite(upper) || upper <= lower + std::log(2.0)) {
            out.ok = true;
            out.A = std::exp(logA);
            out.logC = std::max(lower, upper);
            return out;
        }
    }
    return out;
}

}  // namespace

RemainderFit check_asymptotic_remainder(const std::vector<RemainderSample>& samples, const MomentSequence& M) {
    RemainderFit fit;
    if (samples.empty()) throw DomainError("check_asymptotic_remainder needs at least one sample");
    std::size_t orders = std::numeric_limits<std::size_t>::max();
    for (const auto& s : samples) orders = std::min(orders, s.partial_sums.size());
    if (orders == 0) throw DomainError("samples carry no partial sums");
    if (static_cast<int>(orders) - 1 > M.N())
        throw ShapeError("moment sequence does not cover the truncation orders");
    fit.orders = static_cast<int>(orders);
    fit.samples = static_cast<int>(samples.size());

    std::vector<std::vector<double>> slack;
    bool any = false;
    for (const auto& s : samples) {
        const double lz = std::log(std::abs(s.z));
        std::vector<double> row(orders);
        for (std::size_t N = 0; N < orders; ++N) {
            const double rem = std::abs(s.value - s.partial_sums[N]);
            if (!std::isfinite(rem)) return fit;
            if (rem == 0.0) {
                row[N] = -std::numeric_limits<double>::infinity();
                continue;
            }
            any = true;
            row[N] = std::log(rem) - M.log_value(N) - static_cast<double>(N) * lz;
        }
        slack.push_back(std::move(row));
    }
    if (!any) {
        fit.consistent = true;
        return fit;
    }
    const AFit full = smallest_A(slack, static_cast<int>(orders));
    if (!full.ok) return fit;
    fit.A = full.A;
    fit.C = std::exp(full.logC);
    if (orders >= 4) {
        const AFit half = smallest_A(slack, static_cast<int>(orders / 2));
        fit.logA_half = half.ok ? std::log(half.A) : std::numeric_limits<double>::infinity();
    } else {
        fit.logA_half = std::log(full.A);
    }
    fit.consistent = std::isfinite(fit.C);
    return fit;
}

}  // namespace momsum
