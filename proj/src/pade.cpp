#include "pade.hpp"

#include "momsum/errors.hpp"
#include "quad.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace momsum::detail {

namespace {

// Solves the Pade denominator system for b_1..b_M (b_0 = 1); empty result when
// the Toeplitz block is numerically singular.
std::optional<std::vector<QComplex>> denominator(const std::vector<QComplex>& c, int L, int M) {
    std::vector<QComplex> b(static_cast<std::size_t>(M) + 1);
    b[0] = QComplex(1);
    if (M == 0) return b;
    auto coef = [&](int k) { return k < 0 ? QComplex() : c[static_cast<std::size_t>(k)]; };
    const auto n = static_cast<std::size_t>(M);
    std::vector<std::vector<QComplex>> A(n, std::vector<QComplex>(n + 1));
    Quad scale = 0;
    for (int i = 1; i <= M; ++i) {
        for (int j = 1; j <= M; ++j) {
            A[i - 1][j - 1] = coef(L + i - j);
            scale = fmaxq(scale, abs(A[i - 1][j - 1]));
        }
        A[i - 1][n] = -coef(L + i);
    }
    if (scale == 0) return std::nullopt;
    const Quad tol = scale * static_cast<Quad>(1e-28);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
        if (abs(A[piv][col]) <= tol) return std::nullopt;
        std::swap(A[piv], A[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const QComplex f = A[r][col] / A[col][col];
            for (std::size_t k = col; k <= n; ++k) A[r][k] -= f * A[col][k];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        QComplex acc = A[i][n];
        for (std::size_t k = i + 1; k < n; ++k) acc -= A[i][k] * b[k + 1];
        b[i + 1] = acc / A[i][i];
    }
    return b;
}

void trim(std::vector<QComplex>& p) {
    Quad mx = 0;
    for (const auto& x : p) mx = fmaxq(mx, abs(x));
    while (p.size() > 1 && abs(p.back()) <= mx * static_cast<Quad>(1e-30)) p.pop_back();
}

// Aberth-Ehrlich simultaneous iteration.
std::vector<QComplex> roots(const std::vector<QComplex>& p) {
    const std::size_t n = p.size() - 1;
    std::vector<QComplex> z(n);
    if (n == 0) return z;
    if (n == 1) {
        z[0] = -p[0] / p[1];
        return z;
    }
    Quad R = 0;
    const Quad lead = abs(p[n]);
    for (std::size_t k = 0; k < n; ++k) {
        const Quad a = abs(p[k]);
        if (a > 0) R = fmaxq(R, powq(a / lead, static_cast<Quad>(1) / static_cast<Quad>(n - k)));
    }
    if (R == 0) R = 1;
    for (std::size_t i = 0; i < n; ++i)
        z[i] = polar(R, static_cast<Quad>(2 * kPi * static_cast<double>(i) / static_cast<double>(n) + 0.4));

    auto eval = [&](const QComplex& x, QComplex& dp) {
        QComplex v = p[n];
        dp = QComplex();
        for (std::size_t k = n; k-- > 0;) {
            dp = dp * x + v;
            v = v * x + p[k];
        }
        return v;
    };
    const Quad eps = static_cast<Quad>(1e-28);
    for (int it = 0; it < 2000; ++it) {
        bool done = true;
        for (std::size_t i = 0; i < n; ++i) {
            QComplex dp;
            const QComplex v = eval(z[i], dp);
            if (v.re == 0 && v.im == 0) continue;
            const QComplex w = v / dp;
            QComplex s;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s += QComplex(1) / (z[i] - z[j]);
            const QComplex corr = w / (QComplex(1) - w * s);
            z[i] -= corr;
            if (abs(corr) > eps * fmaxq(abs(z[i]), static_cast<Quad>(1e-20))) done = false;
        }
        if (done) break;
    }
    return z;
}

}  // namespace

Pade::Pade(const std::vector<Complex>& coeffs, int L, int M, double doublet_tol) {
    if (L < 0 || M < 0) throw DomainError("Pade degrees must be >= 0");
    if (static_cast<std::size_t>(L + M) + 1 > coeffs.size())
        throw DomainError("Pade degrees L + M = " + std::to_string(L + M) +
                          " exceed the series truncation " + std::to_string(coeffs.size() - 1));
    if (std::all_of(coeffs.begin(), coeffs.end(), [](Complex x) { return x == Complex{}; })) {
        zero_ = true;
        return;
    }
    // Work in x = zeta / R with R a power of two that balances the first and
    // last coefficients; rapidly decaying coefficients otherwise make the
    // Toeplitz block look singular.
    const std::size_t n_used = static_cast<std::size_t>(L + M) + 1;
    int first = -1, last = -1;
    for (std::size_t k = 0; k < n_used; ++k)
        if (coeffs[k] != Complex{}) {
            if (first < 0) first = static_cast<int>(k);
            last = static_cast<int>(k);
        }
    int e2 = 0;
    if (first >= 0 && last > first) {
        const double lr = (std::log2(std::abs(coeffs[first])) - std::log2(std::abs(coeffs[last]))) / (last - first);
        e2 = static_cast<int>(std::lround(lr));
    }
    const double R = std::ldexp(1.0, e2);
    std::vector<QComplex> c;
    c.reserve(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        c.emplace_back(coeffs[k] * std::ldexp(1.0, e2 * static_cast<int>(k)));

    std::optional<std::vector<QComplex>> b;
    while (true) {
        b = denominator(c, L, M);
        if (b || M == 0) break;
        --M;
        if (L > 0) --L;
    }
    if (!b) b = std::vector<QComplex>{QComplex(1)};
    L_ = L;
    M_ = M;

    std::vector<QComplex> a(static_cast<std::size_t>(L) + 1);
    for (int i = 0; i <= L; ++i) {
        QComplex acc;
        for (int j = 0; j <= std::min(i, M); ++j) acc += (*b)[j] * c[static_cast<std::size_t>(i - j)];
        a[i] = acc;
    }
    trim(a);
    trim(*b);
    Quad amax = 0;
    for (const auto& x : a) amax = fmaxq(amax, abs(x));
    if (amax == 0) {
        zero_ = true;
        return;
    }
    const int deg_gap = static_cast<int>(b->size()) - static_cast<int>(a.size());
    kappa_ = (a.back() / b->back()).to_complex() * std::ldexp(1.0, e2 * deg_gap);
    for (const auto& r : roots(a)) zeros_.push_back(r.to_complex() * R);
    for (const auto& r : roots(*b)) poles_.push_back(r.to_complex() * R);

    // Froissart doublets
    std::vector<bool> zero_used(zeros_.size(), false);
    std::vector<Complex> kept_poles;
    for (const auto& pole : poles_) {
        std::size_t best = zeros_.size();
        double dist = 0.0;
        for (std::size_t i = 0; i < zeros_.size(); ++i) {
            if (zero_used[i]) continue;
            const double d = std::abs(zeros_[i] - pole);
            if (best == zeros_.size() || d < dist) {
                best = i;
                dist = d;
            }
        }
        if (best < zeros_.size() && dist < doublet_tol * std::max(1.0, std::abs(pole))) {
            zero_used[best] = true;
            ++removed_;
        } else {
            kept_poles.push_back(pole);
        }
    }
    std::vector<Complex> kept_zeros;
    for (std::size_t i = 0; i < zeros_.size(); ++i)
        if (!zero_used[i]) kept_zeros.push_back(zeros_[i]);
    zeros_ = std::move(kept_zeros);
    poles_ = std::move(kept_poles);
}

Complex Pade::operator()(Complex x) const {
    if (zero_) return 0.0;
    Complex v = kappa_;
    const std::size_t n = std::max(zeros_.size(), poles_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i < zeros_.size()) v *= x - zeros_[i];
        if (i < poles_.size()) v /= x - poles_[i];
    }
    return v;
}

}  // namespace momsum::detail
