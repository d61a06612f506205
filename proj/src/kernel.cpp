#include "momsum/kernel.hpp"

#include "envelope.hpp"
#include "momsum/errors.hpp"
#include "quad.hpp"
#include "quadrature.hpp"
#include "special.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace momsum {

namespace {

constexpr double kDoubleSeriesLimit = 2.0;    // |z|^{1/s} below which binary64 suffices
constexpr double kQuadSeriesLimit = 30.0;     // |z|^{1/s} below which the series is used
constexpr double kQuadTableOrder = 160.0;     // coefficients kept up to s p <= this

}  // namespace

struct Kernel::State {
    double s = 1.0;
    double R0 = 0.0;
    std::vector<double> rgamma_d;        // 1/Gamma(1+sp)
    std::vector<detail::Quad> rgamma_q;  // same in binary128
    KernelMetadata meta;

    Complex E_series_double(Complex z) const;
    Complex E_series_quad(Complex z) const;
    Complex E_asymptotic(Complex z) const;
};

Complex Kernel::State::E_series_double(Complex z) const {
    Complex acc = 0.0, zp = 1.0;
    for (std::size_t p = 0; p < rgamma_d.size(); ++p) {
        const Complex term = rgamma_d[p] * zp;
        acc += term;
        if (s * p > 5.0 && std::abs(term) <= 1e-18 * std::abs(acc)) break;
        zp *= z;
    }
    return acc;
}

Complex Kernel::State::E_series_quad(Complex z) const {
    using detail::QComplex;
    const QComplex zq(z);
    QComplex acc, zp(1);
    detail::Quad maxterm = 0;
    const double rho = std::pow(std::abs(z), 1.0 / s);
    for (std::size_t p = 0; p < rgamma_q.size(); ++p) {
        const QComplex term = rgamma_q[p] * zp;
        acc += term;
        const detail::Quad mag = abs(term);
        if (mag > maxterm) maxterm = mag;
        if (s * p > rho + 10.0 && mag <= maxterm * 1e-34) return acc.to_complex();
        zp *= zq;
    }
    return acc.to_complex();
}

Complex Kernel::State::E_asymptotic(Complex z) const {
    const double r = std::abs(z), theta = std::arg(z);
    const double rho = std::pow(r, 1.0 / s);
    Complex acc = 0.0;
    // exponential contributions from every sheet with |arg z + 2 pi m| < s pi
    const int m_lo = static_cast<int>(std::ceil((-s * kPi - theta) / (2.0 * kPi)));
    const int m_hi = static_cast<int>(std::floor((s * kPi - theta) / (2.0 * kPi)));
    for (int m = m_lo; m <= m_hi; ++m) {
        const double ang = (theta + 2.0 * kPi * m) / s;
        if (std::abs(theta + 2.0 * kPi * m) >= s * kPi) continue;
        acc += std::exp(rho * Complex(std::cos(ang), std::sin(ang))) / s;
    }
    // algebraic tail - sum_k z^{-k} / Gamma(1 - s k), cut at the smallest term
    const double lr = std::log(r);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 400; ++k) {
        const double x = s * k;
        const double sn = std::sin(kPi * x);
        if (x == std::floor(x)) continue;  // 1/Gamma vanishes at nonpositive integers
        const double logmag = -k * lr + std::lgamma(x) + std::log(std::abs(sn) / kPi);
        if (logmag > prev) break;
        prev = logmag;
        const double sign = sn > 0 ? 1.0 : -1.0;
        acc -= sign * std::exp(logmag) * Complex(std::cos(-k * theta), std::sin(-k * theta));
        if (logmag < std::log(std::abs(acc) + 1e-300) - 40.0) break;
    }
    return acc;
}

double Kernel::s() const noexcept { return st_->s; }
const KernelMetadata& Kernel::metadata() const noexcept { return st_->meta; }
double Kernel::series_radius() const noexcept { return st_->R0; }

Complex Kernel::e_polar(double r, double theta) const {
    if (r < 0.0) throw DomainError("e_polar requires r >= 0");
    if (r == 0.0) return 0.0;
    const double s = st_->s;
    const double rho = std::pow(r, 1.0 / s);
    const Complex w = rho * Complex(std::cos(theta / s), std::sin(theta / s));
    return w * std::exp(-w) / s;
}

double Kernel::log_abs_e(double r, double theta) const {
    const double s = st_->s;
    const double rho = std::pow(r, 1.0 / s);
    return -std::log(s) + std::log(rho) - rho * std::cos(theta / s);
}

Complex Kernel::e(Complex z) const {
    if (z == Complex{}) return 0.0;
    const double theta = std::arg(z);
    if (std::abs(theta) >= st_->s * kPi)
        throw DomainError("e is evaluated outside its sector |arg z| < s pi (arg z = " +
                          std::to_string(theta) + ")");
    return e_polar(std::abs(z), theta);
}

Complex Kernel::E(Complex z) const {
    const double s = st_->s;
    if (s == 1.0) return std::exp(z);
    if (s == 2.0) return std::cosh(std::sqrt(z));
    const double rho = std::pow(std::abs(z), 1.0 / s);
    if (rho <= kDoubleSeriesLimit) return st_->E_series_double(z);
    if (rho <= kQuadSeriesLimit) return st_->E_series_quad(z);
    return st_->E_asymptotic(z);
}

Complex Kernel::moment(Complex x) const {
    if (x == Complex{}) return 1.0;
    if (!(x.real() > 0.0)) throw DomainError("moment function requires Re x > 0");
    return detail::gamma_complex(1.0 + st_->s * x);
}

double Kernel::moment(double x) const {
    if (x < 0.0) throw DomainError("moment function requires x >= 0");
    return detail::gamma_real(1.0 + st_->s * x);
}

MomentSequence Kernel::moments(int N) const {
    return make_sequence(SequenceKind::gamma_gevrey, {{"s", st_->s}}, N);
}

MomentSequence Kernel::gevrey_sequence(int N) const {
    return make_sequence(SequenceKind::factorial_power, {{"s", st_->s}}, N);
}

Kernel make_gevrey_kernel(double s) {
    if (!(s > 0.0 && s <= 2.0))
        throw DomainError("Gevrey kernel order must lie in (0, 2], got s = " + std::to_string(s));
    auto st = std::make_shared<Kernel::State>();
    st->s = s;
    st->R0 = std::pow(kQuadSeriesLimit, s);
    const auto nq = static_cast<std::size_t>(std::ceil(kQuadTableOrder / s)) + 2;
    st->rgamma_q.resize(nq);
    st->rgamma_d.resize(static_cast<std::size_t>(std::ceil(60.0 / s)) + 2);
    for (std::size_t p = 0; p < nq; ++p) {
        const detail::Quad x = 1 + static_cast<detail::Quad>(s) * static_cast<detail::Quad>(p);
        st->rgamma_q[p] = 1 / tgammaq(x);
    }
    for (std::size_t p = 0; p < st->rgamma_d.size(); ++p)
        st->rgamma_d[p] = 1.0 / detail::gamma_real(1.0 + s * p);

    Kernel k;
    k.st_ = st;

    KernelMetadata& meta = st->meta;
    meta.alpha = (k.log_abs_e(1e-4, 0.0) - k.log_abs_e(1e-6, 0.0)) / std::log(100.0);
    auto max_abs_E = [&](double a, double b) {
        double m = 0.0;
        for (int i = 0; i <= 40; ++i) m = std::max(m, std::abs(k.E(-(a + (b - a) * i / 40.0))));
        return m;
    };
    const double decay = -std::log(max_abs_E(50.0, 100.0) / max_abs_E(5.0, 10.0)) / std::log(10.0);
    meta.beta = std::clamp(std::isfinite(decay) ? decay : 1.0, 0.0, 1.0);
    const FlatnessFit flat = fit_flatness(k, 0.0);
    meta.flat_C = flat.C;
    meta.flat_K = flat.K;
    meta.rho2 = rho_factor(k.gevrey_sequence(20), 2.0);
    return k;
}

Complex eval_kernel(const Kernel& k, KernelPart which, Complex z) {
    switch (which) {
        case KernelPart::e: return k.e(z);
        case KernelPart::E: return k.E(z);
        case KernelPart::moment: return k.moment(z);
    }
    throw DomainError("unknown kernel part");
}

QuadValue cauchy_kernel_identity(const Kernel& k, Complex z, Complex w, double tau) {
    if (w == Complex{}) throw DomainError("cauchy_kernel_identity requires w != 0");
    const double s = k.s();
    const double phi = detail::arg_near(w, -tau) + tau;
    if (std::abs(phi) >= s * kPi / 2.0)
        throw DomainError("tau outside the admissible window (-arg w - s pi/2, -arg w + s pi/2)");
    const Complex c = std::polar(1.0, phi / s);
    const double aw = std::abs(w);
    const Complex dir = std::polar(1.0, tau);
    auto g = [&](double v) { return k.E(z * (std::pow(v, s) / aw) * dir); };
    const auto res = detail::exp_weighted_integral(c, g);
    return {res.value / w, res.error / aw};
}

double contour_admissible_radius(const AnalyticGerm<Complex>& u, const Kernel& k,
                                 const ContourOptions& opt) {
    const double r1 = opt.radius_fraction * u.radius;
    return r1 / (2.0 * k.metadata().rho2 * k.metadata().flat_K);
}

QuadValue contour_moment_derivative(const AnalyticGerm<Complex>& u, const Kernel& k, Complex z,
                                    int n, const ContourOptions& opt) {
    if (n < 0) throw DomainError("moment derivative order must be >= 0");
    if (!(opt.radius_fraction > 0.0 && opt.radius_fraction < 1.0))
        throw DomainError("contour radius fraction must lie in (0,1)");
    const double rt = contour_admissible_radius(u, k, opt);
    if (std::abs(z) > rt)
        throw DomainError("|z| = " + std::to_string(std::abs(z)) +
                          " exceeds the circular-contour radius " + std::to_string(rt) +
                          "; use the coefficient-rule moment_derivative instead");
    const double s = k.s();
    const double r1 = opt.radius_fraction * u.radius;
    double quad_err = 0.0;

    auto node = [&](double theta) {
        const Complex w = std::polar(r1, theta);
        const Complex back = std::polar(1.0 / r1, -theta);
        auto g = [&](double v) {
            const Complex xi = std::pow(v, s) * back;
            return std::pow(xi, n) * k.E(z * xi);
        };
        const auto inner = detail::exp_weighted_integral(1.0, g);
        quad_err += inner.error * std::abs(u.series.evaluate(w));
        return u.series.evaluate(w) * inner.value;
    };

    int K = std::max(4, opt.min_nodes);
    Complex sum = 0.0;
    for (int j = 0; j < K; ++j) sum += node(2.0 * kPi * j / K);
    Complex val = sum / static_cast<double>(K);
    while (K < opt.max_nodes) {
        Complex extra = 0.0;
        for (int j = 0; j < K; ++j) extra += node(2.0 * kPi * (j + 0.5) / K);
        sum += extra;
        K *= 2;
        const Complex next = sum / static_cast<double>(K);
        const double diff = std::abs(next - val);
        val = next;
        if (diff <= opt.tol * std::max(1.0, std::abs(val)))
            return {val, diff + quad_err / K};
    }
    throw AccuracyError("contour trapezoid rule did not converge with " + std::to_string(K) + " nodes");
}

FlatnessFit fit_flatness(const Kernel& k, double theta, double r_min, double r_max) {
    if (!(r_min > 0.0 && r_max > r_min)) throw DomainError("invalid flatness radius range");
    std::vector<double> r, y;
    constexpr int kSamples = 60;
    for (int i = 0; i < kSamples; ++i) {
        const double x = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (kSamples - 1));
        r.push_back(x);
        y.push_back(k.log_abs_e(x, theta));
    }
    const auto fit = detail::fit_envelope(r, y, k.gevrey_sequence(20), detail::EnvelopeKind::flatness);
    FlatnessFit out;
    out.theta = theta;
    out.ok = fit.ok;
    out.K = fit.K;
    out.C = std::exp(fit.logC);
    return out;
}

}  // namespace momsum
